#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ddmpc/num/types.hpp"

namespace ddmpc::io {

/// Flat `key = value` configuration with `[section]` headers; keys are
/// addressed as "section.key". Unknown sections are preserved, so a run
/// manifest (which carries extra bookkeeping sections) re-parses as a valid
/// configuration. Serialization is sorted and deterministic.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::filesystem::path& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Size lists like "50-25-12-6-2" (also accepts comma/space separated).
  std::vector<num::Index> get_sizes(const std::string& key,
                                    const std::vector<num::Index>& fallback) const;

  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long long value);
  void set_u64(const std::string& key, std::uint64_t value);
  void set_bool(const std::string& key, bool value);
  void set_sizes(const std::string& key, const std::vector<num::Index>& sizes);

  std::string serialize() const;
  void write_file(const std::filesystem::path& path) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace ddmpc::io
