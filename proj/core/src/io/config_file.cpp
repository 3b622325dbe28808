#include "ddmpc/io/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ddmpc/io/format.hpp"

namespace ddmpc::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw std::runtime_error("config: malformed section at line " + std::to_string(line_no));
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: expected key = value at line " + std::to_string(line_no));
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("config: empty key at line " + std::to_string(line_no));
    }
    cfg.values_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad number for " + key + ": '" + it->second + "'");
  }
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const long v = std::stol(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad integer for " + key + ": '" + it->second + "'");
  }
}

std::uint64_t ConfigFile::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad integer for " + key + ": '" + it->second + "'");
  }
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::runtime_error("config: bad boolean for " + key + ": '" + it->second + "'");
}

std::vector<num::Index> ConfigFile::get_sizes(const std::string& key,
                                              const std::vector<num::Index>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<num::Index> sizes;
  std::string token;
  for (const char c : it->second + " ") {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      token += c;
    } else if (c == '-' || c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) {
        sizes.push_back(static_cast<num::Index>(std::stoll(token)));
        token.clear();
      }
    } else {
      throw std::runtime_error("config: bad size list for " + key + ": '" + it->second + "'");
    }
  }
  if (sizes.empty()) throw std::runtime_error("config: empty size list for " + key);
  return sizes;
}

void ConfigFile::set(const std::string& key, const std::string& value) { values_[key] = value; }
void ConfigFile::set_double(const std::string& key, double value) { set(key, format_g17(value)); }
void ConfigFile::set_int(const std::string& key, long long value) { set(key, std::to_string(value)); }
void ConfigFile::set_u64(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }
void ConfigFile::set_bool(const std::string& key, bool value) { set(key, value ? "true" : "false"); }

void ConfigFile::set_sizes(const std::string& key, const std::vector<num::Index>& sizes) {
  std::string v;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) v += "-";
    v += std::to_string(sizes[i]);
  }
  set(key, v);
}

std::string ConfigFile::serialize() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    if (key.find('.') == std::string::npos) out += key + " = " + value + "\n";
  }
  std::string current_section;
  for (const auto& [key, value] : values_) {
    const auto dot = key.rfind('.');
    if (dot == std::string::npos) continue;
    const std::string section = key.substr(0, dot);
    if (section != current_section) {
      if (!out.empty()) out += "\n";
      out += "[" + section + "]\n";
      current_section = section;
    }
    out += key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

void ConfigFile::write_file(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("config: cannot write " + path.string());
  out << serialize();
}

}  // namespace ddmpc::io
