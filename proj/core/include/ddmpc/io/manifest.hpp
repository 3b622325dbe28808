#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ddmpc/io/config_file.hpp"

namespace ddmpc::io {

#ifndef DDMPC_VERSION
#define DDMPC_VERSION "0.1.0"
#endif

/// Every CLI run writes one of these next to its outputs. The embedded
/// configuration snapshot is the fully resolved config (file values plus
/// command-line overrides), so passing a manifest back to the same command
/// reproduces the run bit-identically. The [manifest] section itself is
/// bookkeeping and ignored when a manifest is used as a config.
struct RunManifest {
  std::string command;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> artifacts;
  ConfigFile config;

  void write(const std::filesystem::path& path) const;
};

}  // namespace ddmpc::io
