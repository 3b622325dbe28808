#include "ddmpc/io/manifest.hpp"

#include <chrono>
#include <ctime>

namespace ddmpc::io {

void RunManifest::write(const std::filesystem::path& path) const {
  ConfigFile out = config;
  out.set("manifest.version", DDMPC_VERSION);
  out.set("manifest.command", command);

  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  out.set("manifest.created", stamp);

  std::string seed_list;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) seed_list += ",";
    seed_list += std::to_string(seeds[i]);
  }
  out.set("manifest.seeds", seed_list);
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    out.set("manifest.artifact" + std::to_string(i), artifacts[i]);
  }
  out.write_file(path);
}

}  // namespace ddmpc::io
