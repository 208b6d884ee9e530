#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace wcr::cli {

// Everything a run depends on besides its input files. Loaded from a JSON
// config file (keys as in to_json below); command-line flags override it.
struct RunConfig {
  std::optional<std::string> schema_path;
  double warmup_s = 30.0;
  double variance_target = 0.85;
  std::optional<int> k;  // nullopt = choose automatically within [k_min, k_max]
  int k_min = 1;
  int k_max = 20;
  std::uint64_t seed = 42;
  int restarts = 10;
  std::vector<std::uint64_t> sizes;  // empty = default 16K..8192K grid
  double knee_ratio = 0.01;
  std::optional<std::uint32_t> associativity = 8;  // nullopt = fully associative
  std::uint64_t line_bytes = 64;
  bool write_allocate = true;
  std::uint64_t skip = 0;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// Runs one `wcr` invocation. `args` excludes the program name. Returns the
// process exit status: 0 ok, 1 usage, 2 data validation, 3 I/O.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wcr::cli
