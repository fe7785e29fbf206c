#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace mhdlab {

struct CliOptions {
  std::string command;
  std::filesystem::path config;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed; // overrides every seed in the config
  bool quiet = false;
};

/// Executes one subcommand from a JSON config. Writes artifacts and a run
/// manifest into the output directory. Returns the process exit code:
/// 0 success, 1 numerical failure (diagnostics written), 2 config error.
int run_config(const CliOptions& opts);

} // namespace mhdlab
