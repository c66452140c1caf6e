#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wdexp/config.hpp"

namespace wdexp {

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitConfig = 2, kExitBudget = 3, kExitCheck = 4 };

struct CliOptions {
  std::string command;
  std::string config_path;
  bool check = false;
  std::optional<std::string> out_dir;
  int threads = 0;
  std::optional<std::uint64_t> seed;
};

struct CommandResult {
  bool pass = true;
  std::vector<std::string> files;
  std::vector<std::string> summary;
};

const std::vector<std::string>& command_names();

// Runs one study and writes its outputs under out_dir.
CommandResult run_command(const RunConfig& config, const std::string& out_dir, int threads,
                          std::optional<std::uint64_t> seed);

// Full CLI flow with error-to-exit-code mapping. Messages go to stderr, summaries to stdout.
int run_cli(const CliOptions& options);

}  // namespace wdexp
