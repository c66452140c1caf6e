#include <CLI11.hpp>
#include <cstdint>
#include <iostream>

#include "wdexp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Weak-disorder expansion engine"};
  app.require_subcommand(1, 1);
  wdexp::CliOptions opts;
  std::string out_dir;
  std::uint64_t seed = 0;
  for (const auto& name : wdexp::command_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " study");
    sub->add_option("--config", opts.config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_flag("--check", opts.check, "exit with code 4 when the study's checks fail");
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--threads", opts.threads, "worker threads (default: WDEXP_THREADS or 1)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "seed for stochastic studies (overrides study.seed)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : wdexp::kExitConfig;
  }
  CLI::App* sub = app.get_subcommands().front();
  opts.command = sub->get_name();
  if (sub->count("--out")) opts.out_dir = out_dir;
  if (sub->count("--seed")) opts.seed = seed;
  return wdexp::run_cli(opts);
}
