#include <CLI11.hpp>

#include "mhdlab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mhdlab: spectral laboratory for the Lagrangian wave-elliptic form of ideal MHD"};
  app.require_subcommand(1);

  mhdlab::CliOptions opts;
  const char* names[] = {"simulate-euler",  "simulate-lagrangian", "cross-validate", "picard",
                         "verify-estimate", "norm",                "dump-cutoffs"};
  const char* descs[] = {"pseudo-spectral Eulerian reference run",
                         "direct coupled wave-elliptic run",
                         "compare the two solvers on one scenario",
                         "fixed-point iteration with contraction diagnostics",
                         "ensemble ratio studies of the inequality suite",
                         "evaluate a weighted norm of a dumped field",
                         "tabulate the smooth cutoff profiles"};
  for (size_t i = 0; i < std::size(names); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", opts.config, "JSON experiment config")->required();
    sub->add_option("--out", opts.out, "output directory (default: out)");
    sub->add_option("--seed", [&opts](const std::vector<std::string>& v) {
      opts.seed = std::stoull(v.at(0));
      return true;
    }, "override every seed in the config");
    sub->add_flag("--quiet", opts.quiet, "suppress progress output");
  }

  CLI11_PARSE(app, argc, argv);
  opts.command = app.get_subcommands().at(0)->get_name();
  return mhdlab::run_config(opts);
}
