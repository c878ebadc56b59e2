#include <CLI11.hpp>
#include <iostream>

#include "r13fem/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"r13fem: linearized R13 solver with CIP stabilization"};
  app.require_subcommand(1);

  r13::CommandOptions opts;
  double kn = 0.0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--kn", kn, "override the Knudsen number");
    sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  };
  auto* solve = app.add_subcommand("solve", "assemble and solve one problem");
  auto* conv = app.add_subcommand("convergence", "mesh refinement study against the finest solve");
  auto* sweep = app.add_subcommand("kn-sweep", "mass flow over a list of Knudsen numbers");
  auto* sample = app.add_subcommand("sample", "line profiles of a solution");
  for (auto* sub : {solve, conv, sweep, sample}) add_common(sub);

  CLI11_PARSE(app, argc, argv);
  for (auto* sub : {solve, conv, sweep, sample}) {
    if (sub->count("--kn")) opts.kn = kn;
  }

  if (*solve) return r13::cmd_solve(opts, std::cout, std::cerr);
  if (*conv) return r13::cmd_convergence(opts, std::cout, std::cerr);
  if (*sweep) return r13::cmd_kn_sweep(opts, std::cout, std::cerr);
  return r13::cmd_sample(opts, std::cout, std::cerr);
}
