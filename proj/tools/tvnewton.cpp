#include "tvnewton/config.hpp"
#include "tvnewton/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options {
  std::string config_path;
  std::optional<std::string> solver;
  std::optional<std::string> out;
  std::optional<std::string> alpha;
  std::optional<double> eps_opt;
  std::optional<long> seed;
  std::optional<long> max_outer;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("-c,--config", o.config_path, "INI configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory (output.dir)");
  cmd->add_option("--alpha", o.alpha, "regularization weight or 'auto' (problem.alpha)");
  cmd->add_option("--eps-opt", o.eps_opt, "relative residual tolerance (solver.eps_opt)");
  cmd->add_option("--seed", o.seed, "problem seed (problem.seed)");
  cmd->add_option("--max-outer", o.max_outer, "outer iteration cap (solver.max_outer)");
  cmd->add_option("--set", o.sets, "generic override section.key=value, repeatable");
}

// File first, then the named flags, then --set in order given.
tvn::Config resolve(const Options& o) {
  tvn::Config c = tvn::Config::load(o.config_path);
  if (o.solver) c.set("solver.name", *o.solver);
  if (o.out) c.set("output.dir", *o.out);
  if (o.alpha) c.set("problem.alpha", *o.alpha);
  if (o.eps_opt) c.set("solver.eps_opt", tvn::format_double(*o.eps_opt));
  if (o.seed) c.set("problem.seed", std::to_string(*o.seed));
  if (o.max_outer) c.set("solver.max_outer", std::to_string(*o.max_outer));
  for (const auto& s : o.sets) c.set_override(s);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TV-regularized least squares: augmented Lagrangian / semismooth Newton solver and baselines"};
  app.require_subcommand(1);
  Options solve_opts, compare_opts;

  CLI::App* solve = app.add_subcommand("solve", "solve one problem with one solver");
  add_common(solve, solve_opts);
  solve->add_option("--solver", solve_opts.solver, "alm | chambolle-pock | admm | smoothed-bb (solver.name)");

  CLI::App* compare = app.add_subcommand("compare", "run a reference ALM solve and compare solvers against it");
  add_common(compare, compare_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tvn::kExitConfig;
  }

  try {
    if (solve->parsed()) {
      tvn::Config c = resolve(solve_opts);
      return tvn::cmd_solve(c, std::cout, std::cerr);
    }
    tvn::Config c = resolve(compare_opts);
    return tvn::cmd_compare(c, std::cout, std::cerr);
  } catch (const tvn::ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return tvn::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tvn::kExitConfig;
  }
}
