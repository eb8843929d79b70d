#pragma once

#include "tvnewton/config.hpp"
#include "tvnewton/l1_problem.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tvn {

/// Names accepted by run_solver.
const std::vector<std::string>& solver_names();

/// Default eps_opt per solver: 1e-9 for alm, 1e-6 for the baselines.
double default_eps_opt(const std::string& solver);

/// Runs one solver with parameters read from the [solver] section. Missing
/// keys are filled with their defaults, so config doubles as the record of
/// what was used.
SolveResult<double> run_solver(const std::string& name, const L1Problem<double>& p, Config& config,
                               const Vector<double>* reference = nullptr);

/// Exit codes shared by the subcommands.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNotConverged = 2 };

/// Solves one problem and writes recon.csv, recon.pgm, log.csv and
/// resolved-config to output.dir.
int cmd_solve(Config& config, std::ostream& out, std::ostream& err);

/// Runs an ALM reference at compare.reference_eps_opt, then every solver in
/// compare.solvers with error columns against it. Writes log_reference.csv,
/// log_<solver>.csv, summary.csv and resolved-config.
int cmd_compare(Config& config, std::ostream& out, std::ostream& err);

}  // namespace tvn
