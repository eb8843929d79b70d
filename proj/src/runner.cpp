#include "tvnewton/runner.hpp"

#include "tvnewton/alm.hpp"
#include "tvnewton/baselines.hpp"
#include "tvnewton/io.hpp"
#include "tvnewton/problems.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tvn {

namespace fs = std::filesystem;

const std::vector<std::string>& solver_names() {
  static const std::vector<std::string> names{"alm", "chambolle-pock", "admm", "smoothed-bb"};
  return names;
}

double default_eps_opt(const std::string& solver) { return solver == "alm" ? 1e-9 : 1e-6; }

namespace {

AlmParams<double> alm_params(Config& c) {
  AlmParams<double> a;
  a.eps_opt = c.get_double("solver.eps_opt", default_eps_opt("alm"));
  a.max_outer = c.get_long("solver.max_outer", a.max_outer);
  a.beta = c.get_double("solver.beta", a.beta);
  if (const auto s0 = c.get_optional_double("solver.sigma0")) a.sigma0 = *s0;
  a.warm_start_rho = c.get_long("solver.warm_start_rho", 1) != 0;
  SsnParams<double>& s = a.ssn;
  s.nu = c.get_double("solver.nu", s.nu);
  s.chi1 = c.get_double("solver.chi1", s.chi1);
  s.chi2 = c.get_double("solver.chi2", s.chi2);
  s.chi_bar1 = c.get_double("solver.chi_bar1", s.chi_bar1);
  s.chi_bar2 = c.get_double("solver.chi_bar2", s.chi_bar2);
  s.rho0 = c.get_double("solver.rho0", s.rho0);
  s.eps_approx = c.get_double("solver.eps_approx", s.eps_approx);
  s.eps_newton = c.get_double("solver.eps_newton", s.eps_newton);
  s.eps_newton_decay = c.get_double("solver.eps_newton_decay", s.eps_newton_decay);
  s.max_outer = static_cast<int>(c.get_long("solver.ssn_max_iter", s.max_outer));
  s.max_cg = static_cast<int>(c.get_long("solver.max_cg", s.max_cg));
  s.max_halvings = static_cast<int>(c.get_long("solver.max_halvings", s.max_halvings));
  const std::string pre = c.get_string("solver.newton_preconditioner", "laplacian");
  if (pre == "laplacian")
    s.newton_preconditioner = NewtonPreconditioner::Laplacian;
  else if (pre == "jacobi")
    s.newton_preconditioner = NewtonPreconditioner::Jacobi;
  else if (pre == "none")
    s.newton_preconditioner = NewtonPreconditioner::None;
  else
    throw ConfigurationError("solver.newton_preconditioner: expected laplacian, jacobi or none, got '" + pre + "'");
  a.validate();
  a.ssn.validate();
  return a;
}

AdmmZUpdate parse_z_update(const std::string& text) {
  if (text == "as-printed") return AdmmZUpdate::AsPrinted;
  if (text == "gauss-seidel") return AdmmZUpdate::GaussSeidel;
  throw ConfigurationError("solver.admm_z_update: expected as-printed or gauss-seidel, got '" + text + "'");
}

void check_positive(double v, const char* key) {
  if (!(v > 0.0)) throw ConfigurationError(std::string(key) + ": must be positive");
}

}  // namespace

SolveResult<double> run_solver(const std::string& name, const L1Problem<double>& p, Config& c,
                               const Vector<double>* reference) {
  if (name == "alm") return alm_solve<double>(p, alm_params(c), std::nullopt, std::nullopt, reference);
  if (name == "chambolle-pock") {
    ChambollePockParams<double> q;
    q.eps_opt = c.get_double("solver.eps_opt", default_eps_opt(name));
    q.max_iter = c.get_long("solver.max_outer", q.max_iter);
    q.tau = c.get_double("solver.cp_tau", 0.0);
    q.sigma = c.get_double("solver.cp_sigma", 0.0);
    q.theta = c.get_double("solver.cp_theta", q.theta);
    q.cg_rtol = c.get_double("solver.cg_rtol", q.cg_rtol);
    q.max_cg = static_cast<int>(c.get_long("solver.max_cg", q.max_cg));
    check_positive(q.cg_rtol, "solver.cg_rtol");
    return chambolle_pock<double>(p, q, reference);
  }
  if (name == "admm") {
    AdmmParams<double> q;
    q.eps_opt = c.get_double("solver.eps_opt", default_eps_opt(name));
    q.max_iter = c.get_long("solver.max_outer", q.max_iter);
    q.sigma = c.get_double("solver.admm_sigma", 0.0);
    q.cg_rtol = c.get_double("solver.cg_rtol", q.cg_rtol);
    q.max_cg = static_cast<int>(c.get_long("solver.max_cg", q.max_cg));
    q.z_update = parse_z_update(c.get_string("solver.admm_z_update", "as-printed"));
    check_positive(q.cg_rtol, "solver.cg_rtol");
    return admm<double>(p, q, reference);
  }
  if (name == "smoothed-bb") {
    SmoothedBbParams<double> q;
    q.eps_opt = c.get_double("solver.eps_opt", default_eps_opt(name));
    q.max_iter = c.get_long("solver.max_outer", q.max_iter);
    q.epsilon_smooth = c.get_double("solver.epsilon_smooth", q.epsilon_smooth);
    return smoothed_bb<double>(p, q, reference);
  }
  throw ConfigurationError("solver.name: unknown solver '" + name + "' (alm, chambolle-pock, admm, smoothed-bb)");
}

namespace {

fs::path prepare_dir(Config& c) {
  const fs::path dir = c.get_string("output.dir", "out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigurationError("output.dir: cannot create '" + dir.string() + "': " + ec.message());
  return dir;
}

std::optional<Vector<double>> load_reference(Config& c, Index n) {
  if (!c.has("output.reference")) return std::nullopt;
  const ImageGrid<double> ref = read_csv_image(c.require_string("output.reference"));
  if (ref.values.size() != n)
    throw ConfigurationError("output.reference: image has " + std::to_string(ref.values.size()) +
                             " pixels, expected " + std::to_string(n));
  return ref.values;
}

void report(std::ostream& out, const std::string& name, const SolveResult<double>& r) {
  out << name << ": " << to_string(r.status) << " after " << r.iterations << " iterations, rel_residual "
      << (r.r0 > 0 ? r.final_residual / r.r0 : 0.0) << ", " << r.total_time_s << " s, " << r.total_cg
      << " CG iterations";
  if (r.cg_cap_hits > 0) out << " (warning: " << r.cg_cap_hits << " CG calls hit the iteration cap)";
  if (!r.message.empty()) out << " [" << r.message << "]";
  out << '\n';
}

}  // namespace

int cmd_solve(Config& config, std::ostream& out, std::ostream& err) {
  try {
    GeneratedProblem gen = make_problem(config);
    const std::string name = config.get_string("solver.name", "alm");
    const fs::path dir = prepare_dir(config);
    const auto reference = load_reference(config, gen.problem.n());
    const SolveResult<double> r = run_solver(name, gen.problem, config, reference ? &*reference : nullptr);

    ImageGrid<double> img(gen.truth.rows, gen.truth.cols);
    img.values = r.x;
    write_csv_image(img, (dir / "recon.csv").string());
    write_pgm16(img, (dir / "recon.pgm").string());
    write_run_log(r.records, (dir / "log.csv").string());
    config.save((dir / "resolved-config").string());
    report(out, name, r);
    return r.converged() ? kExitOk : kExitNotConverged;
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
}

namespace {

struct SummaryRow {
  std::string solver;
  std::string status;
  double rel_residual = 0.0;
  std::optional<double> err2;
  std::optional<double> err_inf;
  double time_s = 0.0;
  long total_cg = 0;
};

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> names;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    names.push_back(item.substr(b, e - b + 1));
  }
  return names;
}

std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

int cmd_compare(Config& config, std::ostream& out, std::ostream& err) {
  try {
    GeneratedProblem gen = make_problem(config);
    const fs::path dir = prepare_dir(config);
    const std::vector<std::string> names =
        split_names(config.get_string("compare.solvers", "alm, chambolle-pock, admm"));
    if (names.empty()) throw ConfigurationError("compare.solvers: no solver listed");
    for (const auto& n : names)
      if (std::find(solver_names().begin(), solver_names().end(), n) == solver_names().end())
        throw ConfigurationError("compare.solvers: unknown solver '" + n + "'");

    // Each solver sees the shared [solver] keys but its own eps_opt.
    Config ref_cfg = config;
    ref_cfg.set("solver.eps_opt", format_double(config.get_double("compare.reference_eps_opt", 1e-9)));
    const SolveResult<double> ref = run_solver("alm", gen.problem, ref_cfg);
    write_run_log(ref.records, (dir / "log_reference.csv").string());
    report(out, "reference", ref);
    if (!ref.converged()) err << "warning: reference run did not converge; error columns are relative to its last iterate\n";

    bool all_converged = ref.converged();
    std::vector<SummaryRow> rows;
    for (const auto& name : names) {
      Config c = config;
      const std::string key = "compare." + name + "_eps_opt";
      c.set("solver.eps_opt", format_double(config.get_double(key, default_eps_opt(name))));
      SummaryRow row;
      row.solver = name;
      try {
        const SolveResult<double> r = run_solver(name, gen.problem, c, &ref.x);
        write_run_log(r.records, (dir / ("log_" + name + ".csv")).string());
        report(out, name, r);
        row.status = to_string(r.status);
        row.rel_residual = r.r0 > 0 ? r.final_residual / r.r0 : 0.0;
        if (!r.records.empty()) {
          row.err2 = r.records.back().err2;
          row.err_inf = r.records.back().err_inf;
        }
        row.time_s = r.total_time_s;
        row.total_cg = r.total_cg;
        all_converged = all_converged && r.converged();
      } catch (const std::exception& e) {
        err << name << " failed: " << e.what() << '\n';
        row.status = std::string("failed: ") + e.what();
        std::replace(row.status.begin(), row.status.end(), ',', ';');
        all_converged = false;
      }
      rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) { return a.time_s < b.time_s; });

    std::ofstream f(dir / "summary.csv");
    if (!f) throw ConfigurationError("output.dir: cannot write summary.csv");
    f << "solver,status,rel_residual,err2,err_inf,time_s,total_cg\n";
    for (const auto& r : rows)
      f << r.solver << ',' << r.status << ',' << format_double(r.rel_residual) << ',' << opt_field(r.err2) << ','
        << opt_field(r.err_inf) << ',' << format_double(r.time_s) << ',' << r.total_cg << '\n';
    config.save((dir / "resolved-config").string());
    return all_converged ? kExitOk : kExitNotConverged;
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace tvn
