#pragma once

#include "tvnewton/l1_problem.hpp"
#include "tvnewton/prox.hpp"
#include "tvnewton/subproblem.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>

namespace tvn {

template <typename Scalar = double>
struct AlmParams {
  Scalar beta = Scalar(0.5);
  /// Penalty growth sequence; must have a divergent sum.
  std::function<Scalar(long)> gamma = [](long l) { return Scalar(5) / (Scalar(5) + Scalar(l)); };
  std::optional<Scalar> sigma0;  // default 10 lambda_max(A^T A) / lambda_max(B^T B)
  Scalar eps_opt = Scalar(1e-9);
  long max_outer = 500;
  bool warm_start_rho = true;
  SsnParams<Scalar> ssn;

  void validate() const {
    if (!(beta > Scalar(0) && beta < Scalar(1))) throw ConfigurationError("beta: must lie in (0,1)");
    if (!gamma) throw ConfigurationError("gamma: schedule is required");
    if (sigma0 && !(*sigma0 > Scalar(0))) throw ConfigurationError("sigma0: must be positive");
    if (!(eps_opt >= Scalar(0))) throw ConfigurationError("eps_opt: must be nonnegative");
    if (max_outer < 0) throw ConfigurationError("max_outer: must be nonnegative");
  }
};

template <typename Scalar = double>
struct AlmState {
  Vector<Scalar> x;
  Vector<Scalar> z;
  Vector<Scalar> zeta_star;
  Scalar sigma = Scalar(0);
  long sched = 0;  // number of penalty increases so far
  Scalar rho_carry = Scalar(1);
  long k = 0;
  Scalar feasibility = Scalar(0);       // |Bx - z| of the current iterate
  Scalar initial_lagrangian_grad = Scalar(0);  // |grad_x L_sigma0(x0, z0, zeta0)|
};

/// grad_x L_sigma(x, z, zeta*) = A^T(Ax - b) + B^T(zeta* + sigma(Bx - z)).
template <typename Scalar>
Vector<Scalar> lagrangian_grad_x(const L1Problem<Scalar>& p, const Vector<Scalar>& x, const Vector<Scalar>& z,
                                 const Vector<Scalar>& zeta_star, Scalar sigma) {
  return p.A->adjoint(p.A->forward(x) - p.b) + p.B->adjoint(zeta_star + sigma * (p.B->forward(x) - z));
}

template <typename Scalar>
Scalar default_sigma0(const L1Problem<Scalar>& p) {
  p.require_spectra();
  return Scalar(10) * p.lambda_a / p.lambda_b;
}

/// z0 = prox_{alpha/sigma0}(Bx0 + zeta0/sigma0), then zeta0 += sigma0(Bx0 - z0)
/// so that zeta0 is a subgradient of alpha|.|_1 at z0.
template <typename Scalar>
AlmState<Scalar> init_state(const L1Problem<Scalar>& p, const AlmParams<Scalar>& params, const Vector<Scalar>& x0,
                            const Vector<Scalar>& zeta0) {
  p.validate();
  check_dim(x0.size(), p.n(), "alm: x0");
  check_dim(zeta0.size(), p.B->rows(), "alm: zeta0");
  AlmState<Scalar> s;
  s.sigma = params.sigma0 ? *params.sigma0 : default_sigma0(p);
  s.x = x0;
  const Vector<Scalar> bx = p.B->forward(x0);
  s.z = prox_l1(bx + zeta0 / s.sigma, p.alpha / s.sigma);
  s.zeta_star = zeta0 + s.sigma * (bx - s.z);
  s.feasibility = (bx - s.z).norm();
  s.rho_carry = params.ssn.rho0;
  s.initial_lagrangian_grad = lagrangian_grad_x(p, s.x, s.z, s.zeta_star, s.sigma).norm();
  return s;
}

template <typename Scalar>
Scalar residual(const AlmState<Scalar>& s, const L1Problem<Scalar>& p) {
  return first_order_residual(p, s.x, s.z, s.zeta_star).total;
}

template <typename Scalar>
struct AlmStepReport {
  SubproblemResult<Scalar> sub;
  Scalar tolerance = Scalar(0);
  bool sigma_increased = false;
};

/// One outer iteration: approximate minimization of the augmented Lagrangian
/// by the semismooth* Newton method, multiplier update, penalty update.
/// SolverError from the line search propagates.
template <typename Scalar>
AlmState<Scalar> alm_step(const AlmState<Scalar>& s, const L1Problem<Scalar>& p, const AlmParams<Scalar>& params,
                          AlmStepReport<Scalar>* report = nullptr) {
  const Scalar gk = lagrangian_grad_x(p, s.x, s.z, s.zeta_star, s.sigma).norm();
  const Scalar tol = std::min(std::ldexp(s.initial_lagrangian_grad, -static_cast<int>(s.k + 1)), Scalar(0.1) * gk);

  SubproblemSpec<Scalar> spec{p.A, p.B, p.b, p.alpha, s.sigma, s.zeta_star};
  SsnParams<Scalar> ssn = params.ssn;
  ssn.eps = tol;
  ssn.rho0 = params.warm_start_rho ? s.rho_carry : params.ssn.rho0;
  SubproblemResult<Scalar> sub = solve_subproblem<Scalar>(s.x, spec, ssn);

  AlmState<Scalar> next = s;
  next.x = sub.x;
  next.z = sub.z;
  const Vector<Scalar> feas = p.B->forward(next.x) - next.z;
  next.zeta_star = s.zeta_star + s.sigma * feas;
  next.feasibility = feas.norm();
  bool increased = false;
  if (next.feasibility > params.beta * s.feasibility) {
    next.sigma = (Scalar(1) + params.gamma(s.sched)) * s.sigma;
    next.sched = s.sched + 1;
    increased = true;
  }
  next.rho_carry = sub.rho;
  next.k = s.k + 1;
  if (report) {
    report->tolerance = tol;
    report->sigma_increased = increased;
    report->sub = std::move(sub);
  }
  return next;
}

/// Runs the augmented Lagrangian method until r_k <= eps_opt * r_0.
/// When reference is given, err2/err_inf are logged against it.
template <typename Scalar>
SolveResult<Scalar> alm_solve(const L1Problem<Scalar>& p, const AlmParams<Scalar>& params,
                              std::optional<Vector<Scalar>> x0 = std::nullopt,
                              std::optional<Vector<Scalar>> zeta0 = std::nullopt,
                              const Vector<Scalar>* reference = nullptr) {
  params.validate();
  const Stopwatch clock;
  AlmState<Scalar> s = init_state<Scalar>(p, params, x0 ? *x0 : Vector<Scalar>::Zero(p.n()),
                                          zeta0 ? *zeta0 : Vector<Scalar>::Zero(p.B->rows()));
  SolveResult<Scalar> out;
  out.r0 = residual(s, p);

  auto make_record = [&](Scalar r, double t) {
    IterationRecord rec;
    rec.k = s.k;
    rec.sigma = static_cast<double>(s.sigma);
    rec.rel_residual = out.r0 > Scalar(0) ? static_cast<double>(r / out.r0) : 0.0;
    if (reference) {
      const auto e = errors_vs_reference<Scalar>(s.x, *reference);
      rec.err2 = e.err2;
      rec.err_inf = e.err_inf;
    }
    rec.time_s = t;
    rec.active_count = (s.z.array() != Scalar(0)).count();
    return rec;
  };

  for (;;) {
    const Scalar r = residual(s, p);
    IterationRecord rec = make_record(r, clock.seconds());
    out.final_residual = r;
    if (r <= params.eps_opt * out.r0) {
      out.status = SolveStatus::Converged;
      out.records.push_back(rec);
      break;
    }
    if (s.k >= params.max_outer) {
      out.status = SolveStatus::MaxIterations;
      out.records.push_back(rec);
      break;
    }
    AlmStepReport<Scalar> rep;
    try {
      s = alm_step(s, p, params, &rep);
    } catch (const SolverError& e) {
      out.status = SolveStatus::LineSearchFailed;
      out.message = e.what();
      out.records.push_back(rec);
      break;
    }
    rec.inner_iters = rep.sub.iterations;
    rec.cg_iters = rep.sub.total_cg;
    rec.active_count = (s.z.array() != Scalar(0)).count();
    out.records.push_back(rec);
    out.total_cg += rep.sub.total_cg;
    out.cg_cap_hits += rep.sub.cg_cap_hits;
    if (!rep.sub.converged) {
      out.status = SolveStatus::SubproblemNotConverged;
      out.message = "subproblem did not reach its tolerance within max_outer Newton iterations";
      out.final_residual = residual(s, p);
      break;
    }
  }
  out.iterations = s.k;
  out.total_time_s = clock.seconds();
  out.x = std::move(s.x);
  out.z = std::move(s.z);
  out.zeta_star = std::move(s.zeta_star);
  return out;
}

/// Regularization parameter from the noise level delta:
///   alpha = delta * (sum |A^T b_i| / |b_i|) / (sum |B^T z_i| / |z_i|_inf)
/// with b_i standard normal and z_i uniform on [-0.5, 0.5], t samples each.
template <typename Scalar>
Scalar auto_alpha(const LinearMap<Scalar>& A, const LinearMap<Scalar>& B, Scalar delta, int t = 10,
                  std::uint64_t seed = 0) {
  if (t < 1) throw ConfigurationError("auto_alpha: sample size t must be >= 1");
  if (!(delta > Scalar(0))) throw ConfigurationError("delta: must be positive to derive alpha");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(-0.5, 0.5);
  Scalar num(0), den(0);
  for (int i = 0; i < t; ++i) {
    Vector<Scalar> bi(A.rows());
    for (Index q = 0; q < bi.size(); ++q) bi[q] = static_cast<Scalar>(normal(rng));
    num += A.adjoint(bi).norm() / bi.norm();
  }
  for (int i = 0; i < t; ++i) {
    Vector<Scalar> zi(B.rows());
    for (Index q = 0; q < zi.size(); ++q) zi[q] = static_cast<Scalar>(uniform(rng));
    den += B.adjoint(zi).norm() / zi.template lpNorm<Eigen::Infinity>();
  }
  const Scalar alpha = delta * num / den;
  if (!(alpha > Scalar(0))) throw ConfigurationError("alpha: auto_alpha produced a nonpositive value");
  return alpha;
}

}  // namespace tvn
