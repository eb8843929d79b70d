#pragma once

#include "tvnewton/cg.hpp"
#include "tvnewton/linear_map.hpp"
#include "tvnewton/prox.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvn {

/// psi(x, z) = 0.5|Ax - b|^2 + alpha|z|_1 + <zeta*, Bx - z> + sigma/2 |Bx - z|^2
/// for fixed multiplier zeta* and penalty sigma.
template <typename Scalar = double>
struct SubproblemSpec {
  OperatorPtr<Scalar> A;
  OperatorPtr<Scalar> B;
  Vector<Scalar> b;
  Scalar alpha = Scalar(0);
  Scalar sigma = Scalar(0);
  Vector<Scalar> zeta_star;

  void validate() const {
    if (!A || !B) throw ConfigurationError("subproblem: operators A and B are required");
    check_dim(B->cols(), A->cols(), "subproblem: B domain vs A domain");
    check_dim(b.size(), A->rows(), "subproblem: b vs range of A");
    check_dim(zeta_star.size(), B->rows(), "subproblem: zeta_star vs range of B");
    if (!(alpha > Scalar(0))) throw ConfigurationError("alpha: must be positive");
    if (!(sigma > Scalar(0))) throw ConfigurationError("sigma: must be positive");
  }

  /// Lower bound of psi over all (x, z).
  Scalar psi_lower_bound() const { return -zeta_star.squaredNorm() / (Scalar(2) * sigma); }
};

/// Preconditioner of the CG solve in the Newton step.
///   Jacobi:    diag(A^T A + B^T W B).
///   Laplacian: diag(A^T A) + B^T W B, factored by sparse Cholesky once per
///              Newton step. Needs B as an explicit sparse matrix; falls back
///              to Jacobi when it is unavailable or the factorization fails.
enum class NewtonPreconditioner { None, Jacobi, Laplacian };

/// Parameters of the regularized semismooth* Newton iteration. Defaults are
/// the values used for the tomography experiments.
template <typename Scalar = double>
struct SsnParams {
  Scalar nu = Scalar(0.1);         // Armijo constant
  Scalar chi1 = Scalar(-1.2);      // rho grows when chi < chi1
  Scalar chi2 = Scalar(-0.8);      // rho shrinks when chi > chi2
  Scalar chi_bar1 = Scalar(4);     // max growth factor
  Scalar chi_bar2 = Scalar(0.25);  // min shrink factor
  Scalar rho0 = Scalar(1);
  Scalar eps_approx = Scalar(0.1);  // CG tolerance of the approximation step
  Scalar eps_newton = Scalar(0.1);  // CG tolerance of the Newton step at j = 0
  Scalar eps_newton_decay = Scalar(1);  // eps_N^j = eps_newton * decay^j
  Scalar eps = Scalar(0);           // stop when |grad_x psi| <= eps
  int max_outer = 200;
  int max_cg = 0;                   // 0: 10 * n per CG call
  int max_halvings = 60;
  NewtonPreconditioner newton_preconditioner = NewtonPreconditioner::Laplacian;

  void validate() const {
    if (!(nu > Scalar(0) && nu < Scalar(1))) throw ConfigurationError("nu: must lie in (0,1)");
    if (!(chi1 < Scalar(-1) && Scalar(-1) < chi2 && chi2 < Scalar(0)))
      throw ConfigurationError("chi1/chi2: need chi1 < -1 < chi2 < 0");
    if (!(chi_bar2 > Scalar(0) && chi_bar2 < Scalar(1) && chi_bar1 > Scalar(1)))
      throw ConfigurationError("chi_bar1/chi_bar2: need 0 < chi_bar2 < 1 < chi_bar1");
    if (!(rho0 > Scalar(0))) throw ConfigurationError("rho0: must be positive");
    if (!(eps_approx > Scalar(0) && eps_approx < Scalar(1))) throw ConfigurationError("eps_approx: must lie in (0,1)");
    if (!(eps_newton > Scalar(0) && eps_newton < Scalar(1))) throw ConfigurationError("eps_newton: must lie in (0,1)");
    if (!(eps_newton_decay > Scalar(0) && eps_newton_decay <= Scalar(1)))
      throw ConfigurationError("eps_newton_decay: must lie in (0,1]");
    if (eps < Scalar(0)) throw ConfigurationError("eps: must be nonnegative");
    if (max_outer < 0) throw ConfigurationError("max_outer: must be nonnegative");
  }

  int cg_cap(Index n) const { return max_cg > 0 ? max_cg : static_cast<int>(10 * n); }
  Scalar newton_tolerance(int j) const { return eps_newton * std::pow(eps_newton_decay, Scalar(j)); }
};

/// Sparse Cholesky factor of diag(A^T A) + B^T W B. The sparsity pattern
/// does not depend on W, so the symbolic analysis is done once.
template <typename Scalar = double>
struct LaplacianFactor {
  using Sparse = Eigen::SparseMatrix<Scalar>;
  Sparse b;
  Sparse bt;
  Eigen::SimplicialLDLT<Sparse> ldlt;
  bool analyzed = false;

  explicit LaplacianFactor(Sparse b_matrix) : b(std::move(b_matrix)), bt(b.transpose()) {}

  /// Factors diag(d) + B^T diag(w) B; false when the factorization fails.
  bool factor(const Vector<Scalar>& d, const Vector<Scalar>& w) {
    const Sparse wb = w.asDiagonal() * b;
    Sparse m = bt * wb;
    Sparse diag(d.size(), d.size());
    diag.reserve(Eigen::VectorXi::Constant(d.size(), 1));
    for (Index i = 0; i < d.size(); ++i) diag.insert(i, i) = d[i];
    m += diag;
    if (!analyzed) {
      ldlt.analyzePattern(m);
      analyzed = true;
    }
    ldlt.factorize(m);
    return ldlt.info() == Eigen::Success;
  }
};

/// Inner data of one Newton iteration.
template <typename Scalar = double>
struct NewtonWorkspace {
  Vector<Scalar> x_hat;
  Vector<Scalar> z_hat;
  Vector<Scalar> x_hat_star;  // grad theta(x_hat)
  std::vector<Index> active_set;  // { i : z_hat_i != 0 }
  Scalar rho = Scalar(1);
  Vector<Scalar> weights;
  Vector<Scalar> direction;
  // diag(A^T A); when set (and B supports squared_adjoint) the Newton step
  // uses the Jacobi preconditioner diag(A^T A + B^T W B).
  Vector<Scalar> normal_diag_a;
  // When set as well, the Newton step uses diag(A^T A) + B^T W B instead.
  std::shared_ptr<LaplacianFactor<Scalar>> laplacian;
};

/// diag(A^T A) when A can form it, else an empty vector.
template <typename Scalar>
Vector<Scalar> normal_diagonal(const LinearMap<Scalar>& a) {
  auto d = a.squared_adjoint(Vector<Scalar>::Ones(a.rows()));
  return d ? std::move(*d) : Vector<Scalar>();
}

/// Prepares the preconditioner data of a workspace for the given choice.
template <typename Scalar>
void setup_preconditioner(NewtonWorkspace<Scalar>& ws, const SubproblemSpec<Scalar>& spec,
                          NewtonPreconditioner choice) {
  ws.normal_diag_a.resize(0);
  ws.laplacian.reset();
  if (choice == NewtonPreconditioner::None) return;
  ws.normal_diag_a = normal_diagonal(*spec.A);
  if (choice == NewtonPreconditioner::Laplacian && ws.normal_diag_a.size() > 0)
    if (auto bm = spec.B->sparse_matrix()) ws.laplacian = std::make_shared<LaplacianFactor<Scalar>>(std::move(*bm));
}

/// argmin_z psi(x, z) = prox_{alpha/sigma}(Bx + zeta*/sigma), from Bx.
template <typename Scalar>
Vector<Scalar> psi_argmin_z_from_bx(const Vector<Scalar>& bx, const SubproblemSpec<Scalar>& spec) {
  return prox_l1(bx + spec.zeta_star / spec.sigma, spec.alpha / spec.sigma);
}

template <typename Scalar>
Vector<Scalar> psi_argmin_z(const Vector<Scalar>& x, const SubproblemSpec<Scalar>& spec) {
  return psi_argmin_z_from_bx<Scalar>(spec.B->forward(x), spec);
}

template <typename Scalar>
Scalar psi_value(const Vector<Scalar>& x, const Vector<Scalar>& z, const SubproblemSpec<Scalar>& spec) {
  const Vector<Scalar> feas = spec.B->forward(x) - z;
  return Scalar(0.5) * (spec.A->forward(x) - spec.b).squaredNorm() + spec.alpha * z.template lpNorm<1>() +
         spec.zeta_star.dot(feas) + Scalar(0.5) * spec.sigma * feas.squaredNorm();
}

/// grad_x psi(x, z) = A^T(Ax - b) + B^T(zeta* + sigma(Bx - z)).
template <typename Scalar>
Vector<Scalar> psi_grad_x(const Vector<Scalar>& x, const Vector<Scalar>& z, const SubproblemSpec<Scalar>& spec) {
  return spec.A->adjoint(spec.A->forward(x) - spec.b) +
         spec.B->adjoint(spec.zeta_star + spec.sigma * (spec.B->forward(x) - z));
}

/// theta(x) = psi(x, Psi(x)) with the intermediate products kept around.
template <typename Scalar>
struct ThetaEval {
  Vector<Scalar> x;
  Vector<Scalar> data_residual;  // Ax - b
  Vector<Scalar> bx;
  Vector<Scalar> z;  // Psi(x)
  Scalar value = Scalar(0);
  Vector<Scalar> grad;  // filled by complete_gradient
};

template <typename Scalar>
ThetaEval<Scalar> theta_value(const Vector<Scalar>& x, const SubproblemSpec<Scalar>& spec) {
  ThetaEval<Scalar> e;
  e.x = x;
  e.data_residual = spec.A->forward(x) - spec.b;
  e.bx = spec.B->forward(x);
  e.z = psi_argmin_z_from_bx<Scalar>(e.bx, spec);
  const Vector<Scalar> feas = e.bx - e.z;
  e.value = Scalar(0.5) * e.data_residual.squaredNorm() + spec.alpha * e.z.template lpNorm<1>() +
            spec.zeta_star.dot(feas) + Scalar(0.5) * spec.sigma * feas.squaredNorm();
  return e;
}

template <typename Scalar>
void complete_gradient(ThetaEval<Scalar>& e, const SubproblemSpec<Scalar>& spec) {
  e.grad = spec.A->adjoint(e.data_residual) + spec.B->adjoint(spec.zeta_star + spec.sigma * (e.bx - e.z));
}

/// Value and gradient of theta; one forward and one adjoint product per
/// operator.
template <typename Scalar>
ThetaEval<Scalar> theta_value_and_grad(const Vector<Scalar>& x, const SubproblemSpec<Scalar>& spec) {
  ThetaEval<Scalar> e = theta_value(x, spec);
  complete_gradient(e, spec);
  return e;
}

template <typename Scalar>
struct StepReport {
  int cg_iterations = 0;
  bool cg_capped = false;
};

/// Approximation step: CG on min_x psi(x, z_j) started at x_j, stopped once
/// |grad_x psi(x, z_j)| <= eps_approx * |grad_x psi(x_j, z_j)|. grad_j must be
/// grad_x psi(x_j, z_j) and nonzero. Returns x_hat; the caller evaluates theta
/// there to get z_hat and x_hat_star.
template <typename Scalar>
Vector<Scalar> approximation_step(const Vector<Scalar>& x_j, const Vector<Scalar>& grad_j,
                                  const SubproblemSpec<Scalar>& spec, const SsnParams<Scalar>& params,
                                  StepReport<Scalar>* report = nullptr) {
  const Scalar gnorm = grad_j.norm();
  if (!(gnorm > Scalar(0))) throw std::logic_error("approximation_step: gradient is zero, nothing to do");
  Vector<Scalar> x = x_j;
  Vector<Scalar> r = -grad_j;
  Vector<Scalar> tmp_a, tmp_b, out_b;
  auto hessian = [&](const Vector<Scalar>& p, Vector<Scalar>& hp) {
    spec.A->forward(p, tmp_a);
    spec.A->adjoint(tmp_a, hp);
    spec.B->forward(p, tmp_b);
    spec.B->adjoint(tmp_b, out_b);
    hp.noalias() += spec.sigma * out_b;
  };
  const auto res = conjugate_gradient<Scalar>(hessian, x, r, params.eps_approx * gnorm, params.cg_cap(x.size()));
  if (report) *report = {res.iterations, !res.converged};
  return x;
}

/// Full approximation step including z_hat = Psi(x_hat) and
/// x_hat_star = grad theta(x_hat).
template <typename Scalar>
ThetaEval<Scalar> approximation_step_at(const Vector<Scalar>& x_j, const Vector<Scalar>& z_j,
                                        const SubproblemSpec<Scalar>& spec, const SsnParams<Scalar>& params,
                                        StepReport<Scalar>* report = nullptr) {
  const Vector<Scalar> g = psi_grad_x(x_j, z_j, spec);
  return theta_value_and_grad<Scalar>(approximation_step<Scalar>(x_j, g, spec, params, report), spec);
}

/// Populates x_hat, z_hat, x_hat_star, the active set and the weights
/// W_ii = sigma off the active set, rho / z_hat_i^2 on it.
template <typename Scalar>
void fill_workspace(NewtonWorkspace<Scalar>& ws, const ThetaEval<Scalar>& hat, const SubproblemSpec<Scalar>& spec,
                    Scalar rho) {
  ws.x_hat = hat.x;
  ws.z_hat = hat.z;
  ws.x_hat_star = hat.grad;
  ws.rho = rho;
  ws.active_set.clear();
  ws.weights.resize(ws.z_hat.size());
  for (Index i = 0; i < ws.z_hat.size(); ++i) {
    const Scalar zi = ws.z_hat[i];
    if (zi != Scalar(0)) {
      ws.active_set.push_back(i);
      ws.weights[i] = rho / std::max(zi * zi, Scalar(1e-30));
    } else {
      ws.weights[i] = spec.sigma;
    }
  }
}

/// Newton step: CG from zero on
///   min 0.5<dx, (A^T A + B^T W B) dx> + <x_hat_star, dx>
/// stopped at relative residual eps_newton. Stores and returns the direction.
template <typename Scalar>
const Vector<Scalar>& newton_direction(NewtonWorkspace<Scalar>& ws, const SubproblemSpec<Scalar>& spec,
                                       Scalar eps_newton, int max_cg, StepReport<Scalar>* report = nullptr) {
  const Index n = ws.x_hat_star.size();
  ws.direction = Vector<Scalar>::Zero(n);
  Vector<Scalar> r = -ws.x_hat_star;
  Vector<Scalar> tmp_a, tmp_b, out_b;
  auto hessian = [&](const Vector<Scalar>& p, Vector<Scalar>& hp) {
    spec.A->forward(p, tmp_a);
    spec.A->adjoint(tmp_a, hp);
    spec.B->forward(p, tmp_b);
    tmp_b.array() *= ws.weights.array();
    spec.B->adjoint(tmp_b, out_b);
    hp.noalias() += out_b;
  };
  CgResult<Scalar> res;
  const Scalar tol = eps_newton * ws.x_hat_star.norm();
  if (ws.laplacian && ws.normal_diag_a.size() == n && ws.laplacian->factor(ws.normal_diag_a, ws.weights)) {
    const auto& ldlt = ws.laplacian->ldlt;
    auto precond = [&ldlt](const Vector<Scalar>& in, Vector<Scalar>& out) { out = ldlt.solve(in); };
    res = preconditioned_cg<Scalar>(hessian, precond, ws.direction, r, tol, max_cg);
  } else {
    Vector<Scalar> inv_diag;
    if (ws.normal_diag_a.size() == n) {
      if (auto bd = spec.B->squared_adjoint(ws.weights)) {
        inv_diag = ws.normal_diag_a + *bd;
        for (Index i = 0; i < n; ++i) inv_diag[i] = inv_diag[i] > Scalar(0) ? Scalar(1) / inv_diag[i] : Scalar(1);
      }
    }
    res = conjugate_gradient<Scalar>(hessian, ws.direction, r, tol, max_cg, inv_diag.size() ? &inv_diag : nullptr);
  }
  if (report) *report = {res.iterations, !res.converged};
  return ws.direction;
}

template <typename Scalar>
const Vector<Scalar>& newton_direction(NewtonWorkspace<Scalar>& ws, const SubproblemSpec<Scalar>& spec,
                                       const SsnParams<Scalar>& params, int j = 0,
                                       StepReport<Scalar>* report = nullptr) {
  return newton_direction(ws, spec, params.newton_tolerance(j), params.cg_cap(ws.x_hat_star.size()), report);
}

template <typename Scalar>
struct LineSearchResult {
  ThetaEval<Scalar> next;  // gradient not yet filled
  int exponent = 0;
};

/// theta(from.x + s) - theta(from.x) given a_step = A s and b_step = B s.
/// Works on the differences directly, so a decrease far below the rounding
/// unit of theta itself is still resolved.
template <typename Scalar>
Scalar theta_change(const ThetaEval<Scalar>& from, const Vector<Scalar>& a_step, const Vector<Scalar>& b_step,
                    const SubproblemSpec<Scalar>& spec) {
  check_dim(a_step.size(), from.data_residual.size(), "theta_change: A step");
  check_dim(b_step.size(), from.bx.size(), "theta_change: B step");
  const Scalar kappa = spec.alpha / spec.sigma;
  // theta = 0.5|Ax - b|^2 + sum_i huber(Bx + zeta*/sigma)_i - |zeta*|^2/(2 sigma)
  auto huber = [&](Scalar v) {
    const Scalar a = std::abs(v);
    return a <= kappa ? Scalar(0.5) * spec.sigma * v * v : spec.alpha * a - Scalar(0.5) * spec.alpha * kappa;
  };
  Scalar change = a_step.dot(from.data_residual + Scalar(0.5) * a_step);
  for (Index i = 0; i < b_step.size(); ++i) {
    const Scalar v = from.bx[i] + spec.zeta_star[i] / spec.sigma;
    const Scalar dv = b_step[i];
    const Scalar w = v + dv;
    if (std::abs(v) <= kappa && std::abs(w) <= kappa)
      change += spec.sigma * dv * (v + Scalar(0.5) * dv);
    else if ((v > kappa && w > kappa) || (v < -kappa && w < -kappa))
      change += v > Scalar(0) ? spec.alpha * dv : -spec.alpha * dv;
    else
      change += huber(w) - huber(v);
  }
  return change;
}

/// Armijo backtracking on theta along dx with steps 2^-l, l = 0, 1, ...
/// The decrease is measured with theta_change.
/// Throws SolverError when no step up to 2^-max_halvings is accepted, which in
/// practice means the operator and its adjoint disagree.
template <typename Scalar>
LineSearchResult<Scalar> line_search(const ThetaEval<Scalar>& hat, const Vector<Scalar>& dx,
                                     const SubproblemSpec<Scalar>& spec, const SsnParams<Scalar>& params) {
  const Scalar slope = hat.grad.dot(dx);
  if (!(slope < Scalar(0))) throw SolverError("line search: direction is not a descent direction");
  const Vector<Scalar> a_dx = spec.A->forward(dx);
  const Vector<Scalar> b_dx = spec.B->forward(dx);
  Scalar step(1);
  for (int l = 0; l <= params.max_halvings; ++l, step *= Scalar(0.5)) {
    const Scalar change = theta_change<Scalar>(hat, Vector<Scalar>(step * a_dx), Vector<Scalar>(step * b_dx), spec);
    if (change <= params.nu * step * slope) return {theta_value<Scalar>(hat.x + step * dx, spec), l};
  }
  throw SolverError("line search: no sufficient decrease after " + std::to_string(params.max_halvings) +
                    " halvings; check that the operator adjoints are consistent");
}

/// chi = min over the active set of (B dx)_i / z_hat_i; empty when the active
/// set is empty.
template <typename Scalar>
std::optional<Scalar> newton_chi(const Vector<Scalar>& z_hat, const std::vector<Index>& active,
                                 const Vector<Scalar>& b_dx) {
  if (active.empty()) return std::nullopt;
  Scalar chi = std::numeric_limits<Scalar>::infinity();
  for (Index i : active) chi = std::min(chi, b_dx[i] / z_hat[i]);
  return chi;
}

template <typename Scalar>
Scalar update_rho(Scalar rho, std::optional<Scalar> chi, const SsnParams<Scalar>& params) {
  if (!chi) return rho;
  if (*chi < params.chi1) return rho * std::min(*chi / params.chi1, params.chi_bar1);
  if (*chi > params.chi2) return rho * std::max(*chi / params.chi2, params.chi_bar2);
  return rho;
}

template <typename Scalar>
Scalar update_rho(const NewtonWorkspace<Scalar>& ws, const SubproblemSpec<Scalar>& spec,
                  const SsnParams<Scalar>& params) {
  return update_rho(ws.rho, newton_chi<Scalar>(ws.z_hat, ws.active_set, spec.B->forward(ws.direction)), params);
}

template <typename Scalar>
struct SsnIterationStats {
  int cg_approx = 0;
  int cg_newton = 0;
  int step_exponent = 0;
  Scalar rho = Scalar(0);  // rho used in this iteration's weights
  std::optional<Scalar> chi;
  Scalar grad_norm = Scalar(0);  // |grad_x psi(x_j, z_j)|
  Scalar psi = Scalar(0);        // psi(x_j, z_j)
  Scalar psi_hat = Scalar(0);    // psi(x_hat_j, z_hat_j)
  Index active_count = 0;
};

template <typename Scalar>
struct SubproblemResult {
  Vector<Scalar> x;
  Vector<Scalar> z;
  bool converged = false;
  int iterations = 0;
  long total_cg = 0;
  long cg_cap_hits = 0;
  Scalar grad_norm = Scalar(0);
  Scalar psi = Scalar(0);
  Scalar rho = Scalar(0);  // rho after the last update, for warm starts
  std::vector<SsnIterationStats<Scalar>> stats;
};

/// Regularized semismooth* Newton method for min psi. Iterates
/// approximation step, Newton step, Armijo search and rho update until
/// |grad_x psi(x_j, Psi(x_j))| <= params.eps or max_outer iterations.
/// observer(j, x_j) is called for every iterate including the start point.
template <typename Scalar>
SubproblemResult<Scalar> solve_subproblem(const Vector<Scalar>& x0, const SubproblemSpec<Scalar>& spec,
                                          const SsnParams<Scalar>& params,
                                          const std::function<void(int, const Vector<Scalar>&)>& observer = {}) {
  spec.validate();
  params.validate();
  check_dim(x0.size(), spec.A->cols(), "subproblem: start point");

  SubproblemResult<Scalar> out;
  Scalar rho = params.rho0;
  ThetaEval<Scalar> cur = theta_value_and_grad<Scalar>(x0, spec);
  NewtonWorkspace<Scalar> ws;
  setup_preconditioner(ws, spec, params.newton_preconditioner);
  const int cg_cap = params.cg_cap(x0.size());

  for (int j = 0;; ++j) {
    if (observer) observer(j, cur.x);
    const Scalar gnorm = cur.grad.norm();
    if (gnorm <= params.eps) {
      out.converged = true;
      break;
    }
    if (j >= params.max_outer) break;

    SsnIterationStats<Scalar> st;
    st.grad_norm = gnorm;
    st.psi = cur.value;
    st.rho = rho;

    StepReport<Scalar> rep;
    ThetaEval<Scalar> hat =
        theta_value_and_grad<Scalar>(approximation_step<Scalar>(cur.x, cur.grad, spec, params, &rep), spec);
    st.cg_approx = rep.cg_iterations;
    out.cg_cap_hits += rep.cg_capped;
    st.psi_hat = hat.value;

    if (hat.grad.norm() == Scalar(0)) {
      // Exact minimiser; the Newton direction would be zero.
      out.total_cg += st.cg_approx;
      st.active_count = (hat.z.array() != Scalar(0)).count();
      out.stats.push_back(st);
      cur = std::move(hat);
      ++out.iterations;
      continue;
    }

    fill_workspace(ws, hat, spec, rho);
    st.active_count = static_cast<Index>(ws.active_set.size());
    newton_direction(ws, spec, params.newton_tolerance(j), cg_cap, &rep);
    st.cg_newton = rep.cg_iterations;
    out.cg_cap_hits += rep.cg_capped;

    LineSearchResult<Scalar> ls = line_search(hat, ws.direction, spec, params);
    st.step_exponent = ls.exponent;

    st.chi = newton_chi<Scalar>(ws.z_hat, ws.active_set, spec.B->forward(ws.direction));
    rho = update_rho(rho, st.chi, params);

    cur = std::move(ls.next);
    complete_gradient(cur, spec);
    out.total_cg += st.cg_approx + st.cg_newton;
    out.stats.push_back(st);
    ++out.iterations;
  }

  out.grad_norm = cur.grad.norm();
  out.psi = cur.value;
  out.x = std::move(cur.x);
  out.z = std::move(cur.z);
  out.rho = rho;
  return out;
}

}  // namespace tvn
