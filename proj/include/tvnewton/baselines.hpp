#pragma once

#include "tvnewton/cg.hpp"
#include "tvnewton/l1_problem.hpp"
#include "tvnewton/prox.hpp"

#include <cmath>
#include <optional>

namespace tvn {

namespace detail {

template <typename Scalar>
IterationRecord baseline_record(long k, Scalar sigma, Scalar r, Scalar r0, const Vector<Scalar>& x,
                                const Vector<Scalar>* reference, double t) {
  IterationRecord rec;
  rec.k = k;
  rec.sigma = static_cast<double>(sigma);
  rec.rel_residual = r0 > Scalar(0) ? static_cast<double>(r / r0) : 0.0;
  if (reference) {
    const auto e = errors_vs_reference<Scalar>(x, *reference);
    rec.err2 = e.err2;
    rec.err_inf = e.err_inf;
  }
  rec.time_s = t;
  return rec;
}

template <typename Scalar>
Scalar combine_residual(const L1Problem<Scalar>& p, Scalar stationarity, Scalar feasibility) {
  const Scalar gs = p.gamma_scale();
  return std::sqrt(stationarity * stationarity + gs * gs * feasibility * feasibility);
}

}  // namespace detail

/// Chambolle-Pock parameters. Zero tau/sigma select tau = 4/lambda_max(A^T A)
/// and sigma = 1/(tau lambda_max(B^T B)).
template <typename Scalar = double>
struct ChambollePockParams {
  Scalar tau = Scalar(0);
  Scalar sigma = Scalar(0);
  Scalar theta = Scalar(1);
  Scalar eps_opt = Scalar(1e-6);
  long max_iter = 100000;
  Scalar cg_rtol = Scalar(1e-3);
  int max_cg = 0;  // 0: 10 n
};

/// Primal-dual iteration with the dual step projected onto the l-infinity
/// ball of radius alpha and the primal step an inexact proximal step of the
/// data term (CG on I + tau A^T A).
template <typename Scalar>
SolveResult<Scalar> chambolle_pock(const L1Problem<Scalar>& p, ChambollePockParams<Scalar> params,
                                   const Vector<Scalar>* reference = nullptr) {
  p.validate();
  p.require_spectra();
  if (params.tau == Scalar(0)) params.tau = Scalar(4) / p.lambda_a;
  if (params.sigma == Scalar(0)) params.sigma = Scalar(1) / (params.tau * p.lambda_b);
  if (!(params.tau > Scalar(0) && params.sigma > Scalar(0))) throw ConfigurationError("chambolle-pock: tau and sigma must be positive");
  if (!(params.theta >= Scalar(0) && params.theta <= Scalar(1))) throw ConfigurationError("chambolle-pock: theta must lie in [0,1]");

  const Stopwatch clock;
  const Index n = p.n();
  const int cg_cap = params.max_cg > 0 ? params.max_cg : static_cast<int>(10 * n);
  SolveResult<Scalar> out;
  Vector<Scalar> x = Vector<Scalar>::Zero(n), x_bar = x, zstar = Vector<Scalar>::Zero(p.B->rows());
  Vector<Scalar> z;
  Vector<Scalar> tmp, hp_tmp;
  auto shifted_normal = [&](const Vector<Scalar>& v, Vector<Scalar>& hv) {
    p.A->forward(v, hp_tmp);
    p.A->adjoint(hp_tmp, hv);
    hv = v + params.tau * hv;
  };

  for (long k = 0;; ++k) {
    const Vector<Scalar> b_xbar = p.B->forward(x_bar);
    const Vector<Scalar> zstar_next = clamp_linf(zstar + params.sigma * b_xbar, p.alpha);
    // Equals (zstar - zstar_next)/sigma + B x_bar, without the cancellation.
    z = prox_l1(b_xbar + zstar / params.sigma, p.alpha / params.sigma);
    const Vector<Scalar> g = p.A->adjoint(p.A->forward(x) - p.b) + p.B->adjoint(zstar_next);
    const Scalar r = detail::combine_residual(p, g.norm(), (p.B->forward(x) - z).norm());
    if (k == 0) out.r0 = r;
    IterationRecord rec = detail::baseline_record(k, params.sigma, r, out.r0, x, reference, clock.seconds());
    rec.active_count = (z.array() != Scalar(0)).count();
    out.final_residual = r;
    zstar = zstar_next;
    if (r <= params.eps_opt * out.r0) {
      out.status = SolveStatus::Converged;
      out.records.push_back(rec);
      out.iterations = k;
      break;
    }
    if (k >= params.max_iter || !std::isfinite(r)) {
      out.status = std::isfinite(r) ? SolveStatus::MaxIterations : SolveStatus::Diverged;
      out.records.push_back(rec);
      out.iterations = k;
      break;
    }
    Vector<Scalar> dx = Vector<Scalar>::Zero(n);
    Vector<Scalar> res = g;
    const auto cg = conjugate_gradient<Scalar>(shifted_normal, dx, res, params.cg_rtol * g.norm(), cg_cap);
    out.total_cg += cg.iterations;
    out.cg_cap_hits += !cg.converged;
    const Vector<Scalar> x_next = x - params.tau * dx;
    x_bar = x_next + params.theta * (x_next - x);
    x = x_next;
    rec.inner_iters = 1;
    rec.cg_iters = cg.iterations;
    out.records.push_back(rec);
  }
  out.total_time_s = clock.seconds();
  out.x = std::move(x);
  out.z = std::move(z);
  out.zeta_star = std::move(zstar);
  return out;
}

enum class AdmmZUpdate {
  AsPrinted,    // z^{k+1} from B x^k
  GaussSeidel,  // z^{k+1} from B x^{k+1}
};

/// ADMM parameters. Zero sigma selects 0.25 lambda_max(A^T A)/lambda_max(B^T B).
template <typename Scalar = double>
struct AdmmParams {
  Scalar sigma = Scalar(0);
  Scalar eps_opt = Scalar(1e-6);
  long max_iter = 100000;
  Scalar cg_rtol = Scalar(1e-3);
  int max_cg = 0;
  AdmmZUpdate z_update = AdmmZUpdate::AsPrinted;
  Scalar divergence_factor = Scalar(1e10);  // stop once r > divergence_factor * r0
};

template <typename Scalar>
SolveResult<Scalar> admm(const L1Problem<Scalar>& p, AdmmParams<Scalar> params,
                         const Vector<Scalar>* reference = nullptr) {
  p.validate();
  p.require_spectra();
  if (params.sigma == Scalar(0)) params.sigma = Scalar(0.25) * p.lambda_a / p.lambda_b;
  if (!(params.sigma > Scalar(0))) throw ConfigurationError("admm: sigma must be positive");
  const Scalar sigma = params.sigma;
  const Scalar thresh = p.alpha / sigma;

  const Stopwatch clock;
  const Index n = p.n();
  const int cg_cap = params.max_cg > 0 ? params.max_cg : static_cast<int>(10 * n);
  SolveResult<Scalar> out;
  Vector<Scalar> x = Vector<Scalar>::Zero(n);
  Vector<Scalar> zstar = Vector<Scalar>::Zero(p.B->rows());
  Vector<Scalar> bx = p.B->forward(x);
  Vector<Scalar> z = prox_l1(bx + zstar / sigma, thresh);
  zstar += sigma * (bx - z);

  Vector<Scalar> t1, t2, t3;
  auto hessian = [&](const Vector<Scalar>& v, Vector<Scalar>& hv) {
    p.A->forward(v, t1);
    p.A->adjoint(t1, hv);
    p.B->forward(v, t2);
    p.B->adjoint(t2, t3);
    hv.noalias() += sigma * t3;
  };

  for (long k = 0;; ++k) {
    const Vector<Scalar> data_grad = p.A->adjoint(p.A->forward(x) - p.b);
    const Vector<Scalar> feas = bx - z;
    const Scalar r = detail::combine_residual(p, (data_grad + p.B->adjoint(zstar)).norm(), feas.norm());
    if (k == 0) out.r0 = r;
    IterationRecord rec = detail::baseline_record(k, sigma, r, out.r0, x, reference, clock.seconds());
    rec.active_count = (z.array() != Scalar(0)).count();
    out.final_residual = r;
    if (r <= params.eps_opt * out.r0) {
      out.status = SolveStatus::Converged;
      out.records.push_back(rec);
      out.iterations = k;
      break;
    }
    if (!std::isfinite(r) || r > params.divergence_factor * out.r0) {
      out.status = SolveStatus::Diverged;
      out.message = "residual grew beyond divergence_factor * r0";
      out.records.push_back(rec);
      out.iterations = k;
      break;
    }
    if (k >= params.max_iter) {
      out.status = SolveStatus::MaxIterations;
      out.records.push_back(rec);
      out.iterations = k;
      break;
    }
    const Vector<Scalar> grad = data_grad + p.B->adjoint(zstar + sigma * feas);
    Vector<Scalar> dx = Vector<Scalar>::Zero(n);
    Vector<Scalar> res = -grad;
    const auto cg = conjugate_gradient<Scalar>(hessian, dx, res, params.cg_rtol * grad.norm(), cg_cap);
    out.total_cg += cg.iterations;
    out.cg_cap_hits += !cg.converged;
    const Vector<Scalar> bx_old = bx;
    x += dx;
    bx = p.B->forward(x);
    const Vector<Scalar>& z_source = params.z_update == AdmmZUpdate::AsPrinted ? bx_old : bx;
    z = prox_l1(z_source + zstar / sigma, thresh);
    zstar += sigma * (bx - z);
    rec.inner_iters = 1;
    rec.cg_iters = cg.iterations;
    out.records.push_back(rec);
  }
  out.total_time_s = clock.seconds();
  out.x = std::move(x);
  out.z = std::move(z);
  out.zeta_star = std::move(zstar);
  return out;
}

template <typename Scalar = double>
struct SmoothedBbParams {
  Scalar epsilon_smooth = Scalar(1e-2);
  Scalar eps_opt = Scalar(1e-6);
  long max_iter = 20000;
};

/// Gradient of 0.5|Ax - b|^2 + alpha sum sqrt((Bx)_i^2 + eps).
template <typename Scalar>
Vector<Scalar> smoothed_gradient(const L1Problem<Scalar>& p, const Vector<Scalar>& x, Scalar eps,
                                 Vector<Scalar>* dual = nullptr) {
  const Vector<Scalar> bx = p.B->forward(x);
  const Vector<Scalar> d = bx.array() / (bx.array().square() + eps).sqrt();
  if (dual) *dual = p.alpha * d;
  return p.A->adjoint(p.A->forward(x) - p.b) + p.alpha * p.B->adjoint(d);
}

template <typename Scalar>
Scalar smoothed_objective(const L1Problem<Scalar>& p, const Vector<Scalar>& x, Scalar eps) {
  const Vector<Scalar> bx = p.B->forward(x);
  return Scalar(0.5) * (p.A->forward(x) - p.b).squaredNorm() + p.alpha * (bx.array().square() + eps).sqrt().sum();
}

/// Barzilai-Borwein gradient descent on the smoothed functional. The first
/// step, and any step where the curvature <dx, dg> is not positive, uses
/// 1/lambda_max(A^T A). The logged residual uses z = Bx and
/// z* = alpha (Bx)_i / sqrt((Bx)_i^2 + eps), so it reduces to |gradient|.
template <typename Scalar>
SolveResult<Scalar> smoothed_bb(const L1Problem<Scalar>& p, const SmoothedBbParams<Scalar>& params,
                                const Vector<Scalar>* reference = nullptr) {
  p.validate();
  p.require_spectra();
  if (!(params.epsilon_smooth > Scalar(0))) throw ConfigurationError("epsilon_smooth: must be positive");
  const Scalar tau0 = Scalar(1) / p.lambda_a;

  const Stopwatch clock;
  SolveResult<Scalar> out;
  Vector<Scalar> x = Vector<Scalar>::Zero(p.n());
  Vector<Scalar> dual;
  Vector<Scalar> g = smoothed_gradient(p, x, params.epsilon_smooth, &dual);
  Vector<Scalar> x_prev, g_prev;

  for (long k = 0;; ++k) {
    const Scalar r = g.norm();
    if (k == 0) out.r0 = r;
    IterationRecord rec = detail::baseline_record(k, Scalar(0), r, out.r0, x, reference, clock.seconds());
    rec.active_count = (p.B->forward(x).array() != Scalar(0)).count();
    out.final_residual = r;
    if (!std::isfinite(r)) {
      out.status = SolveStatus::Diverged;
      out.message = "smoothed-bb: iterate became non-finite";
      out.records.push_back(rec);
      out.iterations = k;
      break;
    }
    if (r <= params.eps_opt * out.r0) {
      out.status = SolveStatus::Converged;
      out.records.push_back(rec);
      out.iterations = k;
      break;
    }
    if (k >= params.max_iter) {
      out.status = SolveStatus::MaxIterations;
      out.message = "smoothed-bb: iteration limit reached";
      out.records.push_back(rec);
      out.iterations = k;
      break;
    }
    Scalar tau = tau0;
    if (k > 0) {
      const Vector<Scalar> dx = x - x_prev;
      const Scalar curv = dx.dot(g - g_prev);
      if (curv > Scalar(0)) tau = dx.squaredNorm() / curv;
    }
    x_prev = x;
    g_prev = g;
    x -= tau * g;
    g = smoothed_gradient(p, x, params.epsilon_smooth, &dual);
    rec.inner_iters = 1;
    out.records.push_back(rec);
  }
  out.total_time_s = clock.seconds();
  out.z = p.B->forward(x);
  out.zeta_star = std::move(dual);
  out.x = std::move(x);
  return out;
}

}  // namespace tvn
