#include "tvnewton/alm.hpp"
#include "tvnewton/blur.hpp"
#include "tvnewton/radon.hpp"
#include "tvnewton/tv.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace tvn;

namespace {

L1Problem<double> radon_problem(Index n, double alpha, std::uint64_t seed) {
  L1Problem<double> p;
  p.A = radon_operator<double>(n, n, 8, Index(std::ceil(std::hypot(double(n), double(n)))));
  p.B = std::make_shared<TvDifference<double>>(n, n);
  Vector<double> truth = Vector<double>::Zero(n * n);
  for (Index i = n / 4; i < 3 * n / 4; ++i)
    for (Index j = n / 4; j < 3 * n / 4; ++j) truth[i * n + j] = 1.0;
  p.b = p.A->forward(truth) + 0.05 * seeded_normal_vector<double>(p.A->rows(), seed);
  p.alpha = alpha;
  p.compute_spectra();
  return p;
}

Matrix<double> to_dense(const LinearMap<double>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (Index i = 0; i < m.cols(); ++i) out.col(i) = m.forward(Vector<double>::Unit(m.cols(), i));
  return out;
}

}  // namespace

TEST_CASE("initial state") {
  auto p = radon_problem(6, 0.3, 1);
  p.lambda_a = 4.0;
  p.lambda_b = 8.0;
  CHECK(default_sigma0(p) == 5.0);
  AlmParams<double> params;
  const auto s = init_state<double>(p, params, Vector<double>::Zero(36), Vector<double>::Zero(p.B->rows()));
  CHECK(s.sigma == 5.0);
  CHECK(s.z.isZero(0.0));
  CHECK(s.zeta_star.isZero(0.0));
  CHECK(l1_subgradient_residual(s.z, s.zeta_star, p.alpha) == 0.0);
  CHECK(residual(s, p) == doctest::Approx(p.A->adjoint(p.b).norm()).epsilon(1e-14));

  // A nonzero start: zeta0 becomes a subgradient at z0.
  const Vector<double> x0 = seeded_normal_vector<double>(36, 2);
  const Vector<double> zeta0 = seeded_normal_vector<double>(p.B->rows(), 3);
  const auto s2 = init_state<double>(p, params, x0, zeta0);
  CHECK(l1_subgradient_residual(s2.z, s2.zeta_star, p.alpha) <= 1e-14);
  CHECK(s2.zeta_star.lpNorm<Eigen::Infinity>() <= p.alpha * (1 + 1e-14));

  L1Problem<double> unset = p;
  unset.lambda_b = 0.0;
  CHECK_THROWS_AS(default_sigma0(unset), ConfigurationError);
}

TEST_CASE("penalty schedule and multiplier bound") {
  const auto p = radon_problem(8, 0.2, 2);
  AlmParams<double> params;
  auto s = init_state<double>(p, params, Vector<double>::Zero(64), Vector<double>::Zero(p.B->rows()));
  bool first_increase = true;
  for (int k = 0; k < 8; ++k) {
    AlmStepReport<double> rep;
    const auto next = alm_step(s, p, params, &rep);
    CHECK(rep.sub.converged);
    CHECK(next.zeta_star.lpNorm<Eigen::Infinity>() <= p.alpha * (1 + 1e-12));
    CHECK(l1_subgradient_residual(next.z, next.zeta_star, p.alpha) <= 1e-12 * p.alpha * std::sqrt(double(next.z.size())));
    if (rep.sigma_increased) {
      CHECK(next.feasibility > params.beta * s.feasibility);
      const double factor = first_increase ? 2.0 : 1.0 + 5.0 / (5.0 + double(s.sched));
      CHECK(next.sigma == doctest::Approx(factor * s.sigma).epsilon(1e-14));
      CHECK(next.sched == s.sched + 1);
      first_increase = false;
    } else {
      CHECK(next.sigma == s.sigma);
      CHECK(next.sched == s.sched);
    }
    const double g0 = s.initial_lagrangian_grad;
    const double gk = lagrangian_grad_x(p, s.x, s.z, s.zeta_star, s.sigma).norm();
    CHECK(rep.tolerance == doctest::Approx(std::min(std::ldexp(g0, -int(k + 1)), 0.1 * gk)));
    s = next;
  }
  CHECK_FALSE(first_increase);
}

TEST_CASE("zero data terminates immediately") {
  auto p = radon_problem(5, 0.2, 3);
  p.b.setZero();
  const auto res = alm_solve<double>(p, AlmParams<double>{});
  CHECK(res.converged());
  CHECK(res.iterations == 0);
  CHECK(res.x.isZero(0.0));
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0].k == 0);
}

TEST_CASE("alm agrees with a dual projected-gradient oracle for denoising") {
  // A = I: x = b - B^T p with p = argmin_{|p|_inf <= alpha} 0.5|b - B^T p|^2.
  const Index nr = 5, nc = 6;
  L1Problem<double> p;
  p.A = std::make_shared<DenseMap<double>>(Matrix<double>::Identity(nr * nc, nr * nc));
  p.B = std::make_shared<TvDifference<double>>(nr, nc);
  p.b = seeded_normal_vector<double>(nr * nc, 4);
  p.alpha = 0.35;
  p.compute_spectra(500, 1e-10);
  const Matrix<double> bm = to_dense(*p.B);
  Vector<double> dual = Vector<double>::Zero(bm.rows());
  const double step = 1.0 / 8.0;  // |B|^2 <= 8
  for (int it = 0; it < 200000; ++it) {
    const Vector<double> g = -bm * (p.b - bm.transpose() * dual);
    dual = clamp_linf(Vector<double>(dual - step * g), p.alpha);
  }
  const Vector<double> oracle = p.b - bm.transpose() * dual;

  AlmParams<double> params;
  params.eps_opt = 1e-10;
  const auto res = alm_solve<double>(p, params);
  REQUIRE(res.converged());
  CHECK((res.x - oracle).norm() <= 1e-6 * oracle.norm());
}

TEST_CASE("blur deconvolution 32x32 with a first-order audit") {
  L1Problem<double> p;
  p.A = blur_operator<double>(32, 32, 2, gaussian_kernel<double>(2, 1.0));
  p.B = std::make_shared<TvDifference<double>>(32, 32);
  Vector<double> truth = Vector<double>::Zero(1024);
  for (Index i = 8; i < 24; ++i)
    for (Index j = 6; j < 20; ++j) truth[i * 32 + j] = 1.0;
  p.b = p.A->forward(truth) + 0.01 * seeded_normal_vector<double>(1024, 5);
  p.alpha = 0.01;
  p.compute_spectra();
  AlmParams<double> params;
  params.eps_opt = 1e-6;
  const auto res = alm_solve<double>(p, params, std::nullopt, std::nullopt, &truth);
  REQUIRE(res.converged());
  CHECK(res.records.back().rel_residual <= 1e-6);
  CHECK(res.records.front().rel_residual == 1.0);
  for (const auto& rec : res.records) CHECK(rec.err2.has_value());

  // Optimality recomputed from scratch: stationarity, feasibility, subgradient.
  const auto parts = first_order_residual(p, res.x, res.z, res.zeta_star);
  CHECK(parts.total <= 1e-6 * res.r0 * (1 + 1e-9));
  CHECK(l1_subgradient_residual(res.z, res.zeta_star, p.alpha) <= 1e-10);
  // The objective at x beats nearby perturbations.
  auto objective = [&](const Vector<double>& x) {
    return 0.5 * (p.A->forward(x) - p.b).squaredNorm() + p.alpha * p.B->forward(x).lpNorm<1>();
  };
  const double f = objective(res.x);
  for (int t = 0; t < 10; ++t)
    CHECK(f <= objective(res.x + 1e-3 * seeded_normal_vector<double>(1024, 50 + t)) + 1e-9);
}

TEST_CASE("alm iterate is a fixed point at convergence") {
  const auto p = radon_problem(10, 0.1, 6);
  AlmParams<double> params;
  const auto res = alm_solve<double>(p, params);
  REQUIRE(res.converged());
  // One more outer step from the returned primal-dual pair leaves it in place.
  const auto s = init_state<double>(p, params, res.x, res.zeta_star);
  CHECK(residual(s, p) <= 1e-8 * res.r0);
  CHECK((s.zeta_star - res.zeta_star).norm() <= 1e-6 * res.zeta_star.norm());
  const auto next = alm_step(s, p, params);
  CHECK((next.x - res.x).norm() <= 1e-8 * res.x.norm());
  CHECK(residual(next, p) <= 1e-8 * res.r0);
}

TEST_CASE("max_outer stops with the right status") {
  const auto p = radon_problem(8, 0.2, 7);
  AlmParams<double> params;
  params.max_outer = 1;
  const auto res = alm_solve<double>(p, params);
  CHECK(res.status == SolveStatus::MaxIterations);
  CHECK(res.iterations == 1);
  CHECK(res.records.size() == 2);
}

TEST_CASE("auto alpha against an independent evaluation") {
  const auto p = radon_problem(7, 0.1, 8);
  const Matrix<double> a = to_dense(*p.A), b = to_dense(*p.B);
  const double delta = 0.37;
  std::mt19937_64 rng(42);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(-0.5, 0.5);
  double num = 0, den = 0;
  for (int i = 0; i < 10; ++i) {
    Vector<double> v(a.rows());
    for (auto& e : v) e = nd(rng);
    num += (a.transpose() * v).norm() / v.norm();
  }
  for (int i = 0; i < 10; ++i) {
    Vector<double> v(b.rows());
    for (auto& e : v) e = ud(rng);
    den += (b.transpose() * v).norm() / v.cwiseAbs().maxCoeff();
  }
  CHECK(auto_alpha(*p.A, *p.B, delta, 10, 42) == doctest::Approx(delta * num / den).epsilon(1e-12));
  CHECK_THROWS_AS(auto_alpha(*p.A, *p.B, 0.0), ConfigurationError);
  CHECK_THROWS_AS(auto_alpha(*p.A, *p.B, 0.1, 0), ConfigurationError);
}

TEST_CASE("parameter validation") {
  const auto p = radon_problem(4, 0.1, 9);
  AlmParams<double> params;
  params.beta = 1.0;
  CHECK_THROWS_AS(alm_solve<double>(p, params), ConfigurationError);
  params = {};
  params.sigma0 = -1.0;
  CHECK_THROWS_AS(alm_solve<double>(p, params), ConfigurationError);
  L1Problem<double> q = p;
  q.alpha = 0.0;
  CHECK_THROWS_AS(alm_solve<double>(q, AlmParams<double>{}), ConfigurationError);
}
