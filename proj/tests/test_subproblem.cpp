#include "tvnewton/blur.hpp"
#include "tvnewton/radon.hpp"
#include "tvnewton/spectral.hpp"
#include "tvnewton/subproblem.hpp"
#include "tvnewton/tv.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace tvn;

namespace {

SubproblemSpec<double> make_spec(Index nr, Index nc, double alpha, double sigma, std::uint64_t seed) {
  SubproblemSpec<double> s;
  s.A = radon_operator<double>(nr, nc, 6, Index(std::ceil(std::hypot(double(nr), double(nc)))));
  s.B = std::make_shared<TvDifference<double>>(nr, nc);
  s.b = seeded_normal_vector<double>(s.A->rows(), seed);
  s.alpha = alpha;
  s.sigma = sigma;
  s.zeta_star = clamp_linf(seeded_normal_vector<double>(s.B->rows(), seed + 1), alpha);
  return s;
}

Matrix<double> to_dense(const LinearMap<double>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (Index i = 0; i < m.cols(); ++i) out.col(i) = m.forward(Vector<double>::Unit(m.cols(), i));
  return out;
}

}  // namespace

TEST_CASE("Psi minimises psi in z") {
  const auto spec = make_spec(3, 3, 0.4, 2.0, 1);
  const Vector<double> x = seeded_normal_vector<double>(9, 8);
  const Vector<double> z = psi_argmin_z(x, spec);
  const Vector<double> bx = spec.B->forward(x);
  // psi is separable in z; scan each coordinate on a grid around the claimed minimiser.
  for (Index i = 0; i < z.size(); ++i) {
    auto f = [&](double zi) {
      const double d = bx[i] - zi;
      return spec.alpha * std::abs(zi) + spec.zeta_star[i] * d + 0.5 * spec.sigma * d * d;
    };
    for (int k = -200; k <= 200; ++k) CHECK(f(z[i]) <= f(z[i] + 0.01 * k) + 1e-14);
  }
  const double base = psi_value(x, z, spec);
  for (int t = 0; t < 20; ++t)
    CHECK(base <= psi_value<double>(x, z + 0.1 * seeded_normal_vector<double>(z.size(), 100 + t), spec));
}

TEST_CASE("theta gradient by finite differences and convexity") {
  const auto spec = make_spec(4, 4, 0.3, 1.5, 2);
  const Vector<double> x = seeded_normal_vector<double>(16, 9);
  const auto e = theta_value_and_grad(x, spec);
  CHECK(e.value == doctest::Approx(psi_value(x, e.z, spec)).epsilon(1e-14));
  CHECK((e.grad - psi_grad_x(x, e.z, spec)).norm() <= 1e-12 * e.grad.norm());
  const double h = 1e-6;
  for (Index i = 0; i < 16; ++i) {
    Vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (theta_value(xp, spec).value - theta_value(xm, spec).value) / (2 * h);
    CHECK(std::abs(fd - e.grad[i]) <= 1e-5 * std::max(1.0, std::abs(e.grad[i])));
  }
  for (int t = 0; t < 20; ++t) {
    const Vector<double> u = seeded_normal_vector<double>(16, 200 + t);
    const Vector<double> w = seeded_normal_vector<double>(16, 300 + t);
    const double mid = theta_value<double>(0.5 * (u + w), spec).value;
    CHECK(mid <= 0.5 * (theta_value(u, spec).value + theta_value(w, spec).value) + 1e-12);
    // theta lies above its tangent planes.
    const auto eu = theta_value_and_grad(u, spec);
    CHECK(theta_value(w, spec).value >= eu.value + eu.grad.dot(w - u) - 1e-10);
  }
}

TEST_CASE("conjugate gradient against a dense solve") {
  Matrix<double> g(5, 5);
  g << 4, 1, 0, 0, 1, 1, 3, 1, 0, 0, 0, 1, 5, 2, 0, 0, 0, 2, 6, 1, 1, 0, 0, 1, 2;
  Vector<double> rhs(5);
  rhs << 1, -2, 3, 0.5, 1;
  const Vector<double> exact = g.ldlt().solve(rhs);
  auto apply = [&](const Vector<double>& p, Vector<double>& hp) { hp = g * p; };
  for (bool pre : {false, true}) {
    Vector<double> x = Vector<double>::Zero(5), r = rhs;
    const Vector<double> inv = g.diagonal().cwiseInverse();
    const auto res = conjugate_gradient<double>(apply, x, r, 1e-12, 50, pre ? &inv : nullptr);
    CHECK(res.converged);
    CHECK(res.iterations <= 5);
    CHECK((x - exact).norm() <= 1e-8);
    CHECK((r - (rhs - g * x)).norm() <= 1e-10);
  }
  Vector<double> x = Vector<double>::Zero(5), r = rhs;
  const auto capped = conjugate_gradient<double>(apply, x, r, 1e-14, 2);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 2);
}

TEST_CASE("Newton direction against a dense solve") {
  // Large alpha keeps every Bx small enough to be thresholded: empty active set.
  for (auto pre : {NewtonPreconditioner::None, NewtonPreconditioner::Jacobi, NewtonPreconditioner::Laplacian}) {
    auto spec = make_spec(2, 3, 50.0, 3.0, 4);
    spec.zeta_star.setZero();
    const Vector<double> x = 0.01 * seeded_normal_vector<double>(6, 5);
    const auto hat = theta_value_and_grad(x, spec);
    NewtonWorkspace<double> ws;
    setup_preconditioner(ws, spec, pre);
    CHECK((ws.laplacian != nullptr) == (pre == NewtonPreconditioner::Laplacian));
    fill_workspace(ws, hat, spec, 1.0);
    REQUIRE(ws.active_set.empty());
    newton_direction(ws, spec, 1e-13, 1000);
    const Matrix<double> a = to_dense(*spec.A), b = to_dense(*spec.B);
    const Matrix<double> h = a.transpose() * a + spec.sigma * b.transpose() * b;
    const Vector<double> exact = h.ldlt().solve(-hat.grad);
    CHECK((ws.direction - exact).norm() <= 1e-8 * exact.norm());
  }

  // With an active set the weights are rho / z_hat^2 there.
  for (auto pre : {NewtonPreconditioner::None, NewtonPreconditioner::Jacobi, NewtonPreconditioner::Laplacian}) {
    auto spec = make_spec(3, 3, 0.05, 2.0, 6);
    const Vector<double> x = 3.0 * seeded_normal_vector<double>(9, 7);
    const auto hat = theta_value_and_grad(x, spec);
    NewtonWorkspace<double> ws;
    setup_preconditioner(ws, spec, pre);
    fill_workspace(ws, hat, spec, 0.7);
    REQUIRE_FALSE(ws.active_set.empty());
    for (Index i = 0; i < hat.z.size(); ++i)
      CHECK(ws.weights[i] == doctest::Approx(hat.z[i] != 0.0 ? 0.7 / (hat.z[i] * hat.z[i]) : spec.sigma));
    newton_direction(ws, spec, 1e-13, 1000);
    const Matrix<double> a = to_dense(*spec.A), b = to_dense(*spec.B);
    const Matrix<double> h = a.transpose() * a + b.transpose() * ws.weights.asDiagonal() * b;
    const Vector<double> exact = h.ldlt().solve(-hat.grad);
    CHECK((ws.direction - exact).norm() <= 1e-8 * exact.norm());
    // A descent direction for theta at x_hat.
    CHECK(hat.grad.dot(ws.direction) < 0.0);
  }
}

TEST_CASE("laplacian factor solves its own matrix") {
  const TvDifference<double> tv(4, 5);
  const auto bm = tv.sparse_matrix();
  REQUIRE(bm.has_value());
  LaplacianFactor<double> f(*bm);
  const Vector<double> d = seeded_normal_vector<double>(20, 1).cwiseAbs();
  for (int round = 0; round < 2; ++round) {
    const Vector<double> w = seeded_normal_vector<double>(tv.rows(), 2 + round).cwiseAbs() * 1e3;
    REQUIRE(f.factor(d, w));
    const Matrix<double> b = Matrix<double>(*bm);
    const Matrix<double> m = Matrix<double>(d.asDiagonal()) + b.transpose() * w.asDiagonal() * b;
    const Vector<double> rhs = seeded_normal_vector<double>(20, 9);
    const Vector<double> sol = f.ldlt.solve(rhs);
    CHECK((m * sol - rhs).norm() <= 1e-10 * rhs.norm());
  }
  CHECK(f.analyzed);
}

TEST_CASE("theta change in difference form") {
  const auto spec = make_spec(4, 5, 0.3, 2.0, 21);
  const auto from = theta_value_and_grad(seeded_normal_vector<double>(20, 3), spec);
  for (double scale : {1.0, 1e-3}) {
    const Vector<double> s = scale * seeded_normal_vector<double>(20, 4);
    const double naive = theta_value<double>(from.x + s, spec).value - from.value;
    const double diff = theta_change<double>(from, spec.A->forward(s), spec.B->forward(s), spec);
    CHECK(diff == doctest::Approx(naive).epsilon(1e-9));
  }
  // Far below the rounding unit of theta the first-order term dominates.
  const Vector<double> tiny = 1e-11 * seeded_normal_vector<double>(20, 5);
  const double diff = theta_change<double>(from, spec.A->forward(tiny), spec.B->forward(tiny), spec);
  CHECK(diff == doctest::Approx(from.grad.dot(tiny)).epsilon(1e-7));
  CHECK_THROWS_AS(theta_change<double>(from, Vector<double>::Zero(3), spec.B->forward(tiny), spec), ConfigurationError);
}

TEST_CASE("line search") {
  const auto spec = make_spec(3, 3, 0.2, 1.0, 8);
  SsnParams<double> params;
  const auto hat = theta_value_and_grad(seeded_normal_vector<double>(9, 1), spec);

  // Newton-like direction: unit step accepted.
  NewtonWorkspace<double> ws;
  fill_workspace(ws, hat, spec, 1.0);
  newton_direction(ws, spec, 1e-10, 1000);
  const auto full = line_search(hat, ws.direction, spec, params);
  CHECK(full.next.value <= hat.value + params.nu * std::pow(0.5, full.exponent) * hat.grad.dot(ws.direction));

  // Overlong gradient step needs halvings, and the accepted step satisfies Armijo.
  const Vector<double> longdir = -1e4 * hat.grad;
  const auto ls = line_search(hat, longdir, spec, params);
  CHECK(ls.exponent > 0);
  const double t = std::pow(0.5, ls.exponent);
  CHECK(ls.next.value <= hat.value + params.nu * t * hat.grad.dot(longdir));
  CHECK(theta_value<double>(hat.x + 2 * t * longdir, spec).value >
        hat.value + params.nu * 2 * t * hat.grad.dot(longdir));

  CHECK_THROWS_AS(line_search<double>(hat, hat.grad, spec, params), SolverError);
  // A wrong-sign gradient makes every step fail the Armijo test.
  auto bad = hat;
  bad.grad = -hat.grad;
  SsnParams<double> few = params;
  few.max_halvings = 5;
  CHECK_THROWS_AS(line_search<double>(bad, hat.grad, spec, few), SolverError);
}

TEST_CASE("rho update") {
  const SsnParams<double> p;
  CHECK(update_rho(2.0, std::optional<double>(p.chi1), p) == 2.0);
  CHECK(update_rho(2.0, std::optional<double>(-1.0), p) == 2.0);
  CHECK(update_rho(2.0, std::optional<double>(2 * p.chi1), p) == doctest::Approx(4.0));
  CHECK(update_rho(2.0, std::optional<double>(-100.0), p) == doctest::Approx(8.0));
  CHECK(update_rho(2.0, std::optional<double>(0.0), p) == doctest::Approx(0.5));
  CHECK(update_rho(2.0, std::optional<double>(-0.4), p) == doctest::Approx(1.0));
  CHECK(update_rho(2.0, std::optional<double>(), p) == 2.0);

  Vector<double> zh(3), bdx(3);
  zh << 1.0, 0.0, -2.0;
  bdx << -0.5, 7.0, 3.0;
  CHECK(*newton_chi<double>(zh, {0, 2}, bdx) == doctest::Approx(-1.5));
  CHECK_FALSE(newton_chi<double>(zh, {}, bdx).has_value());
}

TEST_CASE("semismooth Newton solves the subproblem") {
  auto spec = make_spec(8, 8, 0.05, 4.0, 10);
  SsnParams<double> params;
  params.eps = 1e-8;
  std::vector<double> observed;
  const auto res = solve_subproblem<double>(Vector<double>::Zero(64), spec, params,
                                            [&](int, const Vector<double>& x) { observed.push_back(theta_value(x, spec).value); });
  REQUIRE(res.converged);
  CHECK(res.grad_norm <= 1e-8);
  CHECK((psi_grad_x(res.x, res.z, spec)).norm() <= 1e-8);
  CHECK(res.z == psi_argmin_z(res.x, spec));
  CHECK(res.psi >= spec.psi_lower_bound());
  CHECK(observed.size() == std::size_t(res.iterations) + 1);
  for (std::size_t j = 1; j < observed.size(); ++j) CHECK(observed[j] < observed[j - 1]);
  for (const auto& st : res.stats) {
    CHECK(st.psi_hat <= st.psi);
    CHECK(st.psi >= spec.psi_lower_bound());
  }
  long cg = 0;
  for (const auto& st : res.stats) cg += st.cg_approx + st.cg_newton;
  CHECK(cg == res.total_cg);

  // Restarting at the solution takes no iterations.
  const auto again = solve_subproblem<double>(res.x, spec, params);
  CHECK(again.converged);
  CHECK(again.iterations == 0);

  // Every Newton preconditioner reaches the same minimiser.
  for (auto pre : {NewtonPreconditioner::None, NewtonPreconditioner::Jacobi}) {
    params.newton_preconditioner = pre;
    const auto other = solve_subproblem<double>(Vector<double>::Zero(64), spec, params);
    REQUIRE(other.converged);
    CHECK((other.x - res.x).norm() <= 1e-6 * res.x.norm());
  }
}

TEST_CASE("rho stays fixed when the chi band never triggers") {
  auto spec = make_spec(6, 6, 0.05, 4.0, 12);
  SsnParams<double> params;
  params.eps = 1e-8;
  params.max_outer = 40;
  params.rho0 = 0.3;
  // chi < chi1 is impossible, and chi > chi2 rescales by about chi_bar2 = 1.
  params.chi1 = -1e300;
  params.chi2 = -std::numeric_limits<double>::min();
  params.chi_bar2 = 1.0 - 1e-15;
  const auto res = solve_subproblem<double>(Vector<double>::Zero(36), spec, params);
  REQUIRE(res.stats.size() == 40);
  for (std::size_t j = 0; j < res.stats.size(); ++j) {
    CHECK(res.stats[j].rho == doctest::Approx(0.3).epsilon(1e-12));
    if (j > 0) CHECK(res.stats[j].psi < res.stats[j - 1].psi);
  }
  CHECK(res.stats.back().grad_norm < 0.1 * res.stats.front().grad_norm);
}

TEST_CASE("parameter and dimension validation") {
  auto spec = make_spec(3, 3, 0.1, 1.0, 1);
  SsnParams<double> params;
  params.nu = 1.5;
  CHECK_THROWS_AS(solve_subproblem<double>(Vector<double>::Zero(9), spec, params), ConfigurationError);
  params = {};
  CHECK_THROWS_AS(solve_subproblem<double>(Vector<double>::Zero(8), spec, params), ConfigurationError);
  spec.sigma = 0.0;
  CHECK_THROWS_AS(solve_subproblem<double>(Vector<double>::Zero(9), spec, params), ConfigurationError);
}
