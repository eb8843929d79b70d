#include "tvnewton/prox.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace tvn;

namespace {

// Scalar minimiser of 0.5(z - v)^2 + tau|z| by dense grid search and refinement.
double grid_prox(double v, double tau) {
  auto f = [&](double z) { return 0.5 * (z - v) * (z - v) + tau * std::abs(z); };
  double best = 0.0, lo = -10.0, hi = 10.0;
  for (int level = 0; level < 6; ++level) {
    const double h = (hi - lo) / 2000.0;
    for (int i = 0; i <= 2000; ++i) {
      const double z = lo + i * h;
      if (f(z) < f(best)) best = z;
    }
    lo = best - 2 * h;
    hi = best + 2 * h;
  }
  return best;
}

}  // namespace

TEST_CASE("soft thresholding examples") {
  Vector<double> v(3);
  v << 2.0, -3.0, 0.5;
  const Vector<double> p = prox_l1(v, 1.0);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == -2.0);
  CHECK(p[2] == 0.0);
  CHECK(prox_l1(Vector<double>(Vector<double>::Zero(4)), 0.3).isZero(0.0));

  Vector<double> edge(2);
  edge << 1.0, -1.0;
  CHECK(prox_l1(edge, 1.0).isZero(0.0));
  CHECK(prox_l1(edge, 0.0) == edge);
}

TEST_CASE("soft thresholding matches a grid minimiser") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0), t(0.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double v = u(rng), tau = t(rng);
    Vector<double> one(1);
    one << v;
    CHECK(std::abs(prox_l1(one, tau)[0] - grid_prox(v, tau)) <= 1e-7);
  }
}

TEST_CASE("soft thresholding is nonexpansive") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    Vector<double> a(8), b(8);
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    const Vector<double> pa = prox_l1(a, 0.7), pb = prox_l1(b, 0.7);
    CHECK((pa - pb).norm() <= (a - b).norm() + 1e-15);
    // Firm nonexpansiveness: |pa - pb|^2 <= <pa - pb, a - b>.
    CHECK((pa - pb).squaredNorm() <= (pa - pb).dot(a - b) + 1e-12);
  }
}

TEST_CASE("moreau envelope") {
  Vector<double> z(1);
  z << 2.0;
  CHECK(moreau_env(z, 1.0) == doctest::Approx(1.5));
  z << 0.5;
  CHECK(moreau_env(z, 1.0) == doctest::Approx(0.125));

  // Definition: min_y 0.5|y - zeta|^2 + tau|y|_1 attained at the prox.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 2.0);
  Vector<double> v(6);
  for (auto& x : v) x = g(rng);
  const double tau = 0.9;
  const Vector<double> p = prox_l1(v, tau);
  CHECK(moreau_env(v, tau) == doctest::Approx(0.5 * (p - v).squaredNorm() + tau * p.lpNorm<1>()).epsilon(1e-13));

  // Gradient is zeta - prox, checked by central differences.
  const Vector<double> grad = v - p;
  const double h = 1e-6;
  for (Index i = 0; i < v.size(); ++i) {
    Vector<double> vp = v, vm = v;
    vp[i] += h;
    vm[i] -= h;
    CHECK(std::abs((moreau_env(vp, tau) - moreau_env(vm, tau)) / (2 * h) - grad[i]) <= 1e-6);
  }
}

TEST_CASE("l-infinity clamp") {
  Vector<double> v(4);
  v << -3.0, -0.2, 0.4, 9.0;
  Vector<double> expected(4);
  expected << -1.0, -0.2, 0.4, 1.0;
  CHECK(clamp_linf(v, 1.0) == expected);
  // Moreau decomposition: v = prox(v) + clamp(v).
  CHECK((prox_l1(v, 1.0) + clamp_linf(v, 1.0) - v).norm() <= 1e-15);
}

TEST_CASE("distance to the l1 subdifferential") {
  const double alpha = 0.5;
  Vector<double> z(3), s(3);
  z << 1.0, 0.0, -2.0;
  s << 0.5, 0.3, -0.5;
  CHECK(l1_subgradient_residual(z, s, alpha) == 0.0);
  s << 0.5, 0.3, 0.0;
  CHECK(l1_subgradient_residual(z, s, alpha) == doctest::Approx(0.5));
  s << 0.5, 2 * alpha + alpha, -0.5;  // zero entry, 2 alpha outside the interval
  CHECK(l1_subgradient_residual(z, s, alpha) == doctest::Approx(2 * alpha));
  CHECK_THROWS_AS(l1_subgradient_residual(z, Vector<double>(Vector<double>::Zero(2)), alpha), ConfigurationError);
}
