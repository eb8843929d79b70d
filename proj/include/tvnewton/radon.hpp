#pragma once

#include "tvnewton/linear_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace tvn {

/// Parallel-beam geometry. Pixels are unit squares; the image is centered at
/// the origin with row 0 on top. Ray (a, k) is the line
///   p(t) = s_k * (cos th_a, sin th_a) + t * (-sin th_a, cos th_a)
/// with th_a = angle_fraction * pi * a / n_angles and detector offsets s_k
/// spread evenly over the image diagonal. Sinogram entry a * n_rays + k.
struct RadonGeometry {
  Index n_row = 0;
  Index n_col = 0;
  Index n_angles = 0;
  Index n_rays = 0;
  double angle_fraction = 1.0;

  double angle(Index a) const {
    return angle_fraction * std::numbers::pi * static_cast<double>(a) / static_cast<double>(n_angles);
  }
  double detector_spacing() const {
    return std::hypot(static_cast<double>(n_row), static_cast<double>(n_col)) / static_cast<double>(n_rays);
  }
  double offset(Index k) const {
    return (static_cast<double>(k) - 0.5 * static_cast<double>(n_rays - 1)) * detector_spacing();
  }
};

namespace detail {

/// Exact intersection lengths of one ray with the pixel grid (Siddon).
template <typename Scalar>
void trace_ray(const RadonGeometry& g, double theta, double s, Index row,
               std::vector<Eigen::Triplet<Scalar>>& out) {
  const double xmin = -0.5 * static_cast<double>(g.n_col), xmax = -xmin;
  const double ymin = -0.5 * static_cast<double>(g.n_row), ymax = -ymin;
  const double px = s * std::cos(theta), py = s * std::sin(theta);
  const double dx = -std::sin(theta), dy = std::cos(theta);
  constexpr double tiny = 1e-12;

  double t_in = -std::numeric_limits<double>::infinity();
  double t_out = std::numeric_limits<double>::infinity();
  auto clip = [&](double p, double d, double lo, double hi) {
    if (std::abs(d) < tiny) return p >= lo && p <= hi;
    double t0 = (lo - p) / d, t1 = (hi - p) / d;
    if (t0 > t1) std::swap(t0, t1);
    t_in = std::max(t_in, t0);
    t_out = std::min(t_out, t1);
    return true;
  };
  if (!clip(px, dx, xmin, xmax) || !clip(py, dy, ymin, ymax) || t_out <= t_in) return;

  std::vector<double> ts{t_in, t_out};
  if (std::abs(dx) >= tiny)
    for (Index j = 0; j <= g.n_col; ++j) {
      const double t = (xmin + static_cast<double>(j) - px) / dx;
      if (t > t_in && t < t_out) ts.push_back(t);
    }
  if (std::abs(dy) >= tiny)
    for (Index i = 0; i <= g.n_row; ++i) {
      const double t = (ymin + static_cast<double>(i) - py) / dy;
      if (t > t_in && t < t_out) ts.push_back(t);
    }
  std::sort(ts.begin(), ts.end());

  for (std::size_t q = 0; q + 1 < ts.size(); ++q) {
    const double len = ts[q + 1] - ts[q];
    if (len <= 0.0) continue;
    const double tm = 0.5 * (ts[q] + ts[q + 1]);
    const auto col = std::clamp<Index>(static_cast<Index>(std::floor(px + tm * dx - xmin)), 0, g.n_col - 1);
    const auto r = std::clamp<Index>(static_cast<Index>(std::floor(ymax - (py + tm * dy))), 0, g.n_row - 1);
    out.emplace_back(row, r * g.n_col + col, static_cast<Scalar>(len));
  }
}

}  // namespace detail

/// Discrete parallel-beam Radon transform. The adjoint is the exact transpose
/// of the assembled weights.
template <typename Scalar = double>
OperatorPtr<Scalar> radon_operator(const RadonGeometry& g) {
  if (g.n_row <= 0 || g.n_col <= 0 || g.n_angles <= 0 || g.n_rays <= 0)
    throw ConfigurationError("radon: all counts must be positive");
  if (!(g.angle_fraction > 0.0 && g.angle_fraction <= 1.0))
    throw ConfigurationError("radon: angle_fraction must lie in (0, 1]");

  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(static_cast<std::size_t>(g.n_angles * g.n_rays * 2 * (g.n_row + g.n_col)));
  for (Index a = 0; a < g.n_angles; ++a) {
    const double theta = g.angle(a);
    for (Index k = 0; k < g.n_rays; ++k) detail::trace_ray(g, theta, g.offset(k), a * g.n_rays + k, triplets);
  }
  typename SparseMap<Scalar>::Sparse m(g.n_angles * g.n_rays, g.n_row * g.n_col);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return std::make_shared<SparseMap<Scalar>>(std::move(m));
}

template <typename Scalar = double>
OperatorPtr<Scalar> radon_operator(Index n_row, Index n_col, Index n_angles, Index n_rays,
                                   double angle_fraction = 1.0) {
  return radon_operator<Scalar>(RadonGeometry{n_row, n_col, n_angles, n_rays, angle_fraction});
}

}  // namespace tvn
