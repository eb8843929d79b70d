#pragma once

#include "tvnewton/linear_map.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tvn {

/// Separable convolution with a (2r+1)-tap kernel applied along rows and then
/// along columns. Out-of-range samples replicate the nearest edge pixel, so
/// constant images are fixed points.
template <typename Scalar = double>
class BlurMap final : public LinearMap<Scalar> {
public:
  using Vec = Vector<Scalar>;

  BlurMap(Index n_row, Index n_col, std::vector<Scalar> weights)
      : n_row_(n_row), n_col_(n_col), w_(std::move(weights)) {
    if (n_row <= 0 || n_col <= 0) throw ConfigurationError("blur: image dimensions must be positive");
    if (w_.empty() || w_.size() % 2 == 0) throw ConfigurationError("blur: kernel needs 2*radius+1 weights");
    Scalar sum(0);
    for (Scalar v : w_) {
      if (v < Scalar(0)) throw ConfigurationError("blur: kernel weights must be nonnegative");
      sum += v;
    }
    if (std::abs(sum - Scalar(1)) > Scalar(1e-12)) throw ConfigurationError("blur: kernel weights must sum to 1");
    sq_row_ = line_matrix(n_col_).cwiseAbs2();
    sq_col_ = line_matrix(n_row_).cwiseAbs2();
  }

  Index rows() const override { return n_row_ * n_col_; }
  Index cols() const override { return n_row_ * n_col_; }
  Index radius() const { return static_cast<Index>(w_.size() / 2); }

protected:
  void apply(const Vec& x, Vec& y) const override {
    Vec tmp(x.size());
    pass(x, tmp, 1, n_col_, n_row_, n_col_, false);
    pass(tmp, y, n_col_, 1, n_col_, n_row_, false);
  }
  void apply_adjoint(const Vec& y, Vec& x) const override {
    Vec tmp(y.size());
    pass(y, tmp, n_col_, 1, n_col_, n_row_, true);
    pass(tmp, x, 1, n_col_, n_row_, n_col_, true);
  }

  // The map is K_col (x) K_row on the row-major layout, so its entrywise
  // square is the Kronecker product of the squared 1-D matrices.
  bool apply_squared_adjoint(const Vec& w, Vec& out) const override {
    using RowMajor = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> wm(w.data(), n_row_, n_col_);
    Eigen::Map<RowMajor> om(out.data(), n_row_, n_col_);
    om.noalias() = sq_col_.transpose() * wm * sq_row_;
    return true;
  }

private:
  // 1-D filter with edge replication as an explicit len x len matrix.
  Matrix<Scalar> line_matrix(Index len) const {
    const Index r = radius();
    Matrix<Scalar> m = Matrix<Scalar>::Zero(len, len);
    for (Index p = 0; p < len; ++p)
      for (Index k = -r; k <= r; ++k) m(p, std::clamp<Index>(p + k, 0, len - 1)) += w_[static_cast<std::size_t>(k + r)];
    return m;
  }

  // Filters `lines` independent lines of `len` samples; sample p of line q is
  // at q * line_stride + p * step.
  void pass(const Vec& in, Vec& out, Index step, Index line_stride, Index lines, Index len, bool transpose) const {
    const Index r = radius();
    out.setZero();
    for (Index q = 0; q < lines; ++q) {
      const Index base = q * line_stride;
      for (Index p = 0; p < len; ++p)
        for (Index k = -r; k <= r; ++k) {
          const Index src = std::clamp<Index>(p + k, 0, len - 1);
          const Scalar w = w_[static_cast<std::size_t>(k + r)];
          if (transpose)
            out[base + src * step] += w * in[base + p * step];
          else
            out[base + p * step] += w * in[base + src * step];
        }
    }
  }

  Index n_row_;
  Index n_col_;
  std::vector<Scalar> w_;
  Matrix<Scalar> sq_row_;  // squared filter along a row (n_col x n_col)
  Matrix<Scalar> sq_col_;  // squared filter along a column (n_row x n_row)
};

/// Normalized sampled Gaussian with 2*radius+1 taps.
template <typename Scalar = double>
std::vector<Scalar> gaussian_kernel(Index radius, Scalar width) {
  if (radius < 0) throw ConfigurationError("blur: radius must be nonnegative");
  std::vector<Scalar> w(static_cast<std::size_t>(2 * radius + 1));
  Scalar sum(0);
  for (Index k = -radius; k <= radius; ++k) {
    const Scalar v = radius == 0 ? Scalar(1) : std::exp(-Scalar(k * k) / (Scalar(2) * width * width));
    w[static_cast<std::size_t>(k + radius)] = v;
    sum += v;
  }
  for (Scalar& v : w) v /= sum;
  return w;
}

template <typename Scalar = double>
OperatorPtr<Scalar> blur_operator(Index n_row, Index n_col, Index kernel_radius, std::vector<Scalar> kernel_weights) {
  check_dim(static_cast<Index>(kernel_weights.size()), 2 * kernel_radius + 1, "blur kernel_weights");
  return std::make_shared<BlurMap<Scalar>>(n_row, n_col, std::move(kernel_weights));
}

}  // namespace tvn
