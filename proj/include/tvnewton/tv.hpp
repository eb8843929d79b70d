#pragma once

#include "tvnewton/image.hpp"
#include "tvnewton/linear_map.hpp"

#include <vector>

namespace tvn {

/// Anisotropic forward-difference operator B on a rows x cols image.
///
/// Output layout: the rows*(cols-1) horizontal differences x(i,j+1)-x(i,j),
/// row by row, followed by the (rows-1)*cols vertical differences
/// x(i+1,j)-x(i,j), row by row.
template <typename Scalar = double>
class TvDifference final : public LinearMap<Scalar> {
public:
  using Vec = Vector<Scalar>;

  TvDifference(Index n_row, Index n_col) : n_row_(n_row), n_col_(n_col) {
    if (n_row <= 0 || n_col <= 0) throw ConfigurationError("TV operator: image dimensions must be positive");
    if (n_row * n_col < 2) throw ConfigurationError("TV operator: image needs at least two pixels");
  }

  Index rows() const override { return horizontal_count() + n_col_ * (n_row_ - 1); }
  Index cols() const override { return n_row_ * n_col_; }
  Index n_row() const { return n_row_; }
  Index n_col() const { return n_col_; }
  Index horizontal_count() const { return n_row_ * (n_col_ - 1); }

  std::optional<Eigen::SparseMatrix<Scalar>> sparse_matrix() const override {
    std::vector<Eigen::Triplet<Scalar>> t;
    t.reserve(static_cast<std::size_t>(2 * rows()));
    Index k = 0;
    for (Index i = 0; i < n_row_; ++i)
      for (Index j = 0; j + 1 < n_col_; ++j, ++k) {
        t.emplace_back(k, i * n_col_ + j + 1, Scalar(1));
        t.emplace_back(k, i * n_col_ + j, Scalar(-1));
      }
    for (Index i = 0; i + 1 < n_row_; ++i)
      for (Index j = 0; j < n_col_; ++j, ++k) {
        t.emplace_back(k, (i + 1) * n_col_ + j, Scalar(1));
        t.emplace_back(k, i * n_col_ + j, Scalar(-1));
      }
    Eigen::SparseMatrix<Scalar> m(rows(), cols());
    m.setFromTriplets(t.begin(), t.end());
    return m;
  }

protected:
  void apply(const Vec& x, Vec& y) const override {
    Index k = 0;
    for (Index i = 0; i < n_row_; ++i)
      for (Index j = 0; j + 1 < n_col_; ++j) y[k++] = x[i * n_col_ + j + 1] - x[i * n_col_ + j];
    for (Index i = 0; i + 1 < n_row_; ++i)
      for (Index j = 0; j < n_col_; ++j) y[k++] = x[(i + 1) * n_col_ + j] - x[i * n_col_ + j];
  }

  void apply_adjoint(const Vec& y, Vec& x) const override {
    x.setZero();
    Index k = 0;
    for (Index i = 0; i < n_row_; ++i)
      for (Index j = 0; j + 1 < n_col_; ++j, ++k) {
        x[i * n_col_ + j + 1] += y[k];
        x[i * n_col_ + j] -= y[k];
      }
    for (Index i = 0; i + 1 < n_row_; ++i)
      for (Index j = 0; j < n_col_; ++j, ++k) {
        x[(i + 1) * n_col_ + j] += y[k];
        x[i * n_col_ + j] -= y[k];
      }
  }

  // Entries are +-1, so this sums w over the differences touching each pixel.
  bool apply_squared_adjoint(const Vec& w, Vec& out) const override {
    out.setZero();
    Index k = 0;
    for (Index i = 0; i < n_row_; ++i)
      for (Index j = 0; j + 1 < n_col_; ++j, ++k) {
        out[i * n_col_ + j + 1] += w[k];
        out[i * n_col_ + j] += w[k];
      }
    for (Index i = 0; i + 1 < n_row_; ++i)
      for (Index j = 0; j < n_col_; ++j, ++k) {
        out[(i + 1) * n_col_ + j] += w[k];
        out[i * n_col_ + j] += w[k];
      }
    return true;
  }

private:
  Index n_row_;
  Index n_col_;
};

template <typename Scalar>
Vector<Scalar> apply_tv_diff(const ImageGrid<Scalar>& x) {
  return TvDifference<Scalar>(x.rows, x.cols).forward(x.values);
}

template <typename Scalar>
ImageGrid<Scalar> apply_tv_diff_adjoint(const Vector<Scalar>& y, Index n_row, Index n_col) {
  return ImageGrid<Scalar>(n_row, n_col, TvDifference<Scalar>(n_row, n_col).adjoint(y));
}

}  // namespace tvn
