#pragma once

#include "tvnewton/common.hpp"

namespace tvn {

/// A rows x cols image stored as a flat vector. Pixel (i, j) (zero-based)
/// lives at i * cols + j, i.e. row-major; every operator and file format in
/// the library uses this layout.
template <typename Scalar = double>
struct ImageGrid {
  Index rows = 0;
  Index cols = 0;
  Vector<Scalar> values;

  ImageGrid() = default;
  ImageGrid(Index r, Index c) : rows(r), cols(c), values(Vector<Scalar>::Zero(r * c)) {
    if (r <= 0 || c <= 0) throw ConfigurationError("image dimensions must be positive");
  }
  ImageGrid(Index r, Index c, Vector<Scalar> v) : rows(r), cols(c), values(std::move(v)) {
    if (r <= 0 || c <= 0) throw ConfigurationError("image dimensions must be positive");
    check_dim(values.size(), r * c, "image values");
  }

  Index size() const { return rows * cols; }
  Index flat(Index i, Index j) const { return i * cols + j; }
  Scalar& operator()(Index i, Index j) { return values[flat(i, j)]; }
  Scalar operator()(Index i, Index j) const { return values[flat(i, j)]; }
};

}  // namespace tvn
