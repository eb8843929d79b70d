#pragma once

#include "tvnewton/common.hpp"

#include <Eigen/SparseCore>

#include <memory>
#include <optional>

namespace tvn {

/// Matrix-free linear operator R^cols -> R^rows with its transpose.
///
/// forward()/adjoint() check dimensions and throw ConfigurationError on a
/// mismatch; subclasses implement the unchecked kernels. Instances are
/// immutable after construction and may be applied from several threads.
template <typename Scalar = double>
class LinearMap {
public:
  using Vec = Vector<Scalar>;

  virtual ~LinearMap() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;

  void forward(const Vec& x, Vec& y) const {
    check_dim(x.size(), cols(), "operator forward input");
    y.resize(rows());
    apply(x, y);
  }
  void adjoint(const Vec& y, Vec& x) const {
    check_dim(y.size(), rows(), "operator adjoint input");
    x.resize(cols());
    apply_adjoint(y, x);
  }
  Vec forward(const Vec& x) const {
    Vec y;
    forward(x, y);
    return y;
  }
  Vec adjoint(const Vec& y) const {
    Vec x;
    adjoint(y, x);
    return x;
  }

  /// (M o M)^T w, i.e. diag(M^T diag(w) M), when the operator can form it
  /// exactly; empty otherwise. Used for diagonal preconditioning.
  std::optional<Vec> squared_adjoint(const Vec& w) const {
    check_dim(w.size(), rows(), "operator squared_adjoint input");
    Vec out(cols());
    if (!apply_squared_adjoint(w, out)) return std::nullopt;
    return out;
  }

  /// The operator as an explicit sparse matrix when it is cheap to form;
  /// empty otherwise. Used to build sparse preconditioners.
  virtual std::optional<Eigen::SparseMatrix<Scalar>> sparse_matrix() const { return std::nullopt; }

protected:
  // Output vectors arrive sized; kernels overwrite every entry.
  virtual void apply(const Vec& x, Vec& y) const = 0;
  virtual void apply_adjoint(const Vec& y, Vec& x) const = 0;
  virtual bool apply_squared_adjoint(const Vec&, Vec&) const { return false; }
};

template <typename Scalar = double>
using OperatorPtr = std::shared_ptr<const LinearMap<Scalar>>;

template <typename Scalar = double>
class DenseMap final : public LinearMap<Scalar> {
public:
  using Vec = Vector<Scalar>;

  explicit DenseMap(Matrix<Scalar> m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.cols() == 0) throw ConfigurationError("dense operator is empty");
  }

  Index rows() const override { return m_.rows(); }
  Index cols() const override { return m_.cols(); }
  const Matrix<Scalar>& matrix() const { return m_; }

protected:
  void apply(const Vec& x, Vec& y) const override { y.noalias() = m_ * x; }
  void apply_adjoint(const Vec& y, Vec& x) const override { x.noalias() = m_.transpose() * y; }
  bool apply_squared_adjoint(const Vec& w, Vec& out) const override {
    out.noalias() = m_.cwiseAbs2().transpose() * w;
    return true;
  }

private:
  Matrix<Scalar> m_;
};

/// factor * base.
template <typename Scalar = double>
class ScaledMap final : public LinearMap<Scalar> {
public:
  using Vec = Vector<Scalar>;

  ScaledMap(OperatorPtr<Scalar> base, Scalar factor) : base_(std::move(base)), factor_(factor) {}

  Index rows() const override { return base_->rows(); }
  Index cols() const override { return base_->cols(); }
  std::optional<Eigen::SparseMatrix<Scalar>> sparse_matrix() const override {
    auto m = base_->sparse_matrix();
    if (m) *m *= factor_;
    return m;
  }

protected:
  void apply(const Vec& x, Vec& y) const override {
    base_->forward(x, y);
    y *= factor_;
  }
  void apply_adjoint(const Vec& y, Vec& x) const override {
    base_->adjoint(y, x);
    x *= factor_;
  }
  bool apply_squared_adjoint(const Vec& w, Vec& out) const override {
    auto d = base_->squared_adjoint(w);
    if (!d) return false;
    out = (factor_ * factor_) * *d;
    return true;
  }

private:
  OperatorPtr<Scalar> base_;
  Scalar factor_;
};

/// Explicit sparse matrix. A row-major copy of the transpose is kept so that
/// both directions are row-wise dot products, which parallelize without
/// changing the summation order.
template <typename Scalar = double>
class SparseMap : public LinearMap<Scalar> {
public:
  using Vec = Vector<Scalar>;
  using Sparse = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

  explicit SparseMap(Sparse m) : m_(std::move(m)) {
    m_.makeCompressed();
    mt_ = m_.transpose();
    mt_.makeCompressed();
  }

  Index rows() const override { return m_.rows(); }
  Index cols() const override { return m_.cols(); }
  const Sparse& matrix() const { return m_; }
  std::optional<Eigen::SparseMatrix<Scalar>> sparse_matrix() const override {
    return Eigen::SparseMatrix<Scalar>(m_);
  }

protected:
  void apply(const Vec& x, Vec& y) const override { row_products(m_, x, y); }
  void apply_adjoint(const Vec& y, Vec& x) const override { row_products(mt_, y, x); }
  bool apply_squared_adjoint(const Vec& w, Vec& out) const override {
    parallel_for(mt_.outerSize(), [&](Index r) {
      Scalar acc(0);
      for (typename Sparse::InnerIterator it(mt_, r); it; ++it) acc += it.value() * it.value() * w[it.col()];
      out[r] = acc;
    });
    return true;
  }

private:
  static void row_products(const Sparse& m, const Vec& in, Vec& out) {
    parallel_for(m.outerSize(), [&](Index r) {
      Scalar acc(0);
      for (typename Sparse::InnerIterator it(m, r); it; ++it) acc += it.value() * in[it.col()];
      out[r] = acc;
    });
  }

  Sparse m_;
  Sparse mt_;
};

}  // namespace tvn
