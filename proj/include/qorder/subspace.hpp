#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "qorder/errors.hpp"

namespace qorder {

/// Relative singular-value threshold used for every rank decision.
inline constexpr double kRankTol = 1e-10;
/// Tolerance on orthonormality / idempotence of stored bases.
inline constexpr double kBasisTol = 1e-10;
/// Two subspaces are the same value when their Hausdorff distance is below this.
inline constexpr double kSubspaceEqTol = 1e-9;

/**
 * A linear subspace of R^d held as an orthonormal basis (columns of a d x k
 * matrix) together with its orthogonal projection.
 *
 * Values are immutable; the projection is computed on construction, so a
 * Subspace can be shared between threads freely.
 */
template <typename Scalar>
class Subspace {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// {0} inside R^d.
  static Subspace zero(Eigen::Index d) { return Subspace(Matrix(d, 0)); }

  /// The whole space R^d.
  static Subspace full(Eigen::Index d) { return Subspace(Matrix::Identity(d, d)); }

  /// Wraps columns that are already orthonormal; throws when they are not.
  static Subspace from_orthonormal(Matrix basis) {
    const Eigen::Index k = basis.cols();
    if (k > basis.rows()) throw InvariantViolation("more basis vectors than the ambient dimension");
    const Matrix gram = basis.transpose() * basis;
    if (k > 0 && (gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() > Scalar(kBasisTol))
      throw InvariantViolation("basis is not orthonormal");
    return Subspace(std::move(basis));
  }

  Eigen::Index ambient_dim() const { return basis_.rows(); }
  Eigen::Index dim() const { return basis_.cols(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_dim(); }

  const Matrix& basis() const { return basis_; }
  const Matrix& projection() const { return projection_; }

  /// Orthogonal projection of v onto the subspace.
  Vector project(const Eigen::Ref<const Vector>& v) const { return basis_ * (basis_.transpose() * v); }

  bool contains(const Eigen::Ref<const Vector>& v, Scalar tol = Scalar(1e-9)) const {
    return (v - project(v)).norm() <= tol * std::max(Scalar(1), v.norm());
  }

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {
    projection_ = basis_ * basis_.transpose();
  }

  Matrix basis_;
  Matrix projection_;
};

using Subspaced = Subspace<double>;

namespace detail {

template <typename Scalar>
void require_same_dim(const Subspace<Scalar>& a, const Subspace<Scalar>& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw DimensionMismatch("subspaces live in R^" + std::to_string(a.ambient_dim()) + " and R^" +
                            std::to_string(b.ambient_dim()));
}

}  // namespace detail

/// Span of the columns of `vectors` (d x n, n may be 0), with a rank decision
/// at kRankTol times the largest singular value.
template <typename Derived>
Subspace<typename Derived::Scalar> span(const Eigen::MatrixBase<Derived>& vectors) {
  using Scalar = typename Derived::Scalar;
  using Matrix = typename Subspace<Scalar>::Matrix;
  const Eigen::Index d = vectors.rows();
  if (vectors.cols() == 0 || vectors.cwiseAbs().maxCoeff() == Scalar(0)) return Subspace<Scalar>::zero(d);
  Eigen::JacobiSVD<Matrix> svd(vectors.eval(), Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const Scalar cutoff = Scalar(kRankTol) * sv(0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return Subspace<Scalar>::from_orthonormal(svd.matrixU().leftCols(rank));
}

/// Span of a list of vectors of equal length. An empty list needs `d`.
template <typename Scalar>
Subspace<Scalar> span(std::span<const typename Subspace<Scalar>::Vector> vectors, Eigen::Index d) {
  typename Subspace<Scalar>::Matrix m(d, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != d)
      throw DimensionMismatch("vector " + std::to_string(i) + " has length " + std::to_string(vectors[i].size()) +
                              ", expected " + std::to_string(d));
    m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return span(m);
}

template <typename Scalar>
Subspace<Scalar> span(const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& vectors) {
  if (vectors.empty()) throw PreconditionViolation("span of an empty list needs an explicit dimension");
  return span<Scalar>(std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(vectors), vectors.front().size());
}

/// A^perp, with projection I - Pi_A.
template <typename Scalar>
Subspace<Scalar> complement(const Subspace<Scalar>& a) {
  using Matrix = typename Subspace<Scalar>::Matrix;
  const Eigen::Index d = a.ambient_dim();
  if (a.is_zero()) return Subspace<Scalar>::full(d);
  if (a.is_full()) return Subspace<Scalar>::zero(d);
  Eigen::HouseholderQR<Matrix> qr(a.basis());
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  return Subspace<Scalar>::from_orthonormal(q.rightCols(d - a.dim()));
}

/// A + B.
template <typename Scalar>
Subspace<Scalar> sum(const Subspace<Scalar>& a, const Subspace<Scalar>& b) {
  detail::require_same_dim(a, b);
  typename Subspace<Scalar>::Matrix stacked(a.ambient_dim(), a.dim() + b.dim());
  stacked << a.basis(), b.basis();
  return span(stacked);
}

/// A ∩ B, computed as (A^perp + B^perp)^perp.
template <typename Scalar>
Subspace<Scalar> intersect(const Subspace<Scalar>& a, const Subspace<Scalar>& b) {
  detail::require_same_dim(a, b);
  return complement(sum(complement(a), complement(b)));
}

template <typename Scalar>
bool is_orthogonal(const Subspace<Scalar>& a, const Subspace<Scalar>& b, Scalar tol = Scalar(kBasisTol)) {
  detail::require_same_dim(a, b);
  if (a.is_zero() || b.is_zero()) return true;
  return (a.projection() * b.projection()).cwiseAbs().maxCoeff() <= tol;
}

/**
 * Hausdorff distance between the unit balls of A and B:
 * max(||(I - Pi_B) Pi_A||, ||(I - Pi_A) Pi_B||) in operator norm.
 * Subspaces of different dimension are at distance exactly 1.
 */
template <typename Scalar>
Scalar hausdorff(const Subspace<Scalar>& a, const Subspace<Scalar>& b) {
  using Matrix = typename Subspace<Scalar>::Matrix;
  detail::require_same_dim(a, b);
  if (a.dim() != b.dim()) return Scalar(1);
  if (a.is_zero() || a.is_full()) return Scalar(0);
  const Matrix ra = a.basis() - b.basis() * (b.basis().transpose() * a.basis());
  const Matrix rb = b.basis() - a.basis() * (a.basis().transpose() * b.basis());
  const Scalar da = Eigen::JacobiSVD<Matrix>(ra).singularValues()(0);
  const Scalar db = Eigen::JacobiSVD<Matrix>(rb).singularValues()(0);
  return std::clamp(std::max(da, db), Scalar(0), Scalar(1));
}

/// Value equality of subspaces (Hausdorff distance within `tol`).
template <typename Scalar>
bool approx_equal(const Subspace<Scalar>& a, const Subspace<Scalar>& b, Scalar tol = Scalar(kSubspaceEqTol)) {
  return a.ambient_dim() == b.ambient_dim() && a.dim() == b.dim() && hausdorff(a, b) <= tol;
}

/// Line spanned by a single nonzero vector.
template <typename Derived>
Subspace<typename Derived::Scalar> line(const Eigen::MatrixBase<Derived>& v) {
  auto s = span(v.eval());
  if (s.dim() != 1) throw PreconditionViolation("line through the zero vector");
  return s;
}

}  // namespace qorder
