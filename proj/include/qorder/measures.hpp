#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "qorder/errors.hpp"
#include "qorder/subspace.hpp"

namespace qorder {

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
/// Values of mu within this distance outside [0, 1] are clamped; farther ones are errors.
inline constexpr double kMeasureClampTol = 1e-10;

/**
 * Real symmetric positive-semidefinite operator with unit trace. It induces the
 * quantum probability measure mu(A) = tr(Pi_A T).
 */
template <typename Scalar>
class DensityOperator {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// Validates symmetry, positive semidefiniteness and trace; throws InvariantViolation.
  static DensityOperator from_matrix(Matrix mat) {
    if (mat.rows() != mat.cols() || mat.rows() == 0) throw InvariantViolation("density operator must be square and nonempty");
    const Scalar asym = (mat - mat.transpose()).cwiseAbs().maxCoeff();
    if (asym > Scalar(kSymmetryTol)) throw InvariantViolation("operator is not symmetric (max asymmetry " + std::to_string(double(asym)) + ")");
    mat = (mat + mat.transpose()) / Scalar(2);
    const Scalar tr = mat.trace();
    if (std::abs(tr - Scalar(1)) > Scalar(kTraceTol)) throw InvariantViolation("trace is " + std::to_string(double(tr)) + ", expected 1");
    const Scalar lmin = Eigen::SelfAdjointEigenSolver<Matrix>(mat, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lmin < -Scalar(kPsdTol)) throw InvariantViolation("smallest eigenvalue " + std::to_string(double(lmin)) + " is negative");
    return DensityOperator(std::move(mat));
  }

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }

  Vector eigenvalues() const { return Eigen::SelfAdjointEigenSolver<Matrix>(mat_, Eigen::EigenvaluesOnly).eigenvalues(); }

 private:
  explicit DensityOperator(Matrix m) : mat_(std::move(m)) {}
  Matrix mat_;
};

using DensityOperatord = DensityOperator<double>;

/// mu(A) = tr(Pi_A T).
template <typename Scalar>
Scalar mu(const DensityOperator<Scalar>& t, const Subspace<Scalar>& a) {
  if (t.dim() != a.ambient_dim())
    throw DimensionMismatch("operator on R^" + std::to_string(t.dim()) + " evaluated on a subspace of R^" +
                            std::to_string(a.ambient_dim()));
  if (a.is_zero()) return Scalar(0);
  const Scalar v = (a.basis().transpose() * t.matrix() * a.basis()).trace();
  if (v < -Scalar(kMeasureClampTol) || v > Scalar(1) + Scalar(kMeasureClampTol))
    throw InvariantViolation("measure value " + std::to_string(double(v)) + " outside [0, 1]");
  return std::clamp(v, Scalar(0), Scalar(1));
}

/// p p^T for a unit vector p; other nonzero inputs are normalized.
template <typename Derived>
DensityOperator<typename Derived::Scalar> pure_state(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  using Vector = typename DensityOperator<Scalar>::Vector;
  Vector v = p;
  const Scalar n = v.norm();
  if (n == Scalar(0)) throw PreconditionViolation("pure state of the zero vector");
  if (std::abs(n - Scalar(1)) > Scalar(1e-10)) v /= n;
  return DensityOperator<Scalar>::from_matrix(v * v.transpose());
}

/// The uniform measure I/d.
template <typename Scalar = double>
DensityOperator<Scalar> uniform(Eigen::Index d) {
  using Matrix = typename DensityOperator<Scalar>::Matrix;
  if (d < 1) throw PreconditionViolation("uniform measure needs d >= 1");
  return DensityOperator<Scalar>::from_matrix(Matrix::Identity(d, d) / Scalar(d));
}

/// Convex combination sum_i w_i T_i.
template <typename Scalar>
DensityOperator<Scalar> mixture(std::span<const Scalar> weights, std::span<const DensityOperator<Scalar>> parts) {
  if (weights.size() != parts.size() || parts.empty())
    throw PreconditionViolation("mixture needs one weight per part and at least one part");
  Scalar total = 0;
  for (Scalar w : weights) {
    if (w < Scalar(0)) throw PreconditionViolation("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - Scalar(1)) > Scalar(1e-10)) throw PreconditionViolation("mixture weights must sum to 1");
  const Eigen::Index d = parts.front().dim();
  typename DensityOperator<Scalar>::Matrix m = DensityOperator<Scalar>::Matrix::Zero(d, d);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].dim() != d) throw DimensionMismatch("mixture parts differ in dimension");
    m += weights[i] * parts[i].matrix();
  }
  m /= m.trace();
  return DensityOperator<Scalar>::from_matrix(std::move(m));
}

template <typename Scalar>
DensityOperator<Scalar> mixture(const std::vector<Scalar>& weights, const std::vector<DensityOperator<Scalar>>& parts) {
  return mixture(std::span<const Scalar>(weights), std::span<const DensityOperator<Scalar>>(parts));
}

/// Pure states are exactly the rank-one density operators.
template <typename Scalar>
bool is_pure(const DensityOperator<Scalar>& t, Scalar tol = Scalar(1e-9)) {
  return std::abs(t.eigenvalues().maxCoeff() - Scalar(1)) <= tol;
}

}  // namespace qorder
