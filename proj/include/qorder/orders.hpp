#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qorder/measures.hpp"
#include "qorder/subspace.hpp"

namespace qorder {

/// Default equivalence tolerance of measure-based comparisons.
inline constexpr double kDefaultEqTol = 1e-9;

enum class Relation { Less, Equivalent, Greater };

constexpr Relation reversed(Relation r) {
  return r == Relation::Less ? Relation::Greater : r == Relation::Greater ? Relation::Less : Relation::Equivalent;
}

constexpr bool weakly_less(Relation r) { return r != Relation::Greater; }

std::string_view to_string(Relation r);

/// Three-way comparison of two reals with an equivalence band of width `tol`.
Relation compare_values(double a, double b, double tol);

/**
 * A complete comparison oracle over subspaces of R^d: compare(A, B) is Less
 * when A is strictly less likely than B.
 */
class LikelihoodOrder {
 public:
  virtual ~LikelihoodOrder() = default;

  virtual Relation compare(const Subspaced& a, const Subspaced& b) const = 0;
  virtual Eigen::Index ambient_dim() const = 0;
  virtual std::string_view kind() const = 0;

  /// Subspaces the order is defined on, when it is finitely presented.
  virtual const std::vector<Subspaced>* carrier() const { return nullptr; }

  /// False when the order carries no topology (finite presentations).
  virtual bool continuous_domain() const { return carrier() == nullptr; }

  /// Directions the order singles out (a pole, say). Audits draw part of
  /// their samples relative to these, since generic subspaces miss them.
  virtual std::vector<Eigen::VectorXd> anchors() const { return {}; }
};

/// A <= B iff mu(A) <= mu(B), with ties inside eq_tol.
class MeasureOrder final : public LikelihoodOrder {
 public:
  MeasureOrder(DensityOperatord t, double eq_tol = kDefaultEqTol);

  Relation compare(const Subspaced& a, const Subspaced& b) const override;
  Eigen::Index ambient_dim() const override { return t_.dim(); }
  std::string_view kind() const override { return "measure"; }

  const DensityOperatord& density() const { return t_; }
  double eq_tol() const { return eq_tol_; }

 private:
  DensityOperatord t_;
  double eq_tol_;
};

/// Compare by mu_1, break mu_1-ties by mu_2.
class LexicographicOrder final : public LikelihoodOrder {
 public:
  LexicographicOrder(DensityOperatord primary, DensityOperatord secondary, double eq_tol = kDefaultEqTol);

  Relation compare(const Subspaced& a, const Subspaced& b) const override;
  Eigen::Index ambient_dim() const override { return primary_.dim(); }
  std::string_view kind() const override { return "lex"; }

  const DensityOperatord& primary() const { return primary_; }
  const DensityOperatord& secondary() const { return secondary_; }
  double eq_tol() const { return eq_tol_; }

 private:
  DensityOperatord primary_, secondary_;
  double eq_tol_;
};

/// An order presented by ranked equivalence classes (lowest first).
class FiniteOrder final : public LikelihoodOrder {
 public:
  explicit FiniteOrder(std::vector<std::vector<Subspaced>> ranked_classes);

  Relation compare(const Subspaced& a, const Subspaced& b) const override;
  Eigen::Index ambient_dim() const override { return dim_; }
  std::string_view kind() const override { return "finite"; }
  const std::vector<Subspaced>* carrier() const override { return &members_; }

  const std::vector<std::vector<Subspaced>>& classes() const { return classes_; }
  /// Class index of `a`; throws UnlistedSubspace.
  std::size_t rank_of(const Subspaced& a) const;

 private:
  std::vector<std::vector<Subspaced>> classes_;
  std::vector<Subspaced> members_;
  std::vector<std::size_t> member_rank_;
  Eigen::Index dim_ = 0;
};

inline MeasureOrder order_from_measure(DensityOperatord t, double eq_tol = kDefaultEqTol) {
  return MeasureOrder(std::move(t), eq_tol);
}

/// Throws PreconditionViolation when the two operators coincide.
inline LexicographicOrder lexicographic_order(DensityOperatord t1, DensityOperatord t2, double eq_tol = kDefaultEqTol) {
  return LexicographicOrder(std::move(t1), std::move(t2), eq_tol);
}

inline FiniteOrder finite_order(std::vector<std::vector<Subspaced>> ranked_classes) {
  return FiniteOrder(std::move(ranked_classes));
}

/// Which defect of the strict lower set L(B) = {X : X < B} a witness exhibits.
enum class WitnessSide {
  /// A_k < B for every k while A is not < B: L(B) is not closed at A.
  LimitOutside,
  /// A < B while no A_k is < B: L(B) is not open at A (lower semi-continuity fails).
  LimitInside,
};

/**
 * Searches for A_k -> A with hausdorff(A_k, A) <= shrink^k (k = 1..steps) that
 * exhibits a discontinuity of the order at A relative to B. Candidate
 * sequences rotate basis vectors of A towards A^perp and along coordinate
 * planes. Returns std::nullopt when no candidate works; throws
 * PreconditionViolation for finitely presented orders.
 */
std::optional<std::vector<Subspaced>> continuity_witness(const LikelihoodOrder& order, const Subspaced& b,
                                                         const Subspaced& a, double shrink, int steps,
                                                         WitnessSide side = WitnessSide::LimitOutside);

}  // namespace qorder
