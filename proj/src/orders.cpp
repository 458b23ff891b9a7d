#include "qorder/orders.hpp"

#include <cmath>

namespace qorder {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Less: return "less";
    case Relation::Equivalent: return "equivalent";
    case Relation::Greater: return "greater";
  }
  return "?";
}

Relation compare_values(double a, double b, double tol) {
  if (std::abs(a - b) <= tol) return Relation::Equivalent;
  return a < b ? Relation::Less : Relation::Greater;
}

MeasureOrder::MeasureOrder(DensityOperatord t, double eq_tol) : t_(std::move(t)), eq_tol_(eq_tol) {
  if (!(eq_tol > 0)) throw PreconditionViolation("eq_tol must be positive");
}

Relation MeasureOrder::compare(const Subspaced& a, const Subspaced& b) const {
  return compare_values(mu(t_, a), mu(t_, b), eq_tol_);
}

LexicographicOrder::LexicographicOrder(DensityOperatord primary, DensityOperatord secondary, double eq_tol)
    : primary_(std::move(primary)), secondary_(std::move(secondary)), eq_tol_(eq_tol) {
  if (!(eq_tol > 0)) throw PreconditionViolation("eq_tol must be positive");
  if (primary_.dim() != secondary_.dim()) throw DimensionMismatch("lexicographic order needs operators of equal dimension");
  if ((primary_.matrix() - secondary_.matrix()).cwiseAbs().maxCoeff() <= 1e-8)
    throw PreconditionViolation("lexicographic order needs two different measures");
}

Relation LexicographicOrder::compare(const Subspaced& a, const Subspaced& b) const {
  const Relation first = compare_values(mu(primary_, a), mu(primary_, b), eq_tol_);
  if (first != Relation::Equivalent) return first;
  return compare_values(mu(secondary_, a), mu(secondary_, b), eq_tol_);
}

FiniteOrder::FiniteOrder(std::vector<std::vector<Subspaced>> ranked_classes) : classes_(std::move(ranked_classes)) {
  if (classes_.empty()) throw PreconditionViolation("finite order needs at least one class");
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    if (classes_[c].empty()) throw PreconditionViolation("finite order class " + std::to_string(c) + " is empty");
    for (const auto& s : classes_[c]) {
      if (members_.empty()) dim_ = s.ambient_dim();
      if (s.ambient_dim() != dim_) throw DimensionMismatch("finite order mixes ambient dimensions");
      for (std::size_t i = 0; i < members_.size(); ++i) {
        if (member_rank_[i] != c && hausdorff(members_[i], s) <= 1e-6)
          throw PreconditionViolation("finite order classes " + std::to_string(member_rank_[i]) + " and " +
                                      std::to_string(c) + " overlap");
      }
      members_.push_back(s);
      member_rank_.push_back(c);
    }
  }
}

std::size_t FiniteOrder::rank_of(const Subspaced& a) const {
  if (a.ambient_dim() != dim_) throw DimensionMismatch("subspace dimension differs from the finite order");
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (approx_equal(members_[i], a)) return member_rank_[i];
  throw UnlistedSubspace("subspace of dimension " + std::to_string(a.dim()) + " is not in the finite order");
}

Relation FiniteOrder::compare(const Subspaced& a, const Subspaced& b) const {
  const std::size_t ra = rank_of(a), rb = rank_of(b);
  return ra == rb ? Relation::Equivalent : ra < rb ? Relation::Less : Relation::Greater;
}

namespace {

struct Rotation {
  Eigen::VectorXd from;  // unit vector of A
  Eigen::VectorXd to;    // unit vector of A^perp
};

/// A with `from` rotated by angle t towards `to`; the rest of A is kept.
Subspaced rotate_within(const Subspaced& a, const Rotation& rot, double t) {
  const Eigen::Index d = a.ambient_dim();
  Eigen::MatrixXd rest = a.basis() - rot.from * (rot.from.transpose() * a.basis());
  const Subspaced kept = span(rest);
  Eigen::MatrixXd cols(d, kept.dim() + 1);
  cols << kept.basis(), std::cos(t) * rot.from + std::sin(t) * rot.to;
  return span(cols);
}

std::vector<Rotation> candidate_rotations(const Subspaced& a) {
  const Eigen::Index d = a.ambient_dim();
  const Subspaced perp = complement(a);
  std::vector<Eigen::VectorXd> ins, outs;
  for (Eigen::Index i = 0; i < a.dim(); ++i) ins.push_back(a.basis().col(i));
  for (Eigen::Index i = 0; i < perp.dim(); ++i) outs.push_back(perp.basis().col(i));
  for (Eigen::Index m = 0; m < d; ++m) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(d, m);
    const Eigen::VectorXd pin = a.project(e), pout = perp.project(e);
    if (pin.norm() > 1e-6) ins.push_back(pin.normalized());
    if (pout.norm() > 1e-6) outs.push_back(pout.normalized());
  }
  std::vector<Rotation> rots;
  for (const auto& u : ins)
    for (const auto& w : outs) {
      rots.push_back({u, w});
      rots.push_back({u, -w});
    }
  return rots;
}

}  // namespace

std::optional<std::vector<Subspaced>> continuity_witness(const LikelihoodOrder& order, const Subspaced& b,
                                                         const Subspaced& a, double shrink, int steps,
                                                         WitnessSide side) {
  if (!order.continuous_domain())
    throw PreconditionViolation("continuity is undefined for finitely presented orders");
  if (!(shrink > 0 && shrink < 1) || steps < 1) throw PreconditionViolation("need shrink in (0,1) and steps >= 1");
  detail::require_same_dim(a, b);
  const bool base_less = order.compare(a, b) == Relation::Less;
  const bool want_less = side == WitnessSide::LimitOutside;
  if (base_less == want_less) return std::nullopt;
  if (a.is_zero() || a.is_full()) return std::nullopt;

  for (const Rotation& rot : candidate_rotations(a)) {
    std::vector<Subspaced> seq;
    double radius = 1.0;
    for (int k = 1; k <= steps; ++k) {
      radius *= shrink;
      Subspaced ak = rotate_within(a, rot, radius);
      if (ak.dim() != a.dim() || hausdorff(ak, a) > radius) break;
      if ((order.compare(ak, b) == Relation::Less) != want_less) break;
      seq.push_back(std::move(ak));
    }
    if (static_cast<int>(seq.size()) == steps) return seq;
  }
  return std::nullopt;
}

}  // namespace qorder
