#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qorder/axioms.hpp"
#include "qorder/orders.hpp"
#include "qorder/representation.hpp"
#include "qorder/sphere.hpp"

namespace qorder {

/**
 * Score of equator lines as a function of their angle phi in [0, pi), measured
 * in the SphereFrame of the pole. Either the angle itself or a trigonometric
 * polynomial sum a_h sin(h phi) + b_h cos(h phi) with even h.
 */
class EquatorScore {
 public:
  struct Term {
    int harmonic;
    double sin_coef;
    double cos_coef;
  };

  static EquatorScore angle();
  static EquatorScore trig(std::vector<Term> terms);
  /// sin 2phi + sin(6 phi) / 2.
  static EquatorScore standard();

  bool is_angle() const { return angle_; }
  const std::vector<Term>& terms() const { return terms_; }

  double operator()(double phi) const;
  double derivative(double phi) const;

  /// max |f(phi + pi/2) + f(phi)| over a 720-point grid.
  double antisymmetry_defect() const;
  /// Sign changes of f' along a 720-point grid of [0, pi).
  int derivative_sign_changes() const;
  /// Both conditions the counterexample needs: antisymmetry within 1e-10 and more than 2 sign changes.
  bool valid_for_counterexample() const;

 private:
  bool angle_ = false;
  std::vector<Term> terms_;
};

/// Angle of the equator line through u, in [0, pi).
double equator_angle(const SphereFrame<double>& frame, const Eigen::Vector3d& u);

/**
 * Orders subspaces of R^3 by dimension; lines off the equator by |<p,u>|^2
 * above all equator lines, which compare by the score; planes by
 * ||Pi p||^2, where planes through p compare by the score of their
 * equator line and remaining ties are equivalent.
 */
class Example31Order final : public LikelihoodOrder {
 public:
  Example31Order(const Eigen::Vector3d& pole, EquatorScore score = EquatorScore::angle(), double eq_tol = kDefaultEqTol);

  Relation compare(const Subspaced& a, const Subspaced& b) const override;
  Eigen::Index ambient_dim() const override { return 3; }
  std::string_view kind() const override { return "example31"; }
  std::vector<Eigen::VectorXd> anchors() const override { return {frame_.pole()}; }

  const SphereFrame<double>& frame() const { return frame_; }
  const EquatorScore& score() const { return score_; }
  double eq_tol() const { return eq_tol_; }

 private:
  Relation compare_lines(const Eigen::Vector3d& u, const Eigen::Vector3d& v) const;
  SphereFrame<double> frame_;
  EquatorScore score_;
  double eq_tol_;
};

/**
 * The non-representable order: lines off the equator by |<p,u>|^2 above all
 * equator lines, equator lines by the score, planes by U <= V iff V^perp <= U^perp.
 * Throws PreconditionViolation when the score is not a valid counterexample score.
 */
class CounterexampleOrder final : public LikelihoodOrder {
 public:
  CounterexampleOrder(const Eigen::Vector3d& pole, EquatorScore score = EquatorScore::standard(),
                      double eq_tol = kDefaultEqTol);

  Relation compare(const Subspaced& a, const Subspaced& b) const override;
  Eigen::Index ambient_dim() const override { return 3; }
  std::string_view kind() const override { return "counter"; }
  std::vector<Eigen::VectorXd> anchors() const override { return {frame_.pole()}; }

  const SphereFrame<double>& frame() const { return frame_; }
  const EquatorScore& score() const { return score_; }
  double eq_tol() const { return eq_tol_; }

  Relation compare_lines(const Eigen::Vector3d& u, const Eigen::Vector3d& v) const;

 private:
  SphereFrame<double> frame_;
  EquatorScore score_;
  double eq_tol_;
};

inline Example31Order example31_order(const Eigen::Vector3d& p, EquatorScore score = EquatorScore::angle()) {
  return Example31Order(p, std::move(score));
}

inline CounterexampleOrder counterexample_order(const Eigen::Vector3d& p, EquatorScore score = EquatorScore::standard()) {
  return CounterexampleOrder(p, std::move(score));
}

/// Equator lines at phi_k = k pi / n (k < n).
std::vector<Subspaced> equator_lines(const SphereFrame<double>& frame, int n);

/**
 * The finite instance: {0}, n equator lines, one line off the equator and H,
 * ranked by the counterexample order and linked as a chain.
 */
RepresentationProblem counterexample_instance(const CounterexampleOrder& order, int n = 16);

struct Counter2Probe {
  Eigen::VectorXd x;
  double alpha = 0;
  double beta = 0;
  bool monotone = true;
};

/// Top eigenvector x of Pi_U T Pi_U in the plane U and whether sampled lines of U order by |<x, y>|.
Counter2Probe counter2_probe(const DensityOperatord& t, const Subspaced& u, int samples);

struct PureStateReport {
  AuditReport axioms;
  bool pole_equivalent_to_whole = false;
  bool nontrivial = false;
  std::size_t pairs_checked = 0;
  std::size_t disagreements = 0;

  bool premises() const { return axioms.total_violations() == 0 && pole_equivalent_to_whole && nontrivial; }
  bool conclusion() const { return pairs_checked > 0 && disagreements == 0; }
};

/// Premises of the pure-state theorem on samples, then agreement with ||Pi_A p||^2 on pairs whose gap is >= 1e-6.
PureStateReport pure_state_theorem_check(const LikelihoodOrder& order, const Eigen::VectorXd& p, Eigen::Index d,
                                         std::size_t samples, std::uint64_t seed = 0);

struct UniformReport {
  bool lines_equivalent = false;
  bool nontrivial = false;
  std::size_t pairs_checked = 0;
  std::size_t disagreements = 0;
};

/// If sampled lines are all equivalent and {0} < H, compares the order with dimension on sampled pairs.
UniformReport uniform_characterization_check(const LikelihoodOrder& order, Eigen::Index d, std::size_t samples,
                                             std::uint64_t seed = 0);

struct TripleCheck {
  /// Lines independent and each mu(u_i) within 1e-9 of the smallest eigenvalue.
  bool premise = false;
  /// ||T - I/d||_max <= 1e-6.
  bool uniform = false;
  bool holds() const { return !premise || uniform; }
};

TripleCheck triple_basis_check(const DensityOperatord& t, const std::vector<Eigen::VectorXd>& lines);

/**
 * Searches `samples` random line tuples for d independent lines that all
 * attain the minimum of mu over lines. Candidates come from the minimal
 * eigenspace of T and from Haar lines.
 */
std::optional<std::vector<Eigen::VectorXd>> find_equal_minimal_triple(const DensityOperatord& t, std::size_t samples,
                                                                      std::uint64_t seed = 0);

struct ClaimReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
};

/// For coplanar lines q <= r, the in-plane complements satisfy r' <= q'.
ClaimReport claim0_check(const LikelihoodOrder& order, Eigen::Index d, std::size_t samples, std::uint64_t seed = 0);

/// u ~ m (an equator line) and v ~ M (the pole) force u' ~ M and v' ~ m in span{u, v}.
ClaimReport mmtags_check(const LikelihoodOrder& order, const Eigen::VectorXd& p, std::size_t samples,
                         std::uint64_t seed = 0);

}  // namespace qorder
