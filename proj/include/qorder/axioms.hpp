#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qorder/orders.hpp"
#include "qorder/random.hpp"

namespace qorder {

/// Outcome of one axiom instance. Relations are listed premises first.
struct CheckResult {
  bool pass = true;
  bool applicable = true;
  std::vector<Relation> relations;
};

/// Requires C orthogonal to A and to B. Pass iff A vs B equals A+C vs B+C.
CheckResult check_definetti(const LikelihoodOrder& order, const Subspaced& a, const Subspaced& b, const Subspaced& c);

/// A < B must give B^perp <= A^perp, A ~ B must give B^perp ~ A^perp (and the mirror for A > B).
CheckResult check_negation(const LikelihoodOrder& order, const Subspaced& a, const Subspaced& b);

CheckResult check_monotonicity(const LikelihoodOrder& order, const Subspaced& a);

/**
 * Requires A1 perp A2 and B1 perp B2. When A_i <= B_i for both i the sum
 * A1+A2 must be <= B1+B2, strictly so if one premise is strict. The mirrored
 * premises are checked the same way; mixed premises are not applicable.
 */
CheckResult check_qualitative_additivity(const LikelihoodOrder& order, const Subspaced& a1, const Subspaced& a2,
                                         const Subspaced& b1, const Subspaced& b2);

/// Weighted families with sum_i w_i Pi_{lhs_i} = sum_i w_i Pi_{rhs_i}.
struct CancelationInstance {
  std::vector<Subspaced> lhs;
  std::vector<Subspaced> rhs;
  std::vector<double> weights;
  std::string family;
};

/// Largest entry of sum_i w_i (Pi_{lhs_i} - Pi_{rhs_i}).
double cancelation_residual(const CancelationInstance& inst);

/// Throws InvariantViolation unless lengths agree, weights are positive and the residual is <= 1e-8.
void validate(const CancelationInstance& inst);

/**
 * Families: "bases" (two orthonormal bases of one subspace), "complements"
 * ({A, A^perp} against {B, B^perp}), "refinement" (a subspace against its
 * lines, with rational weights) and "reflexive" (A_i = B_i). Instance i is
 * drawn from stream(seed, i) and uses family i mod 4.
 */
std::vector<CancelationInstance> generate_cancelation_instances(Eigen::Index d, std::uint64_t seed, std::size_t count);

CancelationInstance random_cancelation_instance(Eigen::Index d, std::size_t family, Rng& rng);

/**
 * Applicable when every pair satisfies A_i <= B_i (or every pair A_i >= B_i,
 * read with the sides swapped). Fails when, in addition, some pair is strict.
 */
CheckResult check_cancelation(const LikelihoodOrder& order, const CancelationInstance& inst);

enum class Axiom { DeFinetti, Negation, Monotonicity, QualitativeAdditivity, Cancelation };
inline constexpr std::array<Axiom, 5> kAllAxioms{Axiom::DeFinetti, Axiom::Negation, Axiom::Monotonicity,
                                                  Axiom::QualitativeAdditivity, Axiom::Cancelation};
std::string_view to_string(Axiom a);

struct AxiomTally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t not_applicable = 0;
  /// Instances that left the carrier of a finite order.
  std::size_t skipped = 0;
};

struct ViolationWitness {
  Axiom axiom;
  std::uint64_t sample;
  std::vector<Subspaced> subspaces;
  std::vector<Relation> relations;
};

struct AuditReport {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  Eigen::Index dim = 0;
  std::array<AxiomTally, 5> tallies{};
  std::vector<ViolationWitness> witnesses;

  const AxiomTally& tally(Axiom a) const { return tallies[static_cast<std::size_t>(a)]; }
  std::size_t total_violations() const;
};

/**
 * Runs every checker once per sample. Sample i draws from stream(seed, i), so
 * the report does not depend on evaluation order. Orders with a carrier are
 * sampled from it; the others from Haar subspaces, half of them built around
 * the order's anchors. At most `max_witnesses` witnesses are kept per axiom.
 */
AuditReport audit(const LikelihoodOrder& order, Eigen::Index d, std::uint64_t seed, std::size_t samples,
                  std::size_t max_witnesses = 8);

}  // namespace qorder
