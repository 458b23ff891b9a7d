#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qorder/measures.hpp"
#include "qorder/orders.hpp"
#include "qorder/subspace.hpp"

namespace qorder {

using SubspacePair = std::pair<Subspaced, Subspaced>;

/// A ~ B for every pair in `equivalences`, A < B for every pair in `stricts`.
struct RepresentationProblem {
  Eigen::Index dim = 0;
  std::vector<SubspacePair> equivalences;
  std::vector<SubspacePair> stricts;
  /// Adds {0} < H as the last strict constraint.
  bool include_normalization = false;

  /// The strict list the solver sees (normalization appended when requested).
  std::vector<SubspacePair> effective_stricts() const;
};

/// Throws PreconditionViolation / DimensionMismatch on malformed problems,
/// including an empty strict list and pairs listed as both strict and equivalent.
void validate(const RepresentationProblem& prob);

/**
 * lambda >= 0 with unit sum over the effective stricts, free c over the
 * equivalences, and M = sum lambda_i (Pi_B - Pi_A) + sum c_j (Pi_B' - Pi_A').
 * If M has no positive eigenvalue above tol, no density operator meets every
 * equivalence while giving every strict pair a margin above tol.
 */
struct InfeasibilityCertificate {
  Eigen::VectorXd lambda;
  Eigen::VectorXd c;
  Eigen::MatrixXd M;
  double lambda_max = 0;
};

struct SolverDiagnostics {
  int newton_steps = 0;
  int facial_reductions = 0;
  double barrier_t = 0;
  /// Optimal minimum strict margin found by the solver (before re-evaluation).
  double solver_margin = 0;
};

struct RepresentationResult {
  bool feasible = false;
  std::optional<DensityOperatord> T;
  /// Minimum strict margin of T, re-evaluated through mu.
  double margin = 0;
  std::optional<InfeasibilityCertificate> certificate;
  SolverDiagnostics diagnostics;
};

/// Default tolerance of synthesize / partial_representation.
inline constexpr double kDefaultSolveTol = 1e-6;

/**
 * Maximizes the minimum strict margin over density operators that satisfy the
 * equivalences. Feasible when the re-evaluated margin is at least tol;
 * Infeasible with a verified certificate otherwise. Throws Indeterminate when
 * neither outcome can be certified.
 */
RepresentationResult synthesize(const RepresentationProblem& prob, double tol = kDefaultSolveTol);

/**
 * Same optimization, but strict pairs only need a nonnegative margin (down to
 * -tol). An Infeasible result carries a certificate with lambda_max(M) <= -tol.
 */
RepresentationResult partial_representation(const RepresentationProblem& prob, double tol = kDefaultSolveTol);

/// Independent check: lambda >= 0, sum lambda = 1, M rebuilt from the projections, lambda_max(M) <= tol.
bool verify_certificate(const InfeasibilityCertificate& cert, const RepresentationProblem& prob, double tol);

/// Rebuilds sum lambda_i (Pi_B - Pi_A) + sum c_j (Pi_B' - Pi_A') from the problem.
Eigen::MatrixXd certificate_operator(const InfeasibilityCertificate& cert, const RepresentationProblem& prob);

enum class ProblemMode { Chain, AllPairs };

/**
 * Sorts `subspaces` with `order` into classes and emits constraints: Chain
 * links each member to its class representative and each class to the next;
 * AllPairs relates every pair.
 */
RepresentationProblem problem_from_order(const LikelihoodOrder& order, const std::vector<Subspaced>& subspaces,
                                         ProblemMode mode = ProblemMode::Chain);

/// Events of a finite sample space {0, ..., n-1}, as sorted index lists.
using Event = std::vector<std::size_t>;
using EventPair = std::pair<Event, Event>;

struct ClassicalProblem {
  std::size_t omega_size = 0;
  std::vector<EventPair> equivalences;
  std::vector<EventPair> stricts;
};

/// lambda and c as in the quantum certificate; `m` is the vector sum of indicator differences.
struct ClassicalCertificate {
  Eigen::VectorXd lambda;
  Eigen::VectorXd c;
  Eigen::VectorXd m;
  double max_entry = 0;
};

struct ClassicalResult {
  bool feasible = false;
  Eigen::VectorXd p;
  double margin = 0;
  std::optional<ClassicalCertificate> certificate;
  SolverDiagnostics diagnostics;
};

/// The diagonal restriction of synthesize: probability vectors on Omega.
ClassicalResult classical_represent(const ClassicalProblem& prob, double tol = kDefaultSolveTol);

bool verify_classical_certificate(const ClassicalCertificate& cert, const ClassicalProblem& prob, double tol);

/// 0/1 indicator of an event.
Eigen::VectorXd indicator(const Event& e, std::size_t omega_size);

}  // namespace qorder
