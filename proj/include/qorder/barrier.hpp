#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace qorder {

/**
 * maximize c^T z
 * subject to  F_b(z) = F_b[0] + sum_k z_k F_b[k+1]  positive definite, for every block b,
 *             h0 + H z > 0 (entrywise).
 *
 * Dense, small problems only (tens of variables).
 */
struct BarrierProblem {
  Eigen::VectorXd c;
  std::vector<std::vector<Eigen::MatrixXd>> blocks;
  Eigen::MatrixXd H;
  Eigen::VectorXd h0;

  Eigen::Index vars() const { return c.size(); }
  /// Barrier parameter: total block size plus number of rows.
  double nu() const;
};

struct BarrierOptions {
  double t0 = 1.0;
  double t_factor = 8.0;
  /// Stop once nu / t drops below this.
  double gap_tol = 1e-11;
  /// Stop as soon as the objective reaches this value.
  double stop_above = std::numeric_limits<double>::infinity();
  int max_newton_per_stage = 100;
  int max_stages = 80;
};

struct BarrierResult {
  Eigen::VectorXd z;
  double objective = 0;
  double t = 0;
  bool converged = false;
  bool stopped_early = false;
  int newton_steps = 0;
  /// Central-path dual estimates F_b(z)^{-1} / t and 1 / (t h_i(z)).
  std::vector<Eigen::MatrixXd> block_duals;
  Eigen::VectorXd row_duals;
};

/// Evaluates feasibility of z (all blocks positive definite, all rows positive).
bool strictly_feasible(const BarrierProblem& prob, const Eigen::VectorXd& z);

/// Throws PreconditionViolation unless z0 is strictly feasible.
BarrierResult barrier_maximize(const BarrierProblem& prob, Eigen::VectorXd z0, const BarrierOptions& opt = {});

}  // namespace qorder
