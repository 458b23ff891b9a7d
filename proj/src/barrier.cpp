#include "qorder/barrier.hpp"

#include <cmath>

#include "qorder/errors.hpp"

namespace qorder {

double BarrierProblem::nu() const {
  double n = static_cast<double>(h0.size());
  for (const auto& b : blocks) n += static_cast<double>(b.front().rows());
  return n;
}

namespace {

Eigen::MatrixXd block_at(const std::vector<Eigen::MatrixXd>& blk, const Eigen::VectorXd& z) {
  Eigen::MatrixXd f = blk[0];
  for (Eigen::Index k = 0; k < z.size(); ++k)
    if (z(k) != 0.0) f += z(k) * blk[static_cast<std::size_t>(k) + 1];
  return f;
}

/// -sum log det F_b - sum log h_i, or +inf outside the domain.
double barrier_value(const BarrierProblem& prob, const Eigen::VectorXd& z) {
  double v = 0;
  for (const auto& blk : prob.blocks) {
    Eigen::LLT<Eigen::MatrixXd> llt(block_at(blk, z));
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
    if ((diag.array() <= 0).any()) return std::numeric_limits<double>::infinity();
    v -= 2.0 * diag.array().log().sum();
  }
  if (prob.h0.size() > 0) {
    const Eigen::VectorXd h = prob.h0 + prob.H * z;
    if ((h.array() <= 0).any()) return std::numeric_limits<double>::infinity();
    v -= h.array().log().sum();
  }
  return v;
}

}  // namespace

bool strictly_feasible(const BarrierProblem& prob, const Eigen::VectorXd& z) {
  return std::isfinite(barrier_value(prob, z));
}

BarrierResult barrier_maximize(const BarrierProblem& prob, Eigen::VectorXd z, const BarrierOptions& opt) {
  const Eigen::Index n = prob.vars();
  if (z.size() != n) throw PreconditionViolation("barrier start has the wrong length");
  if (!strictly_feasible(prob, z)) throw PreconditionViolation("barrier start is not strictly feasible");
  const double nu = prob.nu();

  BarrierResult res;
  double t = opt.t0;

  for (int stage = 0; stage < opt.max_stages; ++stage) {
    for (int it = 0; it < opt.max_newton_per_stage; ++it) {
      Eigen::VectorXd g = -t * prob.c;
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
      for (const auto& blk : prob.blocks) {
        const Eigen::LLT<Eigen::MatrixXd> llt(block_at(blk, z));
        std::vector<Eigen::MatrixXd> a(static_cast<std::size_t>(n));
        for (Eigen::Index k = 0; k < n; ++k) {
          Eigen::MatrixXd m = llt.matrixL().solve(blk[static_cast<std::size_t>(k) + 1]);
          a[static_cast<std::size_t>(k)] = llt.matrixL().solve(m.transpose());
          g(k) -= a[static_cast<std::size_t>(k)].trace();
        }
        for (Eigen::Index k = 0; k < n; ++k)
          for (Eigen::Index l = 0; l <= k; ++l) {
            const double v = (a[static_cast<std::size_t>(k)].cwiseProduct(a[static_cast<std::size_t>(l)].transpose())).sum();
            hess(k, l) += v;
            if (l != k) hess(l, k) += v;
          }
      }
      if (prob.h0.size() > 0) {
        const Eigen::VectorXd inv = (prob.h0 + prob.H * z).cwiseInverse();
        g -= prob.H.transpose() * inv;
        hess += prob.H.transpose() * inv.cwiseAbs2().asDiagonal() * prob.H;
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd step = -ldlt.solve(g);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        const double reg = 1e-14 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
        step = -(hess + reg * Eigen::MatrixXd::Identity(n, n)).ldlt().solve(g);
      }
      const double decrement = -g.dot(step);
      ++res.newton_steps;
      if (!(decrement > 1e-18)) break;

      // Compare increments only: t c^T z dwarfs the barrier once t is large.
      const double b0 = barrier_value(prob, z);
      const double slope = -t * prob.c.dot(step);
      double s = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, s *= 0.5) {
        const Eigen::VectorXd cand = z + s * step;
        const double df = s * slope + (barrier_value(prob, cand) - b0);
        if (std::isfinite(df) && df <= -0.25 * s * decrement) {
          z = cand;
          moved = true;
          break;
        }
      }
      if (!moved || decrement / 2 <= 1e-12) break;
      if (prob.c.dot(z) >= opt.stop_above) break;
    }
    res.objective = prob.c.dot(z);
    if (res.objective >= opt.stop_above) {
      res.stopped_early = true;
      break;
    }
    if (nu / t <= opt.gap_tol) {
      res.converged = true;
      break;
    }
    t *= opt.t_factor;
  }

  res.z = z;
  res.t = t;
  res.objective = prob.c.dot(z);
  for (const auto& blk : prob.blocks) res.block_duals.push_back(block_at(blk, z).inverse() / t);
  if (prob.h0.size() > 0) res.row_duals = (prob.h0 + prob.H * z).cwiseInverse() / t;
  return res;
}

}  // namespace qorder
