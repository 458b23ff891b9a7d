#pragma once

// Independent oracles. None of them calls the library routine they check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

/// Rank as the number of Gram eigenvalues above a relative threshold.
inline int gram_rank(const Eigen::MatrixXd& vectors) {
  if (vectors.cols() == 0) return 0;
  const Eigen::MatrixXd g = vectors.transpose() * vectors;
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  return static_cast<int>((ev.array() > 1e-12 * std::max(top, 1.0)).count());
}

/// Modified Gram-Schmidt on the columns, dropping dependent ones.
inline Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& g) {
  std::vector<Eigen::VectorXd> q;
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    Eigen::VectorXd v = g.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : q) v -= u.dot(v) * u;
    if (v.norm() > 1e-9) q.push_back(v.normalized());
  }
  Eigen::MatrixXd out(g.rows(), static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = q[i];
  return out;
}

/// A ∩ B from generators: x = GA a = GB b, i.e. the null space of [GA, -GB].
inline Eigen::MatrixXd intersection_by_nullspace(const Eigen::MatrixXd& ga, const Eigen::MatrixXd& gb) {
  Eigen::MatrixXd stacked(ga.rows(), ga.cols() + gb.cols());
  stacked << ga, -gb;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > 1e-9 * std::max(1.0, sv(0))) ++r;
  const Eigen::MatrixXd null = svd.matrixV().rightCols(stacked.cols() - r);
  return gram_schmidt(ga * null.topRows(ga.cols()));
}

/// min over the unit ball of span(q) of |x - y|, by projected gradient in coordinates.
inline double ball_distance(const Eigen::MatrixXd& q, const Eigen::VectorXd& x) {
  if (q.cols() == 0) return x.norm();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(q.cols());
  for (int it = 0; it < 200; ++it) {
    u -= 0.5 * q.transpose() * (q * u - x);
    if (u.norm() > 1) u.normalize();
  }
  return (x - q * u).norm();
}

/// Uniform point of the unit ball of span(q).
inline Eigen::VectorXd ball_point(const Eigen::MatrixXd& q, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::VectorXd c(q.cols());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = n(rng);
  c *= std::pow(u(rng), 1.0 / double(c.size())) / c.norm();
  return q * c;
}

/// sup over sampled x in ball(A) of dist(x, ball(B)), refined by a local random search.
inline double one_sided(const Eigen::MatrixXd& qa, const Eigen::MatrixXd& qb, int samples, std::mt19937_64& rng) {
  if (qa.cols() == 0) return 0;
  double best = -1;
  Eigen::VectorXd arg;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = ball_point(qa, rng);
    const double v = ball_distance(qb, x);
    if (v > best) best = v, arg = x;
  }
  std::normal_distribution<double> n;
  double step = 0.1;
  for (int it = 0; it < 400; ++it, step *= 0.985) {
    Eigen::VectorXd c = qa.transpose() * arg;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) += step * n(rng);
    if (c.norm() > 1) c.normalize();
    const Eigen::VectorXd x = qa * c;
    const double v = ball_distance(qb, x);
    if (v > best) best = v, arg = x;
  }
  return best;
}

inline double hausdorff_by_sampling(const Eigen::MatrixXd& ga, const Eigen::MatrixXd& gb, int samples,
                                    std::mt19937_64& rng) {
  const Eigen::MatrixXd qa = gram_schmidt(ga), qb = gram_schmidt(gb);
  return std::max(one_sided(qa, qb, samples, rng), one_sided(qb, qa, samples, rng));
}

inline Eigen::MatrixXd gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

/// Ranking of all subsets of {0..4} by bitmask value with {0} and {1} swapped.
inline std::vector<unsigned> violating_ranking() {
  std::vector<unsigned> r(32);
  for (unsigned m = 0; m < 32; ++m) r[m] = m;
  std::swap(r[1], r[2]);
  return r;
}

/// Brute-force search for 1_a1 + 1_a2 = 1_b1 + 1_b2 with a1 < b1 and a2 <= b2.
inline bool has_cancelation_violation(const std::vector<unsigned>& rank) {
  std::vector<int> pos(32);
  for (int i = 0; i < 32; ++i) pos[rank[static_cast<std::size_t>(i)]] = i;
  for (unsigned a1 = 0; a1 < 32; ++a1)
    for (unsigned b1 = 0; b1 < 32; ++b1) {
      if (pos[a1] >= pos[b1]) continue;
      for (unsigned a2 = 0; a2 < 32; ++a2)
        for (unsigned b2 = 0; b2 < 32; ++b2) {
          bool same = true;
          for (int e = 0; e < 5 && same; ++e)
            same = ((a1 >> e) & 1) + ((a2 >> e) & 1) == ((b1 >> e) & 1) + ((b2 >> e) & 1);
          if (same && pos[a2] <= pos[b2]) return true;
        }
    }
  return false;
}

}  // namespace oracle
