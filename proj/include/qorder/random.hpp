#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

#include "qorder/measures.hpp"
#include "qorder/subspace.hpp"

namespace qorder {

using Rng = std::mt19937_64;

/// Independent stream for sample `index` of a run seeded with `seed`.
inline Rng stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x71u};
  return Rng(seq);
}

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> n01;
  Eigen::MatrixXd g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = n01(rng);
  return g;
}

inline Eigen::VectorXd random_unit_vector(Eigen::Index d, Rng& rng) {
  Eigen::VectorXd v = gaussian_matrix(d, 1, rng);
  while (v.norm() < 1e-12) v = gaussian_matrix(d, 1, rng);
  return v.normalized();
}

/// Haar-distributed k-dimensional subspace of R^d.
inline Subspaced random_subspace(Eigen::Index d, Eigen::Index k, Rng& rng) {
  for (;;) {
    Subspaced s = span(gaussian_matrix(d, k, rng));
    if (s.dim() == k) return s;
  }
}

/// Subspace of uniformly drawn dimension in [0, d].
inline Subspaced random_subspace(Eigen::Index d, Rng& rng) {
  std::uniform_int_distribution<Eigen::Index> k(0, d);
  return random_subspace(d, k(rng), rng);
}

/// Random k-dimensional subspace of `host`.
inline Subspaced random_subspace_of(const Subspaced& host, Eigen::Index k, Rng& rng) {
  if (k == 0) return Subspaced::zero(host.ambient_dim());
  return span((host.basis() * gaussian_matrix(host.dim(), k, rng)).eval());
}

/// T = G G^T / tr(G G^T) with G standard normal; full rank almost surely.
inline DensityOperatord random_density_operator(Eigen::Index d, Rng& rng) {
  const Eigen::MatrixXd g = gaussian_matrix(d, d, rng);
  Eigen::MatrixXd t = g * g.transpose();
  t /= t.trace();
  t = (t + t.transpose()) / 2.0;
  return DensityOperatord::from_matrix(t);
}

}  // namespace qorder
