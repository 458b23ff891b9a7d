#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace qorder {

/// Rays of R^3 (unit, up to sign, canonically sorted) with their orthogonal pairs and triples.
struct KSInstance {
  std::vector<Eigen::Vector3d> rays;
  std::vector<std::array<std::size_t, 2>> pairs;
  std::vector<std::array<std::size_t, 3>> triples;
};

/**
 * Normalizes, fixes the sign (first clearly nonzero coordinate positive),
 * merges parallel rays and sorts them, then lists every orthogonal pair and
 * triple within tol. Throws PreconditionViolation on empty input or zero rays.
 */
KSInstance ks_build(const std::vector<Eigen::Vector3d>& rays, double tol = 1e-9);

struct KSSearch {
  /// green[i] for every ray, when a coloring exists.
  std::optional<std::vector<bool>> coloring;
  std::uint64_t nodes = 0;
  std::uint64_t backtracks = 0;
};

/**
 * Exhaustive backtracking for a green/red assignment with exactly one green
 * ray per orthogonal triple and at most one per orthogonal pair. Rays are
 * branched in index order, green first, so the result is canonical.
 */
KSSearch ks_color(const KSInstance& inst);

bool verify_coloring(const KSInstance& inst, const std::vector<bool>& green);

}  // namespace qorder
