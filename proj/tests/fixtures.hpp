#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qorder/random.hpp"
#include "qorder/orders.hpp"
#include "qorder/representation.hpp"

namespace fixtures {

/// Random T and 10 random subspaces whose distinct mu values are at least `gap` apart.
struct RoundTrip {
  qorder::DensityOperatord t;
  std::vector<qorder::Subspaced> subspaces;
  qorder::RepresentationProblem problem;
};

inline RoundTrip round_trip(Eigen::Index d, std::uint64_t seed, double gap = 1e-4,
                            qorder::ProblemMode mode = qorder::ProblemMode::Chain) {
  using namespace qorder;
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng = stream(seed, attempt);
    const DensityOperatord t = random_density_operator(d, rng);
    std::vector<Subspaced> subs;
    for (int i = 0; i < 10; ++i) subs.push_back(random_subspace(d, 1 + i % (d - 1), rng));
    bool ok = true;
    for (std::size_t i = 0; i < subs.size() && ok; ++i)
      for (std::size_t j = i + 1; j < subs.size() && ok; ++j) ok = std::abs(mu(t, subs[i]) - mu(t, subs[j])) >= gap;
    if (!ok) continue;
    RepresentationProblem prob = problem_from_order(order_from_measure(t), subs, mode);
    return {t, subs, prob};
  }
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fixtures
