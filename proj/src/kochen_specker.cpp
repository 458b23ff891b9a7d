#include "qorder/kochen_specker.hpp"

#include <algorithm>
#include <cmath>

#include "qorder/errors.hpp"

namespace qorder {

KSInstance ks_build(const std::vector<Eigen::Vector3d>& rays, double tol) {
  if (rays.empty()) throw PreconditionViolation("ray set is empty");
  std::vector<Eigen::Vector3d> unit;
  for (const auto& r : rays) {
    const double n = r.norm();
    if (n < 1e-12) throw PreconditionViolation("ray set contains the zero vector");
    Eigen::Vector3d u = r / n;
    for (int k = 0; k < 3; ++k)
      if (std::abs(u(k)) > 1e-9) {
        if (u(k) < 0) u = -u;
        break;
      }
    if (std::none_of(unit.begin(), unit.end(), [&](const Eigen::Vector3d& v) { return std::abs(v.dot(u)) >= 1 - 1e-9; }))
      unit.push_back(u);
  }
  std::sort(unit.begin(), unit.end(), [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
  });

  KSInstance inst;
  inst.rays = unit;
  const std::size_t n = unit.size();
  std::vector<std::vector<bool>> orth(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(unit[i].dot(unit[j])) <= tol) {
        orth[i][j] = orth[j][i] = true;
        inst.pairs.push_back({i, j});
      }
  for (const auto& [i, j] : inst.pairs)
    for (std::size_t k = j + 1; k < n; ++k)
      if (orth[i][k] && orth[j][k]) inst.triples.push_back({i, j, k});
  return inst;
}

namespace {

class Colorer {
 public:
  explicit Colorer(const KSInstance& inst) : inst_(inst), n_(inst.rays.size()), state_(n_, kFree) {
    nbr_.resize(n_);
    for (const auto& [i, j] : inst.pairs) {
      nbr_[i].push_back(j);
      nbr_[j].push_back(i);
    }
    in_triple_.resize(n_);
    for (std::size_t t = 0; t < inst.triples.size(); ++t)
      for (std::size_t v : inst.triples[t]) in_triple_[v].push_back(t);
  }

  KSSearch run() {
    KSSearch out;
    if (search(out)) {
      std::vector<bool> green(n_);
      for (std::size_t i = 0; i < n_; ++i) green[i] = state_[i] == kGreen;
      out.coloring = std::move(green);
    }
    return out;
  }

 private:
  static constexpr int kFree = -1, kRed = 0, kGreen = 1;

  /// Assigns and propagates; false on conflict. Every change goes on the trail.
  bool assign(std::size_t v, int color) {
    std::vector<std::pair<std::size_t, int>> queue{{v, color}};
    while (!queue.empty()) {
      const auto [x, c] = queue.back();
      queue.pop_back();
      if (state_[x] != kFree) {
        if (state_[x] != c) return false;
        continue;
      }
      state_[x] = c;
      trail_.push_back(x);
      if (c == kGreen)
        for (std::size_t y : nbr_[x]) queue.emplace_back(y, kRed);
      for (std::size_t t : in_triple_[x]) {
        int reds = 0, greens = 0;
        std::size_t open = n_;
        for (std::size_t y : inst_.triples[t]) {
          if (state_[y] == kRed) ++reds;
          else if (state_[y] == kGreen) ++greens;
          else open = y;
        }
        if (greens == 0 && reds == 3) return false;
        if (greens == 0 && reds == 2) queue.emplace_back(open, kGreen);
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      state_[trail_.back()] = kFree;
      trail_.pop_back();
    }
  }

  bool search(KSSearch& stats) {
    ++stats.nodes;
    std::size_t v = 0;
    while (v < n_ && state_[v] != kFree) ++v;
    if (v == n_) return true;
    for (int color : {kGreen, kRed}) {
      const std::size_t mark = trail_.size();
      if (assign(v, color) && search(stats)) return true;
      undo(mark);
      ++stats.backtracks;
    }
    return false;
  }

  const KSInstance& inst_;
  std::size_t n_;
  std::vector<int> state_;
  std::vector<std::vector<std::size_t>> nbr_;
  std::vector<std::vector<std::size_t>> in_triple_;
  std::vector<std::size_t> trail_;
};

}  // namespace

KSSearch ks_color(const KSInstance& inst) { return Colorer(inst).run(); }

bool verify_coloring(const KSInstance& inst, const std::vector<bool>& green) {
  if (green.size() != inst.rays.size()) return false;
  for (const auto& [i, j] : inst.pairs)
    if (green[i] && green[j]) return false;
  for (const auto& t : inst.triples)
    if (int(green[t[0]]) + int(green[t[1]]) + int(green[t[2]]) != 1) return false;
  return true;
}

}  // namespace qorder
