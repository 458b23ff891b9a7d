#include "qorder/axioms.hpp"

#include <algorithm>
#include <functional>

namespace qorder {

namespace {

void require_orthogonal(const Subspaced& x, const Subspaced& y, const char* what) {
  if (!is_orthogonal(x, y)) throw PreconditionViolation(std::string(what) + " must be orthogonal");
}

}  // namespace

CheckResult check_definetti(const LikelihoodOrder& order, const Subspaced& a, const Subspaced& b, const Subspaced& c) {
  require_orthogonal(a, c, "A and C");
  require_orthogonal(b, c, "B and C");
  const Relation before = order.compare(a, b);
  const Relation after = order.compare(sum(a, c), sum(b, c));
  return {before == after, true, {before, after}};
}

CheckResult check_negation(const LikelihoodOrder& order, const Subspaced& a, const Subspaced& b) {
  const Relation r = order.compare(a, b);
  const Relation n = order.compare(complement(b), complement(a));
  bool pass = true;
  if (r == Relation::Less) pass = n != Relation::Greater;
  if (r == Relation::Equivalent) pass = n == Relation::Equivalent;
  if (r == Relation::Greater) pass = n != Relation::Less;
  return {pass, true, {r, n}};
}

CheckResult check_monotonicity(const LikelihoodOrder& order, const Subspaced& a) {
  const Relation r = order.compare(Subspaced::zero(a.ambient_dim()), a);
  return {weakly_less(r), true, {r}};
}

CheckResult check_qualitative_additivity(const LikelihoodOrder& order, const Subspaced& a1, const Subspaced& a2,
                                         const Subspaced& b1, const Subspaced& b2) {
  require_orthogonal(a1, a2, "A1 and A2");
  require_orthogonal(b1, b2, "B1 and B2");
  const Relation r1 = order.compare(a1, b1);
  const Relation r2 = order.compare(a2, b2);
  const bool below = weakly_less(r1) && weakly_less(r2);
  const bool above = r1 != Relation::Less && r2 != Relation::Less;
  if (!below && !above) return {true, false, {r1, r2}};
  const Relation c = order.compare(sum(a1, a2), sum(b1, b2));
  bool pass = true;
  if (below) {
    const bool strict = r1 == Relation::Less || r2 == Relation::Less;
    pass = pass && weakly_less(c) && (!strict || c == Relation::Less);
  }
  if (above) {
    const bool strict = r1 == Relation::Greater || r2 == Relation::Greater;
    pass = pass && c != Relation::Less && (!strict || c == Relation::Greater);
  }
  return {pass, true, {r1, r2, c}};
}

double cancelation_residual(const CancelationInstance& inst) {
  if (inst.lhs.empty()) return 0.0;
  const Eigen::Index d = inst.lhs.front().ambient_dim();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < inst.lhs.size(); ++i)
    acc += inst.weights[i] * (inst.lhs[i].projection() - inst.rhs[i].projection());
  return acc.cwiseAbs().maxCoeff();
}

void validate(const CancelationInstance& inst) {
  if (inst.lhs.size() != inst.rhs.size() || inst.lhs.size() != inst.weights.size())
    throw InvariantViolation("cancelation instance needs equally many lhs, rhs and weights");
  if (inst.lhs.empty()) throw InvariantViolation("cancelation instance is empty");
  const Eigen::Index d = inst.lhs.front().ambient_dim();
  for (std::size_t i = 0; i < inst.lhs.size(); ++i) {
    if (inst.lhs[i].ambient_dim() != d || inst.rhs[i].ambient_dim() != d)
      throw DimensionMismatch("cancelation instance mixes ambient dimensions");
    if (!(inst.weights[i] > 0)) throw InvariantViolation("cancelation weights must be positive");
  }
  const double res = cancelation_residual(inst);
  if (res > 1e-8) throw InvariantViolation("projection sums differ by " + std::to_string(res));
}

CancelationInstance random_cancelation_instance(Eigen::Index d, std::size_t family, Rng& rng) {
  std::uniform_int_distribution<Eigen::Index> dim_pick(1, d);
  std::uniform_int_distribution<int> num(1, 5);
  CancelationInstance inst;
  switch (family % 4) {
    case 0: {
      const Subspaced s = random_subspace(d, dim_pick(rng), rng);
      const Eigen::MatrixXd q1 = s.basis() * Eigen::MatrixXd(random_subspace(s.dim(), s.dim(), rng).basis());
      const Eigen::MatrixXd q2 = s.basis() * Eigen::MatrixXd(random_subspace(s.dim(), s.dim(), rng).basis());
      for (Eigen::Index i = 0; i < s.dim(); ++i) {
        inst.lhs.push_back(line(q1.col(i)));
        inst.rhs.push_back(line(q2.col(i)));
        inst.weights.push_back(1.0);
      }
      inst.family = "bases";
      break;
    }
    case 1: {
      const Subspaced a = random_subspace(d, rng), b = random_subspace(d, rng);
      inst.lhs = {a, complement(a)};
      inst.rhs = {b, complement(b)};
      inst.weights = {1.0, 1.0};
      inst.family = "complements";
      break;
    }
    case 2: {
      const Subspaced s = random_subspace(d, dim_pick(rng), rng);
      const double w = double(num(rng)) / double(num(rng));
      inst.lhs.push_back(s);
      for (Eigen::Index i = 1; i < s.dim(); ++i) inst.lhs.push_back(Subspaced::zero(d));
      for (Eigen::Index i = 0; i < s.dim(); ++i) {
        inst.rhs.push_back(line(s.basis().col(i)));
        inst.weights.push_back(w);
      }
      const Subspaced x = random_subspace(d, rng);
      inst.lhs.push_back(x);
      inst.rhs.push_back(x);
      inst.weights.push_back(double(num(rng)) / double(num(rng)));
      if (std::bernoulli_distribution(0.5)(rng)) std::swap(inst.lhs, inst.rhs);
      inst.family = "refinement";
      break;
    }
    default: {
      const int n = num(rng);
      for (int i = 0; i < n; ++i) {
        const Subspaced x = random_subspace(d, rng);
        inst.lhs.push_back(x);
        inst.rhs.push_back(x);
        inst.weights.push_back(double(num(rng)));
      }
      inst.family = "reflexive";
      break;
    }
  }
  return inst;
}

std::vector<CancelationInstance> generate_cancelation_instances(Eigen::Index d, std::uint64_t seed, std::size_t count) {
  if (d < 2) throw PreconditionViolation("cancelation instances need d >= 2");
  std::vector<CancelationInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = stream(seed, i);
    out.push_back(random_cancelation_instance(d, i, rng));
  }
  return out;
}

CheckResult check_cancelation(const LikelihoodOrder& order, const CancelationInstance& inst) {
  validate(inst);
  CheckResult res;
  bool below = true, above = true, any_less = false, any_greater = false;
  for (std::size_t i = 0; i < inst.lhs.size(); ++i) {
    const Relation r = order.compare(inst.lhs[i], inst.rhs[i]);
    res.relations.push_back(r);
    below = below && weakly_less(r);
    above = above && r != Relation::Less;
    any_less = any_less || r == Relation::Less;
    any_greater = any_greater || r == Relation::Greater;
  }
  res.applicable = below || above;
  res.pass = !(below && any_less) && !(above && any_greater);
  return res;
}

std::string_view to_string(Axiom a) {
  switch (a) {
    case Axiom::DeFinetti: return "de_finetti";
    case Axiom::Negation: return "negation";
    case Axiom::Monotonicity: return "monotonicity";
    case Axiom::QualitativeAdditivity: return "qualitative_additivity";
    case Axiom::Cancelation: return "cancelation";
  }
  return "?";
}

std::size_t AuditReport::total_violations() const {
  std::size_t n = 0;
  for (const auto& t : tallies) n += t.violations;
  return n;
}

namespace {

/// Draws the subspaces of one audit sample.
class Sampler {
 public:
  Sampler(const LikelihoodOrder& order, Eigen::Index d, Rng& rng)
      : d_(d), rng_(rng), carrier_(order.carrier()), anchors_(order.anchors()) {}

  bool finite() const { return carrier_ != nullptr; }

  Subspaced any() { return finite() ? pick() : inside(Subspaced::full(d_)); }

  /// Random subspace of `host` of uniformly drawn dimension.
  Subspaced inside(const Subspaced& host) {
    if (finite()) return pick();
    std::uniform_int_distribution<Eigen::Index> k(0, host.dim());
    return inside(host, k(rng_));
  }

  Subspaced inside(const Subspaced& host, Eigen::Index k) {
    if (finite()) return pick();
    if (!anchors_.empty() && k > 0 && std::bernoulli_distribution(0.5)(rng_)) {
      std::uniform_int_distribution<std::size_t> which(0, anchors_.size() - 1);
      const Eigen::VectorXd a = host.project(anchors_[which(rng_)]);
      if (a.norm() > 1e-9) {
        const Subspaced rest = intersect(host, complement(line(a)));
        if (std::bernoulli_distribution(0.5)(rng_)) return sum(line(a), random_subspace_of(rest, k - 1, rng_));
        return random_subspace_of(rest, std::min(k, rest.dim()), rng_);
      }
    }
    return random_subspace_of(host, k, rng_);
  }

  Rng& rng() { return rng_; }

 private:
  Subspaced pick() {
    std::uniform_int_distribution<std::size_t> i(0, carrier_->size() - 1);
    return (*carrier_)[i(rng_)];
  }

  Eigen::Index d_;
  Rng& rng_;
  const std::vector<Subspaced>* carrier_;
  std::vector<Eigen::VectorXd> anchors_;
};

}  // namespace

AuditReport audit(const LikelihoodOrder& order, Eigen::Index d, std::uint64_t seed, std::size_t samples,
                  std::size_t max_witnesses) {
  if (samples < 1) throw PreconditionViolation("audit needs at least one sample");
  if (order.ambient_dim() != d)
    throw DimensionMismatch("order lives in R^" + std::to_string(order.ambient_dim()) + ", audit asked for R^" +
                            std::to_string(d));
  AuditReport rep;
  rep.seed = seed;
  rep.samples = samples;
  rep.dim = d;
  std::array<std::size_t, 5> kept{};

  const auto record = [&](Axiom ax, std::uint64_t idx, const std::function<std::pair<CheckResult, std::vector<Subspaced>>()>& run) {
    AxiomTally& t = rep.tallies[static_cast<std::size_t>(ax)];
    try {
      auto [res, subs] = run();
      if (!res.applicable) {
        ++t.not_applicable;
        return;
      }
      ++t.checked;
      if (res.pass) return;
      ++t.violations;
      if (kept[static_cast<std::size_t>(ax)]++ < max_witnesses)
        rep.witnesses.push_back({ax, idx, std::move(subs), std::move(res.relations)});
    } catch (const UnlistedSubspace&) {
      ++t.skipped;
    } catch (const PreconditionViolation&) {
      // Carrier draws that miss an orthogonality premise.
      if (order.carrier() == nullptr) throw;
      ++t.skipped;
    }
  };

  const Subspaced whole = Subspaced::full(d);
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = stream(seed, i);
    Sampler s(order, d, rng);

    record(Axiom::DeFinetti, i, [&] {
      std::uniform_int_distribution<Eigen::Index> kc(0, d - 1);
      const Subspaced c = s.finite() ? s.any() : s.inside(whole, kc(rng));
      const Subspaced host = complement(c);
      const Subspaced a = s.inside(host), b = s.inside(host);
      return std::pair{check_definetti(order, a, b, c), std::vector<Subspaced>{a, b, c}};
    });
    record(Axiom::Negation, i, [&] {
      const Subspaced a = s.any(), b = s.any();
      return std::pair{check_negation(order, a, b), std::vector<Subspaced>{a, b}};
    });
    record(Axiom::Monotonicity, i, [&] {
      const Subspaced a = s.any();
      return std::pair{check_monotonicity(order, a), std::vector<Subspaced>{a}};
    });
    record(Axiom::QualitativeAdditivity, i, [&] {
      const Subspaced a1 = s.any();
      const Subspaced a2 = s.inside(complement(a1));
      const Subspaced b1 = s.any();
      const Subspaced b2 = s.inside(complement(b1));
      return std::pair{check_qualitative_additivity(order, a1, a2, b1, b2), std::vector<Subspaced>{a1, a2, b1, b2}};
    });
    record(Axiom::Cancelation, i, [&] {
      CancelationInstance inst = random_cancelation_instance(d, i, rng);
      std::vector<Subspaced> subs = inst.lhs;
      subs.insert(subs.end(), inst.rhs.begin(), inst.rhs.end());
      return std::pair{check_cancelation(order, inst), std::move(subs)};
    });
  }
  return rep;
}

}  // namespace qorder
