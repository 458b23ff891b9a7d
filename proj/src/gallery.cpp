#include "qorder/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qorder {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kScoreGrid = 720;

Relation by_dim(const Subspaced& a, const Subspaced& b) {
  return a.dim() == b.dim() ? Relation::Equivalent : a.dim() < b.dim() ? Relation::Less : Relation::Greater;
}

/// Lines off the equator by |<p,u>|^2, strictly above equator lines, which compare by the score.
Relation compare_tiered_lines(const SphereFrame<double>& frame, const EquatorScore& score, double eq_tol,
                              const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
  const double mu_u = std::pow(frame.pole().dot(u), 2), mu_v = std::pow(frame.pole().dot(v), 2);
  const bool eu = mu_u <= eq_tol, ev = mu_v <= eq_tol;
  if (eu && ev) return compare_values(score(equator_angle(frame, u)), score(equator_angle(frame, v)), eq_tol);
  if (eu != ev) return eu ? Relation::Less : Relation::Greater;
  return compare_values(mu_u, mu_v, eq_tol);
}

/// Unit normal of a plane of R^3.
Eigen::Vector3d normal_of(const Subspaced& plane) {
  const Eigen::Vector3d a = plane.basis().col(0), b = plane.basis().col(1);
  return a.cross(b).normalized();
}

/// The complement of a inside span{a, b}; requires a and b independent.
Eigen::VectorXd in_plane_complement(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd w = b - a.dot(b) * a;
  if (w.norm() < 1e-9) throw PreconditionViolation("in-plane complement of parallel lines");
  return w.normalized();
}

}  // namespace

EquatorScore EquatorScore::angle() {
  EquatorScore s;
  s.angle_ = true;
  return s;
}

EquatorScore EquatorScore::trig(std::vector<Term> terms) {
  if (terms.empty()) throw PreconditionViolation("trigonometric score needs at least one term");
  for (const auto& t : terms)
    if (t.harmonic <= 0 || t.harmonic % 2 != 0)
      throw PreconditionViolation("score harmonics must be positive and even (period pi)");
  EquatorScore s;
  s.terms_ = std::move(terms);
  return s;
}

EquatorScore EquatorScore::standard() { return trig({{2, 1.0, 0.0}, {6, 0.5, 0.0}}); }

double EquatorScore::operator()(double phi) const {
  if (angle_) return phi;
  double v = 0;
  for (const auto& t : terms_) v += t.sin_coef * std::sin(t.harmonic * phi) + t.cos_coef * std::cos(t.harmonic * phi);
  return v;
}

double EquatorScore::derivative(double phi) const {
  if (angle_) return 1.0;
  double v = 0;
  for (const auto& t : terms_)
    v += t.harmonic * (t.sin_coef * std::cos(t.harmonic * phi) - t.cos_coef * std::sin(t.harmonic * phi));
  return v;
}

double EquatorScore::antisymmetry_defect() const {
  double worst = 0;
  for (int i = 0; i < kScoreGrid; ++i) {
    const double phi = kPi * i / kScoreGrid;
    double shifted = phi + kPi / 2;
    if (shifted >= kPi) shifted -= kPi;
    worst = std::max(worst, std::abs((*this)(shifted) + (*this)(phi)));
  }
  return worst;
}

int EquatorScore::derivative_sign_changes() const {
  int changes = 0, last = 0;
  for (int i = 0; i < kScoreGrid; ++i) {
    const double d = derivative(kPi * i / kScoreGrid);
    const int s = d > 1e-12 ? 1 : d < -1e-12 ? -1 : 0;
    if (s != 0) {
      if (last != 0 && s != last) ++changes;
      last = s;
    }
  }
  return changes;
}

bool EquatorScore::valid_for_counterexample() const {
  return antisymmetry_defect() <= 1e-10 && derivative_sign_changes() > 2;
}

double equator_angle(const SphereFrame<double>& frame, const Eigen::Vector3d& u) {
  double phi = std::atan2(u.dot(frame.e2()), u.dot(frame.e1()));
  if (phi < 0) phi += kPi;
  if (phi >= kPi) phi -= kPi;
  return phi;
}

Example31Order::Example31Order(const Eigen::Vector3d& pole, EquatorScore score, double eq_tol)
    : frame_(pole), score_(std::move(score)), eq_tol_(eq_tol) {
  if (!(eq_tol > 0)) throw PreconditionViolation("eq_tol must be positive");
}

Relation Example31Order::compare_lines(const Eigen::Vector3d& u, const Eigen::Vector3d& v) const {
  return compare_tiered_lines(frame_, score_, eq_tol_, u, v);
}

Relation Example31Order::compare(const Subspaced& a, const Subspaced& b) const {
  detail::require_same_dim(a, b);
  if (a.ambient_dim() != 3) throw DimensionMismatch("this order lives in R^3");
  if (a.dim() != b.dim()) return by_dim(a, b);
  if (a.dim() == 1) return compare_lines(a.basis().col(0), b.basis().col(0));
  if (a.dim() != 2) return Relation::Equivalent;
  const Eigen::Vector3d& p = frame_.pole();
  const double pa = a.project(p).squaredNorm(), pb = b.project(p).squaredNorm();
  const bool ina = pa >= 1 - eq_tol_, inb = pb >= 1 - eq_tol_;
  if (ina && inb) {
    // Both planes contain p: compare their equator lines.
    const Eigen::Vector3d la = normal_of(a).cross(p), lb = normal_of(b).cross(p);
    return compare_values(score_(equator_angle(frame_, la)), score_(equator_angle(frame_, lb)), eq_tol_);
  }
  if (ina != inb) return ina ? Relation::Greater : Relation::Less;
  return compare_values(pa, pb, eq_tol_);
}

CounterexampleOrder::CounterexampleOrder(const Eigen::Vector3d& pole, EquatorScore score, double eq_tol)
    : frame_(pole), score_(std::move(score)), eq_tol_(eq_tol) {
  if (!(eq_tol > 0)) throw PreconditionViolation("eq_tol must be positive");
  if (score_.antisymmetry_defect() > 1e-10)
    throw PreconditionViolation("score is not antisymmetric under phi -> phi + pi/2");
  if (score_.derivative_sign_changes() <= 2)
    throw PreconditionViolation("score is unimodal; the order would be representable");
}

Relation CounterexampleOrder::compare_lines(const Eigen::Vector3d& u, const Eigen::Vector3d& v) const {
  return compare_tiered_lines(frame_, score_, eq_tol_, u, v);
}

Relation CounterexampleOrder::compare(const Subspaced& a, const Subspaced& b) const {
  detail::require_same_dim(a, b);
  if (a.ambient_dim() != 3) throw DimensionMismatch("this order lives in R^3");
  if (a.dim() != b.dim()) return by_dim(a, b);
  if (a.dim() == 1) return compare_lines(a.basis().col(0), b.basis().col(0));
  if (a.dim() == 2) return compare_lines(normal_of(b), normal_of(a));
  return Relation::Equivalent;
}

std::vector<Subspaced> equator_lines(const SphereFrame<double>& frame, int n) {
  std::vector<Subspaced> out;
  for (int k = 0; k < n; ++k) out.push_back(line(frame.point(kPi / 2, kPi * k / n)));
  return out;
}

RepresentationProblem counterexample_instance(const CounterexampleOrder& order, int n) {
  if (n < 2) throw PreconditionViolation("instance needs at least two equator lines");
  std::vector<Subspaced> items{Subspaced::zero(3)};
  for (auto& l : equator_lines(order.frame(), n)) items.push_back(std::move(l));
  items.push_back(line(order.frame().point(kPi / 4, 0.0)));
  items.push_back(Subspaced::full(3));
  return problem_from_order(order, items, ProblemMode::Chain);
}

Counter2Probe counter2_probe(const DensityOperatord& t, const Subspaced& u, int samples) {
  if (u.dim() != 2) throw PreconditionViolation("counter2_probe needs a two-dimensional subspace");
  if (u.ambient_dim() != t.dim()) throw DimensionMismatch("operator and plane differ in dimension");
  if (samples < 2) throw PreconditionViolation("counter2_probe needs at least two samples");
  const Eigen::MatrixXd& b = u.basis();
  const Eigen::Matrix2d tu = b.transpose() * t.matrix() * b;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(tu);
  Counter2Probe out;
  out.alpha = es.eigenvalues()(1);
  out.beta = es.eigenvalues()(0);
  out.x = b * es.eigenvectors().col(1);

  std::vector<std::pair<double, double>> pts;  // (|<x,y>|, mu(y))
  for (int i = 0; i < samples; ++i) {
    const double th = kPi * (i + 0.5) / samples;
    const Eigen::VectorXd y = b * Eigen::Vector2d(std::cos(th), std::sin(th));
    pts.emplace_back(std::abs(out.x.dot(y)), y.dot(t.matrix() * y));
  }
  if (out.alpha - out.beta <= 1e-12) {
    for (const auto& pt : pts) out.monotone = out.monotone && std::abs(pt.second - pts.front().second) <= 1e-12;
    return out;
  }
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double dk = pts[i].first - pts[i - 1].first, dm = pts[i].second - pts[i - 1].second;
    if (dm < -1e-12 || (dk > 1e-6 && dm <= 0)) out.monotone = false;
  }
  return out;
}

PureStateReport pure_state_theorem_check(const LikelihoodOrder& order, const Eigen::VectorXd& p, Eigen::Index d,
                                         std::size_t samples, std::uint64_t seed) {
  if (p.size() != d) throw DimensionMismatch("pole and dimension disagree");
  PureStateReport rep;
  rep.axioms = audit(order, d, seed, samples);
  const Subspaced whole = Subspaced::full(d);
  rep.pole_equivalent_to_whole = order.compare(line(p), whole) == Relation::Equivalent;
  rep.nontrivial = order.compare(Subspaced::zero(d), whole) == Relation::Less;
  const Eigen::VectorXd pn = p.normalized();
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = stream(seed, samples + i);
    const Subspaced a = random_subspace(d, rng), b = random_subspace(d, rng);
    const double ma = a.project(pn).squaredNorm(), mb = b.project(pn).squaredNorm();
    if (std::abs(ma - mb) < 1e-6) continue;
    ++rep.pairs_checked;
    if (order.compare(a, b) != compare_values(ma, mb, 0.0)) ++rep.disagreements;
  }
  return rep;
}

UniformReport uniform_characterization_check(const LikelihoodOrder& order, Eigen::Index d, std::size_t samples,
                                             std::uint64_t seed) {
  UniformReport rep;
  const auto* carrier = order.carrier();
  std::vector<Subspaced> lines_pool;
  if (carrier)
    for (const auto& s : *carrier)
      if (s.dim() == 1) lines_pool.push_back(s);

  const auto draw_line = [&](Rng& rng) {
    if (!carrier) return random_subspace(d, 1, rng);
    std::uniform_int_distribution<std::size_t> i(0, lines_pool.size() - 1);
    return lines_pool[i(rng)];
  };
  const auto draw_any = [&](Rng& rng) {
    if (!carrier) return random_subspace(d, rng);
    std::uniform_int_distribution<std::size_t> i(0, carrier->size() - 1);
    return (*carrier)[i(rng)];
  };

  rep.nontrivial = order.compare(Subspaced::zero(d), Subspaced::full(d)) == Relation::Less;
  if (carrier && lines_pool.empty()) return rep;
  Rng r0 = stream(seed, 0);
  const Subspaced ref = draw_line(r0);
  rep.lines_equivalent = true;
  for (std::size_t i = 0; i < samples && rep.lines_equivalent; ++i) {
    Rng rng = stream(seed, 1 + i);
    rep.lines_equivalent = order.compare(ref, draw_line(rng)) == Relation::Equivalent;
  }
  if (!rep.lines_equivalent || !rep.nontrivial) return rep;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = stream(seed, 1 + samples + i);
    const Subspaced a = draw_any(rng), b = draw_any(rng);
    ++rep.pairs_checked;
    if (order.compare(a, b) != compare_values(double(a.dim()), double(b.dim()), 0.0)) ++rep.disagreements;
  }
  return rep;
}

TripleCheck triple_basis_check(const DensityOperatord& t, const std::vector<Eigen::VectorXd>& lines) {
  const Eigen::Index d = t.dim();
  TripleCheck out;
  const Eigen::MatrixXd gap = t.matrix() - Eigen::MatrixXd::Identity(d, d) / double(d);
  out.uniform = gap.cwiseAbs().maxCoeff() <= 1e-6;
  if (static_cast<Eigen::Index>(lines.size()) != d) return out;
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (lines[static_cast<std::size_t>(i)].size() != d) throw DimensionMismatch("line outside R^d");
    m.col(i) = lines[static_cast<std::size_t>(i)].normalized();
  }
  const double lmin = t.eigenvalues()(0);
  bool minimal = true;
  for (Eigen::Index i = 0; i < d; ++i) minimal = minimal && std::abs(m.col(i).dot(t.matrix() * m.col(i)) - lmin) <= 1e-9;
  out.premise = minimal && span(m).dim() == d;
  return out;
}

std::optional<std::vector<Eigen::VectorXd>> find_equal_minimal_triple(const DensityOperatord& t, std::size_t samples,
                                                                      std::uint64_t seed) {
  const Eigen::Index d = t.dim();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.matrix());
  Eigen::Index k = 0;
  while (k < d && es.eigenvalues()(k) <= es.eigenvalues()(0) + 1e-9) ++k;
  const Eigen::MatrixXd w = es.eigenvectors().leftCols(k);
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = stream(seed, i);
    std::vector<Eigen::VectorXd> cand;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (std::bernoulli_distribution(0.5)(rng)) cand.push_back(w * random_unit_vector(k, rng));
      else cand.push_back(random_unit_vector(d, rng));
    }
    if (triple_basis_check(t, cand).premise) return cand;
  }
  return std::nullopt;
}

ClaimReport claim0_check(const LikelihoodOrder& order, Eigen::Index d, std::size_t samples, std::uint64_t seed) {
  ClaimReport rep;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = stream(seed, i);
    const Subspaced u = random_subspace(d, 2, rng);
    Eigen::VectorXd q = u.basis() * random_unit_vector(2, rng);
    Eigen::VectorXd r = u.basis() * random_unit_vector(2, rng);
    if (std::abs(q.dot(r)) > 1 - 1e-9) continue;
    Relation rel = order.compare(line(q), line(r));
    if (rel == Relation::Greater) {
      std::swap(q, r);
      rel = Relation::Less;
    }
    const Eigen::VectorXd qp = in_plane_complement(q, r), rp = in_plane_complement(r, q);
    const Relation after = order.compare(line(rp), line(qp));
    ++rep.checked;
    const bool ok = rel == Relation::Equivalent ? after == Relation::Equivalent : weakly_less(after);
    if (!ok) ++rep.violations;
  }
  return rep;
}

ClaimReport mmtags_check(const LikelihoodOrder& order, const Eigen::VectorXd& p, std::size_t samples,
                         std::uint64_t seed) {
  ClaimReport rep;
  const Eigen::Index d = p.size();
  const Eigen::VectorXd pn = p.normalized();
  const Subspaced big = line(pn);
  const Subspaced equator = complement(big);
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = stream(seed, i);
    const Eigen::VectorXd u = equator.basis() * random_unit_vector(d - 1, rng);
    const Subspaced small = line(Eigen::VectorXd(equator.basis() * random_unit_vector(d - 1, rng)));
    const Eigen::VectorXd& v = pn;
    if (order.compare(line(u), small) != Relation::Equivalent || order.compare(line(v), big) != Relation::Equivalent)
      continue;
    ++rep.checked;
    const Eigen::VectorXd up = in_plane_complement(u, v), vp = in_plane_complement(v, u);
    if (order.compare(line(up), big) != Relation::Equivalent || order.compare(line(vp), small) != Relation::Equivalent)
      ++rep.violations;
  }
  return rep;
}

}  // namespace qorder
