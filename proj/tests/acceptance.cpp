// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when any line fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "fixtures.hpp"
#include "qorder/axioms.hpp"
#include "qorder/gallery.hpp"
#include "qorder/io.hpp"
#include "qorder/kochen_specker.hpp"
#include "qorder/random.hpp"
#include "qorder/representation.hpp"
#include "qorder/sphere.hpp"
#include "support.hpp"

using namespace qorder;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome ac1_axioms_hold_for_measures() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t violations = 0, checked = 0;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index d = 3 + i % 3;
    Rng rng = stream(1001, static_cast<std::uint64_t>(i));
    const AuditReport rep = audit(order_from_measure(random_density_operator(d, rng)), d, 2000 + i, 200);
    violations += rep.total_violations();
    for (const auto& tally : rep.tallies) checked += tally.checked;
  }
  const double s = seconds_since(t0);
  return {violations == 0 && s < 60, fmt("200 operators, %.0f checks, %.0f violations, %.1f s", double(checked), double(violations), s)};
}

Outcome ac2_round_trips() {
  std::size_t agree = 0, total = 0, feasible = 0;
  double worst_margin = 1;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto rt = fixtures::round_trip(3 + static_cast<Eigen::Index>(s % 3), 3000 + s, 1e-4);
    const RepresentationResult r = synthesize(rt.problem);
    if (!r.feasible) continue;
    ++feasible;
    worst_margin = std::min(worst_margin, r.margin);
    const MeasureOrder rec = order_from_measure(*r.T);
    for (const auto& [a, b] : rt.problem.stricts) agree += rec.compare(a, b) == Relation::Less, ++total;
    for (const auto& [a, b] : rt.problem.equivalences) agree += std::abs(mu(*r.T, a) - mu(*r.T, b)) <= 1e-6, ++total;
  }
  return {feasible == 50 && agree == total && worst_margin >= 1e-6,
          fmt("%.0f/50 feasible, %.0f pairs disagree, min margin %.3g", double(feasible), double(total - agree), worst_margin)};
}

/// Random density operators on the slice cut out by the equivalences, through the uniform state.
Outcome ac3_counterexample_infeasible() {
  const RepresentationProblem prob = counterexample_instance(counterexample_order(Eigen::Vector3d::UnitZ()));
  const RepresentationResult r = synthesize(prob);
  const bool certified = !r.feasible && r.certificate && verify_certificate(*r.certificate, prob, 1e-8);

  // Symmetric 3x3 matrices as 6-vectors; constraint rows tr(X) and tr((Pi_B - Pi_A) X).
  const auto sym_basis = [](int k) {
    static const int ij[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
    Eigen::Matrix3d e = Eigen::Matrix3d::Zero();
    e(ij[k][0], ij[k][1]) = e(ij[k][1], ij[k][0]) = ij[k][0] == ij[k][1] ? 1.0 : 1.0 / std::sqrt(2.0);
    return e;
  };
  Eigen::MatrixXd rows(1 + static_cast<Eigen::Index>(prob.equivalences.size()), 6);
  for (int k = 0; k < 6; ++k) rows(0, k) = sym_basis(k).trace();
  for (std::size_t j = 0; j < prob.equivalences.size(); ++j) {
    const auto& [a, b] = prob.equivalences[j];
    const Eigen::MatrixXd dm = b.projection() - a.projection();
    for (int k = 0; k < 6; ++k) rows(1 + static_cast<Eigen::Index>(j), k) = (dm.array() * sym_basis(k).array()).sum();
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
  const Eigen::MatrixXd null = lu.kernel();
  const Eigen::Matrix3d centre = Eigen::Matrix3d::Identity() / 3;
  bool centre_on_slice = true;
  for (const auto& [a, b] : prob.equivalences) centre_on_slice = centre_on_slice && std::abs(mu(uniform(3), a) - mu(uniform(3), b)) < 1e-12;

  std::mt19937_64 rng(3003);
  std::size_t all_violate = 0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) {
    Eigen::Matrix3d dir = Eigen::Matrix3d::Zero();
    if (null.cols() > 0) {
      const Eigen::VectorXd v = null * oracle::gaussian(null.cols(), 1, rng);
      for (int k = 0; k < 6; ++k) dir += v(k) * sym_basis(k);
    }
    const double lo = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(dir).eigenvalues()(0);
    const double smax = lo < 0 ? (1.0 / 3) / -lo : 1.0;
    const double s = std::uniform_real_distribution<double>(0, smax)(rng);
    const Eigen::Matrix3d x = centre + s * dir;
    bool violated = false;
    for (const auto& [a, b] : prob.effective_stricts())
      violated = violated || (b.projection().cwiseProduct(x).sum() - a.projection().cwiseProduct(x).sum()) <= 1e-12;
    all_violate += violated;
  }
  return {certified && centre_on_slice && all_violate == static_cast<std::size_t>(n),
          fmt("certificate lambda_max %.3g, %.0f of 10000 slice samples violate a strict pair (slice dim %.0f)",
              r.certificate ? r.certificate->lambda_max : 1.0, double(all_violate), double(null.cols()))};
}

Outcome ac4_partial() {
  const RepresentationProblem prob = counterexample_instance(counterexample_order(Eigen::Vector3d::UnitZ()));
  const RepresentationResult p = partial_representation(prob);
  int monotone = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto rt = fixtures::round_trip(3 + static_cast<Eigen::Index>(s % 3), 4000 + s);
    const RepresentationResult strict = synthesize(rt.problem), partial = partial_representation(rt.problem);
    monotone += partial.feasible && (!strict.feasible || partial.margin >= strict.margin - 1e-9);
  }
  return {p.feasible && monotone == 20, fmt("counterexample partial margin %.3g, monotone on %.0f/20", p.margin, monotone)};
}

Outcome ac5_piron() {
  // Haar pairs folded into the northern hemisphere; only the precondition is enforced.
  std::mt19937_64 rng(5005);
  int verified = 0, tried = 0, max_hops = 0;
  std::string failures;
  while (tried < 100) {
    const SphereFrame<double> f(random_unit_vector(3, rng));
    Eigen::Vector3d q = random_unit_vector(3, rng), r = random_unit_vector(3, rng);
    if (!f.in_northern(q)) q = -q;
    if (!f.in_northern(r)) r = -r;
    if (f.colatitude(q) > f.colatitude(r)) std::swap(q, r);
    if (f.colatitude(r) - f.colatitude(q) <= 1e-9) continue;
    ++tried;
    try {
      const PironPath<double> path = piron_path(f, q, r);
      max_hops = std::max(max_hops, path.hops());
      verified += verify_piron_path(path, q, r) && path.hops() <= kMaxPironHops;
    } catch (const Indeterminate& e) {
      failures += std::string("; ") + e.what();
    }
  }
  const SphereFrame<double> f(Eigen::Vector3d::UnitZ());
  const Eigen::Vector3d q = f.point(0.5, 1.0), r = ew_point(f, q, 1.1);
  const PironPath<double> one = piron_path(f, q, r);
  const bool single = one.hops() == 1 && verify_piron_path(one, q, r);
  return {verified == 100 && single, fmt("%.0f/100 verified, max hops %.0f, single-hop case %.0f", verified, max_hops, single) + failures};
}

Outcome ac6_pure_states() {
  Rng rng = stream(6006, 0);
  bool ok = true;
  std::string detail;
  for (Eigen::Index d = 3; d <= 5; ++d) {
    const Eigen::VectorXd p = random_unit_vector(d, rng);
    const PureStateReport r = pure_state_theorem_check(order_from_measure(pure_state(p)), p, d, 1000, 60 + d);
    ok = ok && r.premises() && r.conclusion();
    detail += fmt("d=%.0f %.0f pairs %.0f disagree; ", double(d), double(r.pairs_checked), double(r.disagreements));
  }
  const Eigen::VectorXd p = random_unit_vector(3, rng);
  const MeasureOrder o = order_from_measure(pure_state(p));
  const ClaimReport c0 = claim0_check(o, 3, 1000, 66), mm = mmtags_check(o, p, 1000, 67);
  ok = ok && c0.violations == 0 && mm.violations == 0 && c0.checked > 0 && mm.checked > 0;
  return {ok, detail + fmt("claim0 %.0f/%.0f, mmtags %.0f violations", double(c0.violations), double(c0.checked), double(mm.violations))};
}

Outcome ac7_triples() {
  const std::vector<Eigen::VectorXd> lines{Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d(1, 1, 1).normalized()};
  const TripleCheck t = triple_basis_check(uniform(3), lines);
  int found = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng = stream(7007, s);
    found += find_equal_minimal_triple(random_density_operator(3, rng), 500, s).has_value();
  }
  return {t.premise && t.holds() && found == 0, fmt("uniform premise %.0f holds %.0f, triples in %.0f/50 random operators", t.premise, t.holds(), found)};
}

Outcome ac8_kochen_specker() {
  const auto t0 = std::chrono::steady_clock::now();
  const io::Document doc = io::load_file(QORDER_DATA_DIR "/peres33.json");
  const KSInstance inst = ks_build(io::read_rays(io::Node(doc)));
  const KSSearch s = ks_color(inst);
  const double secs = seconds_since(t0);
  const KSInstance tri = ks_build({Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()});
  const KSSearch ts = ks_color(tri);
  const bool ok = inst.rays.size() == 33 && !s.coloring && ts.coloring && verify_coloring(tri, *ts.coloring) && secs < 10;
  return {ok, fmt("33-ray set: %.0f triples, no coloring after %.0f nodes, %.3f s", double(inst.triples.size()), double(s.nodes), secs)};
}

Outcome ac9_continuity() {
  const Eigen::Vector3d e1 = Eigen::Vector3d::UnitX(), e3 = Eigen::Vector3d::UnitZ();
  const LexicographicOrder lex = lexicographic_order(pure_state(e3), pure_state(e1));
  // Every nonzero proper coordinate span of R^3.
  std::vector<Subspaced> spans;
  for (unsigned m = 1; m < 7; ++m) {
    Eigen::MatrixXd g(3, 0);
    for (int i = 0; i < 3; ++i)
      if ((m >> i) & 1) g.conservativeResize(3, g.cols() + 1), g.col(g.cols() - 1) = Eigen::Vector3d::Unit(i);
    spans.push_back(span(g));
  }
  int witnessed = 0;
  bool within = true;
  for (const auto& a : spans)
    for (const auto& b : spans) {
      if (approx_equal(a, b)) continue;
      const auto w = continuity_witness(lex, b, a, 0.5, 12);
      if (!w) continue;
      ++witnessed;
      double bound = 1;
      for (const auto& ak : *w) {
        bound *= 0.5;
        within = within && hausdorff(ak, a) <= bound + 1e-12 && lex.compare(ak, b) == Relation::Less;
      }
      within = within && lex.compare(a, b) != Relation::Less;
    }
  int measure_witnesses = 0;
  Rng rng = stream(9009, 0);
  for (int t = 0; t < 100; ++t) {
    const MeasureOrder m = order_from_measure(random_density_operator(3, rng));
    const Subspaced a = random_subspace(3, rng), b = random_subspace(3, rng);
    measure_witnesses += continuity_witness(m, b, a, 0.5, 12).has_value();
  }
  return {witnessed > 0 && within && measure_witnesses == 0,
          fmt("lexicographic witnesses on %.0f coordinate pairs, bounds hold %.0f, measure-order witnesses %.0f", witnessed, within, measure_witnesses)};
}

ClassicalProblem ranking_problem(const std::vector<unsigned>& rank, std::size_t omega) {
  ClassicalProblem prob;
  prob.omega_size = omega;
  const auto event = [omega](unsigned m) {
    Event e;
    for (std::size_t i = 0; i < omega; ++i)
      if ((m >> i) & 1) e.push_back(i);
    return e;
  };
  for (std::size_t i = 0; i + 1 < rank.size(); ++i) prob.stricts.emplace_back(event(rank[i]), event(rank[i + 1]));
  return prob;
}

Outcome ac10_classical() {
  std::mt19937_64 rng(10010);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  int ok_trips = 0;
  for (int t = 0; t < 20; ++t) {
    Eigen::Vector4d p(unit(rng), unit(rng), unit(rng), unit(rng));
    p /= p.sum();
    std::vector<unsigned> rank(16);
    for (unsigned m = 0; m < 16; ++m) rank[m] = m;
    const auto weight = [&p](unsigned m) {
      double v = 0;
      for (int i = 0; i < 4; ++i)
        if ((m >> i) & 1) v += p(i);
      return v;
    };
    std::sort(rank.begin(), rank.end(), [&](unsigned a, unsigned b) { return weight(a) < weight(b); });
    const ClassicalProblem prob = ranking_problem(rank, 4);
    const ClassicalResult r = classical_represent(prob);
    bool agree = r.feasible;
    for (const auto& [a, b] : prob.stricts) agree = agree && r.p.dot(indicator(b, 4) - indicator(a, 4)) > 0;
    ok_trips += agree;
  }
  const auto rank = oracle::violating_ranking();
  const ClassicalProblem bad = ranking_problem(rank, 5);
  const ClassicalResult r = classical_represent(bad);
  const bool cert = oracle::has_cancelation_violation(rank) && !r.feasible && r.certificate && verify_classical_certificate(*r.certificate, bad, 1e-8);
  return {ok_trips == 20 && cert, fmt("%.0f/20 four-outcome round trips, violating ranking certified %.0f", ok_trips, cert)};
}

Outcome ac11_hausdorff() {
  std::mt19937_64 rng(11011);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d = 3 + t % 3, k = 1 + t % (d - 1);
    const Eigen::MatrixXd ga = oracle::gaussian(d, k, rng), gb = oracle::gaussian(d, k, rng);
    worst = std::max(worst, std::abs(hausdorff(span(ga), span(gb)) - oracle::hausdorff_by_sampling(ga, gb, 2000, rng)));
  }
  int exact = 0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d = 3 + t % 3, k = 1 + t % (d - 1);
    const Eigen::Index l = k + 1 + t % (d - k);
    exact += hausdorff(span(oracle::gaussian(d, k, rng)), span(oracle::gaussian(d, l, rng))) == 1.0;
  }
  return {worst <= 1e-3 && exact == 100, fmt("max deviation from sampling %.2e, %.0f/100 mixed-dimension pairs at exactly 1", worst, exact)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 axioms hold for density-operator orders", ac1_axioms_hold_for_measures},
      {"AC2 synthesis round trips", ac2_round_trips},
      {"AC3 counterexample certified infeasible", ac3_counterexample_infeasible},
      {"AC4 partial representation", ac4_partial},
      {"AC5 Piron paths", ac5_piron},
      {"AC6 pure-state theorem and claims", ac6_pure_states},
      {"AC7 equal-minimal triples", ac7_triples},
      {"AC8 Kochen-Specker search", ac8_kochen_specker},
      {"AC9 lexicographic discontinuity", ac9_continuity},
      {"AC10 classical representation", ac10_classical},
      {"AC11 Hausdorff distance", ac11_hausdorff},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
