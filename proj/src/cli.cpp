#include "qorder/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "qorder/io.hpp"
#include "qorder/random.hpp"

#ifndef QORDER_VERSION
#define QORDER_VERSION "dev"
#endif

namespace qorder::cli {

namespace {

using io::json;

// sin^2(2^-k) must stay above the order's 1e-9 tie tolerance.
constexpr int kWitnessSteps = 12;

struct Config {
  std::string command;
  std::vector<std::string> inputs;
  std::uint64_t seed = 0;
  std::size_t samples = 200;
  std::optional<double> tol;
  std::string out;
  std::string format = "json";
  bool partial = false;
  std::string emit_dir;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return path;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_hash(const Config& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto feed = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ull;
    }
    h ^= 0xff;
    h *= 0x100000001b3ull;
  };
  feed(cfg.command);
  for (const auto& p : cfg.inputs) feed(slurp(p));
  feed(std::to_string(cfg.seed));
  feed(std::to_string(cfg.samples));
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", cfg.tol.value_or(-1.0));
  feed(buf);
  feed(cfg.partial ? "partial" : "");
  feed(cfg.format);
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_cell(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

void flatten(const json& j, const std::string& path, std::string& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    out += csv_cell(path + ".length") + "," + std::to_string(j.size()) + "\n";
  } else {
    out += csv_cell(path) + "," + csv_cell(j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
  }
}

std::string render(const json& report, const std::string& format) {
  const json rounded = io::round_numbers(report);
  if (format == "csv") {
    std::string out = "key,value\n";
    flatten(rounded, "", out);
    return out;
  }
  return rounded.dump(2) + "\n";
}

io::Document load(const std::string& path) { return io::load_file(path); }

json audit_block(const AuditReport& rep) { return io::to_json(rep); }

// Each handler fills `result` and returns the exit code.

int do_audit(const Config& cfg, json& result) {
  const io::Document doc = load(cfg.inputs.at(0));
  const auto order = io::read_order(io::Node(doc));
  const AuditReport rep = audit(*order, order->ambient_dim(), cfg.seed, cfg.samples);
  result["order"] = io::to_json(*order);
  if (order->kind() == "example31")
    result["notes"] = {"two-dimensional ties outside the case split are completed as equivalent"};
  result["audit"] = audit_block(rep);
  result["status"] = rep.total_violations() == 0 ? "pass" : "violations";
  return rep.total_violations() == 0 ? kSuccess : kNegative;
}

int do_represent(const Config& cfg, json& result) {
  const io::Document doc = load(cfg.inputs.at(0));
  const RepresentationProblem prob = io::read_problem(io::Node(doc));
  const double tol = cfg.tol.value_or(kDefaultSolveTol);
  const RepresentationResult res = cfg.partial ? partial_representation(prob, tol) : synthesize(prob, tol);
  result["mode"] = cfg.partial ? "partial" : "strict";
  result["tol"] = tol;
  result["representation"] = io::to_json(res);
  if (!res.feasible) result["certificate_verified"] = verify_certificate(*res.certificate, prob, cfg.partial ? -tol : tol);
  result["status"] = res.feasible ? "feasible" : "infeasible";
  return res.feasible ? kSuccess : kNegative;
}

int do_classical(const Config& cfg, json& result) {
  const io::Document doc = load(cfg.inputs.at(0));
  const ClassicalProblem prob = io::read_classical_problem(io::Node(doc));
  const double tol = cfg.tol.value_or(kDefaultSolveTol);
  const ClassicalResult res = classical_represent(prob, tol);
  result["tol"] = tol;
  result["representation"] = io::to_json(res);
  if (!res.feasible) result["certificate_verified"] = verify_classical_certificate(*res.certificate, prob, tol);
  result["status"] = res.feasible ? "feasible" : "infeasible";
  return res.feasible ? kSuccess : kNegative;
}

Eigen::Vector3d read_vec3(const io::Node& n) {
  const Eigen::VectorXd v = n.vector();
  if (v.size() != 3) n.fail("expected a vector of R^3");
  return v;
}

int do_piron(const Config& cfg, json& result) {
  const io::Document doc = load(cfg.inputs.at(0));
  const io::Node root(doc);
  const Eigen::Vector3d pole = read_vec3(root["pole"]), q = read_vec3(root["q"]), r = read_vec3(root["r"]);
  const double tol = cfg.tol.value_or(root.has("tol") ? root["tol"].number() : 1e-9);
  const SphereFrame<double> frame(pole);
  const PironPath<double> path = piron_path(frame, q.normalized().eval(), r.normalized().eval(), tol);
  const bool ok = verify_piron_path(path, q.normalized().eval(), r.normalized().eval(), tol);
  result["tol"] = tol;
  result["path"] = io::to_json(path);
  result["verified"] = ok;
  result["status"] = ok ? "verified" : "unverified";
  return ok ? kSuccess : kIndeterminate;
}

int do_ks(const Config& cfg, json& result) {
  const io::Document doc = load(cfg.inputs.at(0));
  const io::Node root(doc);
  if (root.has("name")) result["name"] = root["name"].string();
  const KSInstance inst = ks_build(io::read_rays(root));
  const KSSearch search = ks_color(inst);
  result["ks"] = io::to_json(inst, search);
  if (search.coloring) result["coloring_verified"] = verify_coloring(inst, *search.coloring);
  result["status"] = search.coloring ? "colorable" : "no coloring";
  return search.coloring ? kSuccess : kNegative;
}

int do_distance(const Config& cfg, json& result) {
  const io::Document da = load(cfg.inputs.at(0)), db = load(cfg.inputs.at(1));
  const Subspaced a = io::read_subspace(io::Node(da)), b = io::read_subspace(io::Node(db));
  if (a.ambient_dim() != b.ambient_dim())
    throw DimensionMismatch("subspaces live in R^" + std::to_string(a.ambient_dim()) + " and R^" +
                            std::to_string(b.ambient_dim()));
  result["dim_a"] = a.dim();
  result["dim_b"] = b.dim();
  result["distance"] = hausdorff(a, b);
  result["status"] = "ok";
  return kSuccess;
}

void emit_file(const std::string& dir, const std::string& name, const json& j) {
  std::filesystem::create_directories(dir);
  io::write_atomic((std::filesystem::path(dir) / name).string(), io::round_numbers(j).dump(2) + "\n");
}

int do_gallery(const Config& cfg, json& result) {
  const Eigen::Vector3d pole = Eigen::Vector3d::UnitZ();
  json checks = json::object();
  bool all = true;
  const auto expect = [&](const std::string& name, bool ok) {
    checks[name] = ok;
    all = all && ok;
  };

  const Example31Order e31 = example31_order(pole);
  const AuditReport e31_rep = audit(e31, 3, cfg.seed, cfg.samples);
  result["example31"] = {{"order", io::to_json(e31)},
                         {"notes", {"two-dimensional ties outside the case split are completed as equivalent"}},
                         {"audit", audit_block(e31_rep)}};
  expect("example31_negation_fails", e31_rep.tally(Axiom::Negation).violations > 0);
  expect("example31_definetti_holds", e31_rep.tally(Axiom::DeFinetti).violations == 0);

  const LexicographicOrder lex = lexicographic_order(pure_state(pole), pure_state(Eigen::Vector3d::UnitX().eval()));
  const AuditReport lex_rep = audit(lex, 3, cfg.seed, cfg.samples);
  const Subspaced lex_a = span(Eigen::Matrix<double, 3, 2>((Eigen::Matrix<double, 3, 2>() << 1, 0, 0, 0, 0, 1).finished()));
  const Subspaced lex_b = span(Eigen::Matrix<double, 3, 2>((Eigen::Matrix<double, 3, 2>() << 0, 0, 1, 0, 0, 1).finished()));
  const auto witness = continuity_witness(lex, lex_b, lex_a, 0.5, kWitnessSteps);
  json lex_j = {{"order", io::to_json(lex)}, {"audit", audit_block(lex_rep)}, {"a", io::to_json(lex_a)}, {"b", io::to_json(lex_b)}};
  if (witness) {
    json seq = json::array();
    for (std::size_t k = 0; k < witness->size(); ++k)
      seq.push_back({{"k", k + 1}, {"distance", hausdorff((*witness)[k], lex_a)},
                     {"relation", std::string(to_string(lex.compare((*witness)[k], lex_b)))}});
    lex_j["continuity_witness"] = seq;
  }
  result["lexicographic"] = lex_j;
  expect("lexicographic_axioms_hold", lex_rep.total_violations() == 0);
  expect("lexicographic_discontinuity_witnessed", witness.has_value());

  const CounterexampleOrder counter = counterexample_order(pole);
  const RepresentationProblem inst = counterexample_instance(counter);
  const RepresentationResult strict_res = synthesize(inst);
  const RepresentationResult partial_res = partial_representation(inst);
  const bool cert_ok = !strict_res.feasible && verify_certificate(*strict_res.certificate, inst, 1e-8);
  result["counterexample"] = {{"order", io::to_json(counter)},
                              {"strict", io::to_json(strict_res)},
                              {"partial", io::to_json(partial_res)},
                              {"certificate_verified", cert_ok}};
  expect("counterexample_certified_infeasible", cert_ok);
  expect("counterexample_partially_representable", partial_res.feasible);

  const MeasureOrder pure_order = order_from_measure(pure_state(pole));
  const PureStateReport ps = pure_state_theorem_check(pure_order, pole, 3, cfg.samples, cfg.seed);
  result["pure_state"] = {{"premises", ps.premises()},
                          {"conclusion", ps.conclusion()},
                          {"pairs_checked", ps.pairs_checked},
                          {"disagreements", ps.disagreements}};
  expect("pure_state_theorem", ps.premises() && ps.conclusion());

  const MeasureOrder uni = order_from_measure(uniform(3));
  const UniformReport ur = uniform_characterization_check(uni, 3, cfg.samples, cfg.seed);
  result["uniform"] = {{"lines_equivalent", ur.lines_equivalent},
                       {"nontrivial", ur.nontrivial},
                       {"pairs_checked", ur.pairs_checked},
                       {"disagreements", ur.disagreements}};
  expect("uniform_characterization", ur.lines_equivalent && ur.nontrivial && ur.disagreements == 0);

  if (!cfg.emit_dir.empty()) {
    emit_file(cfg.emit_dir, "example31.json", io::to_json(e31));
    emit_file(cfg.emit_dir, "lexicographic.json", io::to_json(lex));
    emit_file(cfg.emit_dir, "counterexample.json", io::to_json(counter));
    emit_file(cfg.emit_dir, "counterexample_instance.json", io::to_json(inst));
  }
  result["checks"] = checks;
  result["status"] = all ? "pass" : "unexpected";
  return all ? kSuccess : kNegative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Likelihood orders over subspaces: audits, synthesis, geometry", "qorder"};
  app.set_version_flag("--version", QORDER_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--samples", cfg.samples, "Sample count")->check(CLI::PositiveNumber);
  app.add_option("--tol", cfg.tol, "Solver or geometry tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "Report path (stdout when omitted)");
  app.add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  const auto one_input = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", cfg.inputs, what)->required()->expected(1)->check(CLI::ExistingFile);
  };
  one_input(app.add_subcommand("audit", "Check every axiom on an order file"), "Order file");
  auto* represent = app.add_subcommand("represent", "Find a representing density operator or a certificate");
  one_input(represent, "Problem file");
  represent->add_flag("--partial", cfg.partial, "Only require nonnegative strict margins");
  one_input(app.add_subcommand("classical", "Probability-vector version of represent"), "Problem file");
  one_input(app.add_subcommand("piron", "Build and verify a Piron path"), "Path request file");
  one_input(app.add_subcommand("ks", "Search for a Kochen-Specker coloring"), "Ray file");
  auto* gallery = app.add_subcommand("gallery", "Build and check the example orders");
  gallery->add_option("--emit", cfg.emit_dir, "Directory for the example order files");
  app.add_subcommand("distance", "Hausdorff distance of two subspaces")
      ->add_option("inputs", cfg.inputs, "Two subspace files")
      ->required()
      ->expected(2)
      ->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  static const std::map<std::string, std::function<int(const Config&, json&)>> handlers{
      {"audit", do_audit},   {"represent", do_represent}, {"classical", do_classical}, {"piron", do_piron},
      {"ks", do_ks},         {"gallery", do_gallery},     {"distance", do_distance}};

  json report = {{"command", cfg.command},
                 {"version", QORDER_VERSION},
                 {"config_hash", config_hash(cfg)},
                 {"seed", cfg.seed},
                 {"samples", cfg.samples},
                 {"inputs", cfg.inputs}};
  json result = json::object();
  int code = kSuccess;
  try {
    code = handlers.at(cfg.command)(cfg, result);
  } catch (const Indeterminate& e) {
    result["status"] = "indeterminate";
    result["reason"] = e.what();
    err << "indeterminate: " << e.what() << "\n";
    code = kIndeterminate;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  report["result"] = result;

  const std::string text = render(report, cfg.format);
  if (cfg.out.empty()) {
    out << text;
  } else {
    try {
      io::write_atomic(cfg.out, text);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    }
    out << cfg.command << ": " << result.value("status", std::string("done")) << "\n";
  }
  return code;
}

}  // namespace qorder::cli
