#include "qorder/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

namespace qorder::io {

namespace {

/// Character iterator that remembers the line of the last non-blank character read.
class LineIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  struct Counter {
    std::size_t line = 1;
    std::size_t last_token_line = 1;
  };

  LineIterator(const char* p, Counter* c) : p_(p), c_(c) {}
  reference operator*() const { return *p_; }
  LineIterator& operator++() {
    const char ch = *p_;
    if (ch == '\n') ++c_->line;
    else if (ch != ' ' && ch != '\t' && ch != '\r') c_->last_token_line = c_->line;
    ++p_;
    return *this;
  }
  LineIterator operator++(int) {
    LineIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const LineIterator& o) const { return p_ == o.p_; }
  bool operator!=(const LineIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_;
  Counter* c_;
};

std::string escape_token(const std::string& key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~') out += "~0";
    else if (ch == '/') out += "~1";
    else out += ch;
  }
  return out;
}

std::size_t line_at(const std::string& text, std::size_t pos) {
  pos = std::min(pos, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

/// Forwards to the DOM builder and records pointer -> line for every value.
class TrackingSax {
 public:
  TrackingSax(Document& doc, const std::string& text, LineIterator::Counter& counter)
      : dom_(doc.root, true), doc_(doc), text_(text), counter_(counter) {}

  bool null() { return scalar() && dom_.null(); }
  bool boolean(bool v) { return scalar() && dom_.boolean(v); }
  bool number_integer(json::number_integer_t v) { return scalar() && dom_.number_integer(v); }
  bool number_unsigned(json::number_unsigned_t v) { return scalar() && dom_.number_unsigned(v); }
  bool number_float(json::number_float_t v, const json::string_t& s) { return scalar() && dom_.number_float(v, s); }
  bool string(json::string_t& v) { return scalar() && dom_.string(v); }
  bool binary(json::binary_t& v) { return scalar() && dom_.binary(v); }
  bool start_object(std::size_t n) {
    open(false);
    return dom_.start_object(n);
  }
  bool key(json::string_t& k) {
    frames_.back().key = k;
    return dom_.key(k);
  }
  bool end_object() {
    close();
    return dom_.end_object();
  }
  bool start_array(std::size_t n) {
    open(true);
    return dom_.start_array(n);
  }
  bool end_array() {
    close();
    return dom_.end_array();
  }
  bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& ex) {
    std::string msg = ex.what();
    const auto cut = msg.find("error while parsing");
    if (cut != std::string::npos) msg = msg.substr(cut);
    throw ParseError("invalid JSON: " + msg, line_at(text_, pos == 0 ? 0 : pos - 1));
  }

 private:
  struct Frame {
    bool array;
    std::size_t index = 0;
    std::string key;
  };

  std::string here() const {
    std::string ptr;
    for (const auto& f : frames_) ptr += "/" + (f.array ? std::to_string(f.index) : escape_token(f.key));
    return ptr;
  }
  void mark() { doc_.lines[here()] = counter_.last_token_line; }
  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }
  bool scalar() {
    mark();
    advance();
    return true;
  }
  void open(bool array) {
    mark();
    frames_.push_back({array, 0, {}});
  }
  void close() {
    frames_.pop_back();
    advance();
  }

  nlohmann::detail::json_sax_dom_parser<json> dom_;
  Document& doc_;
  const std::string& text_;
  LineIterator::Counter& counter_;
  std::vector<Frame> frames_;
};

}  // namespace

Document parse(const std::string& text) {
  Document doc;
  LineIterator::Counter counter;
  TrackingSax sax(doc, text, counter);
  const char* b = text.data();
  json::sax_parse(LineIterator(b, &counter), LineIterator(b + text.size(), &counter), &sax);
  return doc;
}

Document load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + std::string(e.what()));
  }
}

std::size_t Node::line() const {
  auto it = doc_->lines.find(pointer_);
  return it == doc_->lines.end() ? 0 : it->second;
}

void Node::fail(const std::string& what) const {
  throw ParseError((pointer_.empty() ? std::string("document") : pointer_) + ": " + what, line());
}

Node Node::operator[](const std::string& key) const {
  if (!value_->is_object()) fail("expected an object");
  auto it = value_->find(key);
  if (it == value_->end()) fail("missing field \"" + key + "\"");
  return Node(*doc_, *it, pointer_ + "/" + escape_token(key));
}

Node Node::operator[](std::size_t index) const {
  if (!value_->is_array()) fail("expected an array");
  if (index >= value_->size()) fail("index " + std::to_string(index) + " out of range");
  return Node(*doc_, (*value_)[index], pointer_ + "/" + std::to_string(index));
}

std::size_t Node::size() const {
  if (!value_->is_array()) fail("expected an array");
  return value_->size();
}

double Node::number() const {
  if (!value_->is_number()) fail("expected a number");
  return value_->get<double>();
}

long long Node::integer() const {
  if (!value_->is_number_integer()) fail("expected an integer");
  return value_->get<long long>();
}

std::string Node::string() const {
  if (!value_->is_string()) fail("expected a string");
  return value_->get<std::string>();
}

bool Node::boolean() const {
  if (!value_->is_boolean()) fail("expected true or false");
  return value_->get<bool>();
}

Eigen::VectorXd Node::vector() const {
  const std::size_t n = size();
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = (*this)[i].number();
  return v;
}

Eigen::MatrixXd Node::matrix() const {
  const std::size_t rows = size();
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  const std::size_t cols = (*this)[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const Node row = (*this)[i];
    if (row.size() != cols) row.fail("ragged matrix: expected " + std::to_string(cols) + " entries");
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].number();
  }
  return m;
}

namespace {

Eigen::Index read_dim(const Node& n) {
  const long long d = n.integer();
  if (d < 1 || d > 64) n.fail("dimension must lie in [1, 64]");
  return static_cast<Eigen::Index>(d);
}

double optional_number(const Node& n, const std::string& key, double fallback) {
  return n.has(key) ? n[key].number() : fallback;
}

}  // namespace

Subspaced read_subspace(const Node& n) {
  const Eigen::Index d = read_dim(n["dim"]);
  const Node rows = n["basis"];
  const std::size_t k = rows.size();
  Eigen::MatrixXd cols(d, static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    const Node row = rows[i];
    if (row.size() != static_cast<std::size_t>(d)) row.fail("basis vector must have " + std::to_string(d) + " entries");
    cols.col(static_cast<Eigen::Index>(i)) = row.vector();
  }
  Subspaced s = span(cols);
  if (s.dim() != static_cast<Eigen::Index>(k)) rows.fail("basis vectors are linearly dependent");
  return s;
}

DensityOperatord read_density(const Node& n) {
  const Eigen::Index d = read_dim(n["dim"]);
  const Node mat = n["mat"];
  const Eigen::MatrixXd m = mat.matrix();
  if (m.rows() != d || m.cols() != d) mat.fail("expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
  try {
    return DensityOperatord::from_matrix(m);
  } catch (const InvariantViolation& e) {
    mat.fail(e.what());
  }
}

EquatorScore read_score(const Node& n) {
  const std::string kind = n["kind"].string();
  if (kind == "angle") return EquatorScore::angle();
  if (kind == "standard") return EquatorScore::standard();
  if (kind != "trig") n["kind"].fail("unknown score kind \"" + kind + "\"");
  const Node terms = n["terms"];
  std::vector<EquatorScore::Term> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Node t = terms[i];
    out.push_back({static_cast<int>(t["harmonic"].integer()), optional_number(t, "sin", 0.0), optional_number(t, "cos", 0.0)});
  }
  try {
    return EquatorScore::trig(std::move(out));
  } catch (const PreconditionViolation& e) {
    terms.fail(e.what());
  }
}

std::unique_ptr<LikelihoodOrder> read_order(const Node& n) {
  const Node kind_node = n["kind"];
  const std::string kind = kind_node.string();
  const double eq_tol = optional_number(n, "eq_tol", kDefaultEqTol);
  try {
    if (kind == "measure") return std::make_unique<MeasureOrder>(read_density(n["T"]), eq_tol);
    if (kind == "lex") return std::make_unique<LexicographicOrder>(read_density(n["T1"]), read_density(n["T2"]), eq_tol);
    if (kind == "finite") {
      const Node classes = n["classes"];
      std::vector<std::vector<Subspaced>> cls;
      for (std::size_t i = 0; i < classes.size(); ++i) {
        const Node c = classes[i];
        std::vector<Subspaced> members;
        for (std::size_t j = 0; j < c.size(); ++j) members.push_back(read_subspace(c[j]));
        cls.push_back(std::move(members));
      }
      return std::make_unique<FiniteOrder>(std::move(cls));
    }
    if (kind == "example31" || kind == "counter") {
      const Node pole = n["pole"];
      const Eigen::VectorXd p = pole.vector();
      if (p.size() != 3 || p.norm() < 1e-12) pole.fail("pole must be a nonzero vector of R^3");
      if (kind == "example31")
        return std::make_unique<Example31Order>(p, n.has("score") ? read_score(n["score"]) : EquatorScore::angle(), eq_tol);
      return std::make_unique<CounterexampleOrder>(p, n.has("score") ? read_score(n["score"]) : EquatorScore::standard(),
                                                   eq_tol);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    n.fail(e.what());
  }
  kind_node.fail("unknown order kind \"" + kind + "\"");
}

namespace {

std::vector<SubspacePair> read_pairs(const Node& n, Eigen::Index d) {
  std::vector<SubspacePair> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const Node pr = n[i];
    if (pr.size() != 2) pr.fail("expected a pair of subspaces");
    Subspaced a = read_subspace(pr[0]), b = read_subspace(pr[1]);
    if (a.ambient_dim() != d || b.ambient_dim() != d) pr.fail("subspace outside R^" + std::to_string(d));
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

std::vector<EventPair> read_event_pairs(const Node& n, std::size_t omega) {
  std::vector<EventPair> out;
  const auto event = [&](const Node& e) {
    Event ev;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const long long w = e[i].integer();
      if (w < 0 || static_cast<std::size_t>(w) >= omega) e[i].fail("element outside the sample space");
      ev.push_back(static_cast<std::size_t>(w));
    }
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    return ev;
  };
  for (std::size_t i = 0; i < n.size(); ++i) {
    const Node pr = n[i];
    if (pr.size() != 2) pr.fail("expected a pair of events");
    out.emplace_back(event(pr[0]), event(pr[1]));
  }
  return out;
}

}  // namespace

RepresentationProblem read_problem(const Node& n) {
  RepresentationProblem prob;
  prob.dim = read_dim(n["dim"]);
  if (n.has("equiv")) prob.equivalences = read_pairs(n["equiv"], prob.dim);
  if (n.has("strict")) prob.stricts = read_pairs(n["strict"], prob.dim);
  if (n.has("normalize")) prob.include_normalization = n["normalize"].boolean();
  try {
    validate(prob);
  } catch (const Error& e) {
    n.fail(e.what());
  }
  return prob;
}

ClassicalProblem read_classical_problem(const Node& n) {
  ClassicalProblem prob;
  const long long omega = n["omega"].integer();
  if (omega < 1 || omega > 64) n["omega"].fail("sample space size must lie in [1, 64]");
  prob.omega_size = static_cast<std::size_t>(omega);
  if (n.has("equiv")) prob.equivalences = read_event_pairs(n["equiv"], prob.omega_size);
  if (n.has("strict")) prob.stricts = read_event_pairs(n["strict"], prob.omega_size);
  if (prob.stricts.empty()) n.fail("problem needs at least one strict pair");
  return prob;
}

std::vector<Eigen::Vector3d> read_rays(const Node& n) {
  const Node list = n.value().is_object() ? n["rays"] : n;
  std::vector<Eigen::Vector3d> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Node r = list[i];
    if (r.size() != 3) r.fail("ray must have 3 entries");
    const Eigen::Vector3d v = r.vector();
    if (v.norm() < 1e-12) r.fail("zero ray");
    out.push_back(v);
  }
  if (out.empty()) list.fail("ray set is empty");
  return out;
}

json to_json(const Eigen::VectorXd& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

json to_json(const Eigen::MatrixXd& m) {
  json j = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) j.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return j;
}

json to_json(const Subspaced& s) {
  json basis = json::array();
  for (Eigen::Index i = 0; i < s.dim(); ++i) basis.push_back(to_json(Eigen::VectorXd(s.basis().col(i))));
  return {{"dim", s.ambient_dim()}, {"basis", basis}};
}

json to_json(const DensityOperatord& t) { return {{"dim", t.dim()}, {"mat", to_json(t.matrix())}}; }

json to_json(const EquatorScore& s) {
  if (s.is_angle()) return {{"kind", "angle"}};
  json terms = json::array();
  for (const auto& t : s.terms()) terms.push_back({{"harmonic", t.harmonic}, {"sin", t.sin_coef}, {"cos", t.cos_coef}});
  return {{"kind", "trig"}, {"terms", terms}};
}

json to_json(const LikelihoodOrder& order) {
  if (const auto* m = dynamic_cast<const MeasureOrder*>(&order))
    return {{"kind", "measure"}, {"T", to_json(m->density())}, {"eq_tol", m->eq_tol()}};
  if (const auto* l = dynamic_cast<const LexicographicOrder*>(&order))
    return {{"kind", "lex"}, {"T1", to_json(l->primary())}, {"T2", to_json(l->secondary())}, {"eq_tol", l->eq_tol()}};
  if (const auto* f = dynamic_cast<const FiniteOrder*>(&order)) {
    json classes = json::array();
    for (const auto& c : f->classes()) {
      json members = json::array();
      for (const auto& s : c) members.push_back(to_json(s));
      classes.push_back(members);
    }
    return {{"kind", "finite"}, {"classes", classes}};
  }
  if (const auto* e = dynamic_cast<const Example31Order*>(&order))
    return {{"kind", "example31"}, {"pole", to_json(Eigen::VectorXd(e->frame().pole()))}, {"score", to_json(e->score())},
            {"eq_tol", e->eq_tol()}};
  if (const auto* c = dynamic_cast<const CounterexampleOrder*>(&order))
    return {{"kind", "counter"}, {"pole", to_json(Eigen::VectorXd(c->frame().pole()))}, {"score", to_json(c->score())},
            {"eq_tol", c->eq_tol()}};
  throw PreconditionViolation("order kind has no serialization");
}

json to_json(const RepresentationProblem& prob) {
  const auto pairs = [](const std::vector<SubspacePair>& ps) {
    json j = json::array();
    for (const auto& [a, b] : ps) j.push_back({to_json(a), to_json(b)});
    return j;
  };
  return {{"dim", prob.dim},
          {"equiv", pairs(prob.equivalences)},
          {"strict", pairs(prob.stricts)},
          {"normalize", prob.include_normalization}};
}

namespace {

json diagnostics_json(const SolverDiagnostics& d) {
  return {{"newton_steps", d.newton_steps},
          {"facial_reductions", d.facial_reductions},
          {"barrier_t", d.barrier_t},
          {"solver_margin", d.solver_margin}};
}

}  // namespace

json to_json(const RepresentationResult& res) {
  json j;
  j["status"] = res.feasible ? "feasible" : "infeasible";
  if (res.feasible) {
    j["margin"] = res.margin;
    j["T"] = to_json(*res.T);
  } else {
    const auto& c = *res.certificate;
    j["certificate"] = {{"lambda", to_json(c.lambda)}, {"c", to_json(c.c)}, {"M", to_json(c.M)}, {"lambda_max", c.lambda_max}};
  }
  j["diagnostics"] = diagnostics_json(res.diagnostics);
  return j;
}

json to_json(const ClassicalResult& res) {
  json j;
  j["status"] = res.feasible ? "feasible" : "infeasible";
  if (res.feasible) {
    j["margin"] = res.margin;
    j["p"] = to_json(res.p);
  } else {
    const auto& c = *res.certificate;
    j["certificate"] = {{"lambda", to_json(c.lambda)}, {"c", to_json(c.c)}, {"m", to_json(c.m)}, {"max_entry", c.max_entry}};
  }
  j["diagnostics"] = diagnostics_json(res.diagnostics);
  return j;
}

json to_json(const AuditReport& rep) {
  json axioms = json::object();
  for (Axiom a : kAllAxioms) {
    const AxiomTally& t = rep.tally(a);
    axioms[std::string(to_string(a))] = {
        {"checked", t.checked}, {"violations", t.violations}, {"not_applicable", t.not_applicable}, {"skipped", t.skipped}};
  }
  std::vector<const ViolationWitness*> ws;
  for (const auto& w : rep.witnesses) ws.push_back(&w);
  std::stable_sort(ws.begin(), ws.end(), [](const ViolationWitness* a, const ViolationWitness* b) {
    return std::pair(static_cast<int>(a->axiom), a->sample) < std::pair(static_cast<int>(b->axiom), b->sample);
  });
  json witnesses = json::array();
  for (const auto* w : ws) {
    json subs = json::array(), rels = json::array();
    for (const auto& s : w->subspaces) subs.push_back(to_json(s));
    for (Relation r : w->relations) rels.push_back(std::string(to_string(r)));
    witnesses.push_back({{"axiom", std::string(to_string(w->axiom))}, {"sample", w->sample}, {"subspaces", subs}, {"relations", rels}});
  }
  return {{"seed", rep.seed},
          {"samples", rep.samples},
          {"dim", rep.dim},
          {"cancelation_families", {"bases", "complements", "refinement", "reflexive"}},
          {"axioms", axioms},
          {"total_violations", rep.total_violations()},
          {"witnesses", witnesses}};
}

json to_json(const PironPath<double>& path) {
  json pts = json::array();
  for (const auto& x : path.points) pts.push_back(to_json(Eigen::VectorXd(x)));
  return {{"pole", to_json(Eigen::VectorXd(path.frame.pole()))}, {"points", pts}, {"hops", path.hops()}};
}

json to_json(const KSInstance& inst, const KSSearch& search) {
  json j = {{"rays", inst.rays.size()},
            {"pairs", inst.pairs.size()},
            {"triples", inst.triples.size()},
            {"colorable", search.coloring.has_value()},
            {"nodes", search.nodes},
            {"backtracks", search.backtracks}};
  if (search.coloring) {
    json col = json::object();
    for (std::size_t i = 0; i < search.coloring->size(); ++i) col[std::to_string(i)] = (*search.coloring)[i] ? "green" : "red";
    j["coloring"] = col;
  }
  return j;
}

json round_numbers(const json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return j;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& e : j) out.push_back(round_numbers(e));
    return out;
  }
  if (j.is_object()) {
    json out = json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = round_numbers(it.value());
    return out;
  }
  return j;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw Error("short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

}  // namespace qorder::io
