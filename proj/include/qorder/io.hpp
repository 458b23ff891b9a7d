#pragma once

#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "qorder/axioms.hpp"
#include "qorder/gallery.hpp"
#include "qorder/kochen_specker.hpp"
#include "qorder/measures.hpp"
#include "qorder/orders.hpp"
#include "qorder/representation.hpp"
#include "qorder/sphere.hpp"
#include "qorder/subspace.hpp"

namespace qorder::io {

using json = nlohmann::json;

/// A parsed document plus the source line of every value, keyed by JSON pointer.
struct Document {
  json root;
  std::map<std::string, std::size_t> lines;
};

/// Throws ParseError carrying the line of a syntax error.
Document parse(const std::string& text);
Document load_file(const std::string& path);

/// A value inside a Document; errors raised through it name the value's line.
class Node {
 public:
  Node(const Document& doc, const json& value, std::string pointer)
      : doc_(&doc), value_(&value), pointer_(std::move(pointer)) {}
  explicit Node(const Document& doc) : Node(doc, doc.root, "") {}

  const json& value() const { return *value_; }
  const std::string& pointer() const { return pointer_; }
  std::size_t line() const;

  bool has(const std::string& key) const { return value_->is_object() && value_->contains(key); }
  Node operator[](const std::string& key) const;
  Node operator[](std::size_t index) const;
  std::size_t size() const;

  double number() const;
  long long integer() const;
  std::string string() const;
  bool boolean() const;
  Eigen::VectorXd vector() const;
  Eigen::MatrixXd matrix() const;

  [[noreturn]] void fail(const std::string& what) const;

 private:
  const Document* doc_;
  const json* value_;
  std::string pointer_;
};

Subspaced read_subspace(const Node& n);
DensityOperatord read_density(const Node& n);
EquatorScore read_score(const Node& n);
std::unique_ptr<LikelihoodOrder> read_order(const Node& n);
RepresentationProblem read_problem(const Node& n);
ClassicalProblem read_classical_problem(const Node& n);
/// Either a list of 3-vectors or an object with a "rays" list.
std::vector<Eigen::Vector3d> read_rays(const Node& n);

json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);
json to_json(const Subspaced& s);
json to_json(const DensityOperatord& t);
json to_json(const EquatorScore& s);
json to_json(const LikelihoodOrder& order);
json to_json(const RepresentationProblem& prob);
json to_json(const RepresentationResult& res);
json to_json(const ClassicalResult& res);
json to_json(const AuditReport& rep);
json to_json(const PironPath<double>& path);
json to_json(const KSInstance& inst, const KSSearch& search);

/// Rounds every floating-point number to 12 significant digits.
json round_numbers(const json& j);

/// Writes through a temporary file and a rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace qorder::io
