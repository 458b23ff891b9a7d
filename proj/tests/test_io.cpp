#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "qorder/io.hpp"

using namespace qorder;

namespace {

std::size_t error_line(const std::string& text, const std::function<void(const io::Node&)>& read) {
  try {
    const io::Document doc = io::parse(text);
    read(io::Node(doc));
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

io::Document reparse(const io::json& j) { return io::parse(j.dump(1)); }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("syntax errors carry the line") {
    CHECK(error_line("{\n  \"dim\": 3,\n  \"basis\": [[1, 0, 0],,]\n}", [](const io::Node&) {}) == 3);
    CHECK(error_line("{\n  \"dim\": 3\n", [](const io::Node&) {}) >= 2);
  }

  TEST_CASE("semantic errors carry the line of the offending value") {
    const std::string bad_row = "{\n  \"dim\": 3,\n  \"basis\": [\n    [1, 0, 0],\n    [0, 1]\n  ]\n}";
    CHECK(error_line(bad_row, [](const io::Node& n) { io::read_subspace(n); }) == 5);
    const std::string dependent = "{\n  \"dim\": 2,\n  \"basis\": [[1, 1],\n            [2, 2]]\n}";
    CHECK(error_line(dependent, [](const io::Node& n) { io::read_subspace(n); }) == 3);
    const std::string trace = "{\"dim\": 2,\n \"mat\": [[1, 0],\n  [0, 1]]}";
    CHECK(error_line(trace, [](const io::Node& n) { io::read_density(n); }) == 2);
    const std::string kind = "{\n\"kind\": \"nope\"\n}";
    CHECK(error_line(kind, [](const io::Node& n) { io::read_order(n); }) == 2);
    const std::string missing = "{\n  \"kind\": \"measure\"\n}";
    CHECK(error_line(missing, [](const io::Node& n) { io::read_order(n); }) == 1);
    const std::string number = "{\"dim\": 2,\n\"basis\": [[1, \"x\"]]}";
    CHECK(error_line(number, [](const io::Node& n) { io::read_subspace(n); }) == 2);
  }

  TEST_CASE("subspaces and densities round-trip") {
    Rng rng = stream(81, 0);
    for (int t = 0; t < 20; ++t) {
      const Subspaced a = random_subspace(4, rng);
      const io::Document doc = reparse(io::to_json(a));
      CHECK(approx_equal(io::read_subspace(io::Node(doc)), a));
      const DensityOperatord rho = random_density_operator(3, rng);
      const io::Document d2 = reparse(io::to_json(rho));
      CHECK((io::read_density(io::Node(d2)).matrix() - rho.matrix()).norm() < 1e-12);
    }
  }

  TEST_CASE("orders round-trip") {
    const Eigen::Vector3d e1 = Eigen::Vector3d::UnitX(), e3 = Eigen::Vector3d::UnitZ();
    std::vector<std::unique_ptr<LikelihoodOrder>> orders;
    orders.push_back(std::make_unique<MeasureOrder>(uniform(3)));
    orders.push_back(std::make_unique<LexicographicOrder>(pure_state(e3), pure_state(e1)));
    orders.push_back(std::make_unique<FiniteOrder>(std::vector<std::vector<Subspaced>>{{Subspaced::zero(3)}, {line(e1)}}));
    orders.push_back(std::make_unique<Example31Order>(e3));
    orders.push_back(std::make_unique<CounterexampleOrder>(e3));
    Rng rng = stream(82, 0);
    for (const auto& o : orders) {
      const io::Document doc = reparse(io::to_json(*o));
      const auto back = io::read_order(io::Node(doc));
      CHECK(back->kind() == o->kind());
      CHECK(io::to_json(*back) == io::to_json(*o));
      if (o->kind() == "finite") continue;
      for (int t = 0; t < 30; ++t) {
        const Subspaced a = random_subspace(3, rng), b = random_subspace(3, rng);
        CHECK(back->compare(a, b) == o->compare(a, b));
      }
    }
  }

  TEST_CASE("problems round-trip") {
    const auto rt = fixtures::round_trip(3, 83);
    const io::Document doc = reparse(io::to_json(rt.problem));
    const RepresentationProblem back = io::read_problem(io::Node(doc));
    REQUIRE(back.stricts.size() == rt.problem.stricts.size());
    REQUIRE(back.equivalences.size() == rt.problem.equivalences.size());
    for (std::size_t i = 0; i < back.stricts.size(); ++i) {
      CHECK(approx_equal(back.stricts[i].first, rt.problem.stricts[i].first));
      CHECK(approx_equal(back.stricts[i].second, rt.problem.stricts[i].second));
    }
    const io::Document cl = io::parse(R"({"omega": 3, "equiv": [[[0], [1]]], "strict": [[[], [2, 0]]]})");
    const ClassicalProblem cp = io::read_classical_problem(io::Node(cl));
    CHECK(cp.omega_size == 3);
    CHECK(cp.stricts[0].second == Event{0, 2});
    CHECK_THROWS_AS(io::read_classical_problem(io::Node(io::parse(R"({"omega": 2, "strict": [[[], [5]]]})"))), ParseError);
  }

  TEST_CASE("number rounding and atomic writes") {
    const io::json j = {{"x", 0.1 + 0.2}, {"v", {1.0 / 3.0, 2}}, {"s", "text"}};
    const io::json r = io::round_numbers(j);
    CHECK(r["x"].dump() == "0.3");
    CHECK(r["v"][0].dump() == "0.333333333333");
    CHECK(r["v"][1] == 2);
    const auto path = std::filesystem::temp_directory_path() / "qorder_io_test.json";
    io::write_atomic(path.string(), "hello\n");
    CHECK(fixtures::read_text(path) == "hello\n");
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    std::filesystem::remove(path);
  }
}
