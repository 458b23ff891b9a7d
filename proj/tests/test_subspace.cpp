#include <doctest.h>

#include "qorder/random.hpp"
#include "qorder/subspace.hpp"
#include "support.hpp"

using namespace qorder;

namespace {
Eigen::VectorXd e(Eigen::Index d, Eigen::Index i) { return Eigen::VectorXd::Unit(d, i); }
}  // namespace

TEST_SUITE("subspace") {
  TEST_CASE("span drops dependent vectors") {
    CHECK(span(Eigen::MatrixXd(3, 0)).dim() == 0);
    Eigen::MatrixXd g(3, 3);
    g << e(3, 0), 2 * e(3, 0), e(3, 1);
    const Subspaced s = span(g);
    CHECK(s.dim() == 2);
    CHECK((s.projection() - Eigen::Vector3d(1, 1, 0).asDiagonal().toDenseMatrix()).norm() < 1e-12);
  }

  TEST_CASE("span rank matches the Gram oracle") {
    Rng rng = stream(11, 0);
    for (int t = 0; t < 50; ++t) {
      Eigen::MatrixXd g = gaussian_matrix(5, 3, rng);
      if (t % 3 == 0) g.col(2) = 0.5 * g.col(0) - 2 * g.col(1);
      CHECK(span(g).dim() == oracle::gram_rank(g));
    }
  }

  TEST_CASE("complement") {
    CHECK(complement(Subspaced::zero(3)).is_full());
    CHECK(approx_equal(complement(line(e(3, 0))), span((Eigen::MatrixXd(3, 2) << e(3, 1), e(3, 2)).finished())));
    Rng rng = stream(12, 0);
    for (int t = 0; t < 100; ++t) {
      const Subspaced a = random_subspace(5, rng);
      const Subspaced c = complement(a);
      CHECK((a.projection() + c.projection() - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-10);
      CHECK(approx_equal(complement(c), a));
    }
  }

  TEST_CASE("sum and intersect") {
    Rng rng = stream(13, 0);
    const Subspaced a = random_subspace(4, 2, rng);
    CHECK(approx_equal(sum(a, Subspaced::zero(4)), a));
    CHECK(approx_equal(intersect(a, Subspaced::full(4)), a));
    Eigen::MatrixXd e12(3, 2), e23(3, 2);
    e12 << e(3, 0), e(3, 1);
    e23 << e(3, 1), e(3, 2);
    CHECK(approx_equal(sum(line(e(3, 0)), line(e(3, 1))), span(e12)));
    CHECK(approx_equal(intersect(span(e12), span(e23)), line(e(3, 1))));
  }

  TEST_CASE("modular law and nullspace-stacking intersection oracle") {
    Rng rng = stream(14, 0);
    for (int t = 0; t < 100; ++t) {
      const Eigen::Index d = 3 + t % 3;
      std::uniform_int_distribution<int> kd(1, static_cast<int>(d) - 1);
      Eigen::MatrixXd ga = gaussian_matrix(d, kd(rng), rng), gb = gaussian_matrix(d, kd(rng), rng);
      if (t % 2 == 0 && gb.cols() > 1) gb.col(0) = ga.col(0);  // force a common direction
      const Subspaced a = span(ga), b = span(gb);
      const Subspaced meet = intersect(a, b);
      CHECK(sum(a, b).dim() == a.dim() + b.dim() - meet.dim());
      const Eigen::MatrixXd q = oracle::intersection_by_nullspace(ga, gb);
      REQUIRE(q.cols() == meet.dim());
      if (q.cols() > 0) CHECK(hausdorff(meet, Subspaced::from_orthonormal(q)) < 1e-8);
    }
  }

  TEST_CASE("is_orthogonal") {
    Rng rng = stream(15, 0);
    const Subspaced a = random_subspace(4, 2, rng);
    CHECK(is_orthogonal(a, complement(a)));
    CHECK_FALSE(is_orthogonal(line(e(3, 0)), line((e(3, 0) + e(3, 1)).eval())));
    CHECK(is_orthogonal(a, Subspaced::zero(4)));
  }

  TEST_CASE("hausdorff closed form") {
    CHECK(hausdorff(line(e(3, 0)), line(e(3, 0))) == 0);
    CHECK(hausdorff(line(e(3, 0)), line(e(3, 1))) == doctest::Approx(1.0));
    for (double alpha : {0.1, 0.4, 0.9, 1.3}) {
      const Eigen::VectorXd v = std::cos(alpha) * e(3, 0) + std::sin(alpha) * e(3, 1);
      CHECK(hausdorff(line(e(3, 0)), line(v)) == doctest::Approx(std::sin(alpha)).epsilon(1e-12));
    }
  }

  TEST_CASE("hausdorff agrees with the sampling oracle") {
    std::mt19937_64 rng(7);
    for (double alpha : {0.2, 0.7, 1.2}) {
      Eigen::MatrixXd ga = e(3, 0), gb = (std::cos(alpha) * e(3, 0) + std::sin(alpha) * e(3, 1)).eval();
      CHECK(std::abs(oracle::hausdorff_by_sampling(ga, gb, 10000, rng) - std::sin(alpha)) < 1e-3);
    }
    for (int t = 0; t < 10; ++t) {
      const Eigen::Index d = 3 + t % 3;
      const Eigen::Index k = 1 + t % (d - 1);
      const Eigen::MatrixXd ga = oracle::gaussian(d, k, rng), gb = oracle::gaussian(d, k, rng);
      CHECK(std::abs(hausdorff(span(ga), span(gb)) - oracle::hausdorff_by_sampling(ga, gb, 2000, rng)) < 1e-3);
    }
  }

  TEST_CASE("hausdorff metric properties") {
    Rng rng = stream(16, 0);
    for (int t = 0; t < 300; ++t) {
      const Subspaced a = random_subspace(4, 2, rng), b = random_subspace(4, 2, rng), c = random_subspace(4, 2, rng);
      CHECK(hausdorff(a, b) == hausdorff(b, a));
      CHECK(hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-9);
    }
    CHECK(hausdorff(random_subspace(4, 1, rng), random_subspace(4, 3, rng)) == 1.0);
  }

  TEST_CASE("dimension mismatch throws") {
    CHECK_THROWS_AS(sum(Subspaced::zero(3), Subspaced::zero(4)), DimensionMismatch);
    CHECK_THROWS_AS(line(Eigen::VectorXd::Zero(3).eval()), PreconditionViolation);
  }
}
