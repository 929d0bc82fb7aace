#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "lebesgue/dilation.hpp"
#include "lebesgue/errors.hpp"

using namespace lebesgue;

TEST_CASE("dilation entries must be finite and positive") {
  CHECK_THROWS_AS(DilationVector({}), InvalidArgument);
  CHECK_THROWS_AS(DilationVector({2.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(DilationVector({-1.0}), InvalidArgument);
  CHECK_THROWS_AS(DilationVector({std::numeric_limits<double>::infinity()}), InvalidArgument);
  CHECK_THROWS_AS(DilationVector({std::nan("")}), InvalidArgument);
  CHECK_NOTHROW(DilationVector({0.5, 7.3}));
}

TEST_CASE("sorted_ascending is a predicate, not a requirement") {
  CHECK(DilationVector({2, 3, 3}).sorted_ascending());
  CHECK_FALSE(DilationVector({3, 2}).sorted_ascending());
}

TEST_CASE("ratio tuples m^(s)") {
  const DilationVector n{2, 5, 8};
  CHECK(n.ratios(1) == std::vector<double>{2.5});
  CHECK(n.ratios(2) == std::vector<double>{4.0, 8.0 / 5.0});
  CHECK_THROWS_AS(n.ratios(0), InvalidArgument);
  CHECK_THROWS_AS(n.ratios(3), InvalidArgument);
}

TEST_CASE("Lambda_s(0) = n_s and the two algebraic forms agree") {
  const DilationVector n{1.5, 3.7, 5.0, 2.0};
  const LambdaEvaluator lambda(n);
  for (std::size_t s = 1; s <= n.dim(); ++s) {
    std::vector<double> zero(s - 1, 0.0);
    CHECK(lambda(zero) == n[s - 1]);
  }
  const std::vector<std::vector<double>> points = {{0.3}, {1.0, 0.25}, {0.1, 0.7, 1.2}, {1.4, 0.0, 2.0}};
  for (const auto& xi : points) {
    const double a = lambda(xi);
    const double b = lambda.scaled_form(xi);
    CHECK(std::fabs(a - b) <= 32 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(a)));
  }
}

TEST_CASE("Lambda_s is strictly decreasing in each coordinate") {
  const LambdaEvaluator lambda(DilationVector{2.0, 3.0, 7.5});
  const std::vector<double> base{0.4, 0.9};
  const double at = lambda(base);
  for (std::size_t j = 0; j < base.size(); ++j) {
    auto moved = base;
    moved[j] += 0.01;
    CHECK(lambda(moved) < at);
  }
}

TEST_CASE("lattice Lambda values snap to integers on the boundary") {
  // n = (20, 23): Lambda_2(20) = 23 - (23/20) 20 must be exactly 0
  const LambdaEvaluator lambda(DilationVector{20, 23});
  const std::vector<int> k{20};
  CHECK(lambda.at_lattice(k) == 0.0);
  CHECK(snap_integral(3.0 + 1e-13, 1.0) == 3.0);
  CHECK(snap_integral(3.0 + 1e-6, 1.0) == 3.0 + 1e-6);
}

TEST_CASE("cache key uses 12 significant digits") {
  CHECK(DilationVector({2, 3.5}).key() == "2,3.5");
  CHECK(DilationVector({1.0 / 3.0}).key() == "0.333333333333");
}
