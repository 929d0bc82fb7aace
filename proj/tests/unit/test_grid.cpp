#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lebesgue/errors.hpp"
#include "lebesgue/grid.hpp"
#include "lebesgue/kernels.hpp"
#include "lebesgue/norms.hpp"

using namespace lebesgue;

namespace {

std::vector<double> node_point(const GridSpec& g, const std::vector<std::size_t>& t) {
  std::vector<double> x;
  for (std::size_t j = 0; j < t.size(); ++j) x.push_back(g.node(j, t[j]));
  return x;
}

std::vector<std::size_t> unflatten(const GridSpec& g, std::size_t flat) {
  std::vector<std::size_t> t(g.dim());
  for (std::size_t j = g.dim(); j-- > 0;) {
    t[j] = flat % g.counts[j];
    flat /= g.counts[j];
  }
  return t;
}

}  // namespace

TEST_CASE("smooth sizes") {
  CHECK(smooth_size(1) == 1);
  CHECK(smooth_size(11) == 12);
  CHECK(smooth_size(13) == 14);
  CHECK(smooth_size(97) == 98);
  CHECK(smooth_size(1021) == 1024);
  for (std::size_t n = 1; n < 500; ++n) {
    std::size_t m = smooth_size(n);
    CHECK(m >= n);
    for (std::size_t p : {2, 3, 5, 7}) {
      while (m % p == 0) m /= p;
    }
    CHECK(m == 1);
  }
}

TEST_CASE("grid covering and doubling") {
  const std::vector<int> extents{3, 8};
  const auto g = GridSpec::covering(extents, 4);
  CHECK(g.counts == std::vector<std::size_t>{12, 32});
  CHECK(g.doubled().counts == std::vector<std::size_t>{24, 64});
  CHECK(g.label() == "12x32");
  CHECK(g.node(0, 0) == doctest::Approx(-std::numbers::pi));
  CHECK(g.node(1, 16) == doctest::Approx(0.0));
}

TEST_CASE("grid_eval of D on 16x16 matches eval_D at every node") {
  const DilationVector n{2, 2};
  const auto field = indicator_coefficients(SimplexLattice::build(n, 2));
  GridSpec g;
  g.counts = {16, 16};
  const auto values = grid_eval(field, g);
  double worst = 0.0;
  for (std::size_t f = 0; f < g.total(); ++f) {
    const auto t = unflatten(g, f);
    worst = std::max(worst, std::abs(values.at(t) - eval_D(n, TorusPoint(node_point(g, t)))));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("grid_eval of a constant field is all ones") {
  CoefficientField c(std::vector<int>{3, 2}, FieldTag::custom);
  c[0] = 1.0;
  GridSpec g;
  g.counts = {6, 5};
  for (const auto& v : grid_eval(c, g).values) CHECK(std::abs(v - cplx(1.0)) < 1e-14);
}

TEST_CASE("grid_eval agrees with direct synthesis and satisfies Parseval") {
  PointSampler sampler(99);
  for (const auto& n : std::vector<std::vector<double>>{{7.3, 19.6}, {5, 9.5, 23}}) {
    const auto field = fractional_coefficients(DilationVector(n));
    const auto g = GridSpec::covering(field.extents(), 3);
    const auto values = grid_eval(field, g);
    double sq = 0.0;
    for (const auto& v : values.values) sq += std::norm(v);
    CHECK(sq / static_cast<double>(g.total()) == doctest::Approx(field.energy()).epsilon(1e-10));
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t flat = static_cast<std::size_t>(sampler.uniform() * static_cast<double>(g.total()));
      const auto t = unflatten(g, flat);
      CHECK(std::abs(values.at(t) - synthesize_at(field, node_point(g, t))) < 1e-10);
    }
  }
}

TEST_CASE("grid needs at least the box extent per axis") {
  CoefficientField c(std::vector<int>{5}, FieldTag::custom);
  GridSpec g;
  g.counts = {4};
  CHECK_THROWS_AS(grid_eval(c, g), InvalidArgument);
}

TEST_CASE("sliced grids") {
  const DilationVector n{3.7, 6.1};
  GridSpec g;
  g.counts = {16, 20};
  SUBCASE("S row at x_d = 0 is sum Lambda_d(k') e^{i k' x'}") {
    const auto s = grid_eval_sliced(n, SliceKernel::S, g);
    const auto coeffs = slice_coefficients(n, SliceKernel::S, 0.0);
    for (std::size_t i = 0; i < 16; ++i) {
      const std::vector<std::size_t> t{i, 10};
      CHECK(std::abs(s.at(t) - synthesize_at(coeffs, std::vector<double>{g.node(0, i)})) < 1e-10);
    }
  }
  SUBCASE("Fcomposite is zero when every Lambda_d is integral") {
    const auto f = grid_eval_sliced(DilationVector{4, 8}, SliceKernel::Fcomposite, g);
    for (const auto& v : f.values) CHECK(v == cplx(0.0));
  }
  SUBCASE("D grid equals S - Fcomposite + R within the tail bound at every node") {
    const int nu_max = 512;
    const auto s = grid_eval_sliced(n, SliceKernel::S, g, nu_max);
    const auto fc = grid_eval_sliced(n, SliceKernel::Fcomposite, g, nu_max);
    const auto r = grid_eval_sliced(n, SliceKernel::R, g, nu_max);
    const auto d = grid_eval(indicator_coefficients(SimplexLattice::build(n, 2)), g);
    const SimplexKernels k(n);
    for (std::size_t f = 0; f < g.total(); ++f) {
      const double x_d = g.node(1, f % 20);
      const double bound = remainder_tail_bound(k.base_points(), x_d, nu_max) + 1e-9 * k.lattice_points();
      CHECK(std::abs(d.values[f] - (s.values[f] - fc.values[f] + r.values[f])) <= bound);
    }
  }
  CHECK_THROWS_AS(grid_eval_sliced(n, SliceKernel::Rdelta, g), InvalidArgument);
}
