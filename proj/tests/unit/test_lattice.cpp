#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include <gmpxx.h>

#include "lebesgue/errors.hpp"
#include "lebesgue/lattice.hpp"

using namespace lebesgue;

namespace {

// Exact decimal entries so that membership is decided in rational arithmetic.
struct ExactEntry {
  double value;
  mpq_class exact;
};

const std::vector<ExactEntry> kEntries = {
    {1.5, mpq_class(3, 2)}, {2.0, mpq_class(2)}, {3.7, mpq_class(37, 10)}, {5.0, mpq_class(5)}};

// All integer points of the bounding box with sum k_j / n_j <= 1, lexicographic.
std::vector<std::vector<int>> brute_force(const std::vector<ExactEntry>& n) {
  std::vector<std::vector<int>> out;
  std::vector<int> k(n.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == n.size()) {
      mpq_class sum = 0;
      for (std::size_t i = 0; i < n.size(); ++i) sum += mpq_class(k[i]) / n[i].exact;
      if (sum <= 1) out.push_back(k);
      return;
    }
    const int top = static_cast<int>(std::floor(n[j].value));
    for (k[j] = 0; k[j] <= top; ++k[j]) rec(j + 1);
  };
  rec(0);
  return out;
}

// Exact {Lambda_d(k')} = frac(n_d (1 - sum k_j / n_j)).
mpq_class exact_fraction(const std::vector<ExactEntry>& n, const std::vector<int>& k) {
  mpq_class t = 1;
  for (std::size_t j = 0; j < k.size(); ++j) t -= mpq_class(k[j]) / n[j].exact;
  mpq_class lambda = n.back().exact * t;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), lambda.get_num_mpz_t(), lambda.get_den_mpz_t());
  return lambda - mpq_class(fl);
}

}  // namespace

TEST_CASE("lattice equals the brute-force simplex points over mixed grids") {
  std::size_t checked = 0;
  for (std::size_t d = 1; d <= 3; ++d) {
    std::vector<std::size_t> idx(d, 0);
    for (;;) {
      std::vector<ExactEntry> n;
      std::vector<double> values;
      for (auto i : idx) {
        n.push_back(kEntries[i]);
        values.push_back(kEntries[i].value);
      }
      const auto expected = brute_force(n);
      const auto lattice = SimplexLattice::build(DilationVector(values), d);
      REQUIRE(lattice.size() == expected.size());
      for (std::size_t p = 0; p < lattice.size(); ++p) {
        const auto pt = lattice.point(p);
        CHECK(std::vector<int>(pt.begin(), pt.end()) == expected[p]);
      }
      ++checked;
      std::size_t j = 0;
      while (j < d && ++idx[j] == kEntries.size()) idx[j++] = 0;
      if (j == d) break;
    }
  }
  CHECK(checked == 4 + 16 + 64);
}

TEST_CASE("small lattice counts") {
  CHECK(SimplexLattice::build(DilationVector{2, 2}, 2).size() == 6);
  CHECK(SimplexLattice::build(DilationVector{3, 3}, 2).size() == 10);
  CHECK(SimplexLattice::build(DilationVector{0.5}, 1).size() == 1);
  CHECK(SimplexLattice::build(DilationVector{2, 3}, 0).size() == 1);
}

TEST_CASE("boundary points survive roundoff in the ratios") {
  // k = (20, 0) lies on the boundary of n = (20, 23)
  const auto lattice = SimplexLattice::build(DilationVector{20, 23}, 2);
  const auto last = lattice.point(lattice.size() - 1);
  CHECK(last[0] == 20);
  CHECK(last[1] == 0);
}

TEST_CASE("extended count of the (d-1)-lattice equals the full count") {
  const DilationVector n{3.7, 5, 2};
  const auto base = SimplexLattice::build(n, 2);
  const auto full = SimplexLattice::build(n, 3);
  CHECK(base.extended_count() == static_cast<double>(full.size()));
}

TEST_CASE("budget refuses oversized lattices before allocating") {
  try {
    SimplexLattice::build(DilationVector{1e4, 1e4, 1e4}, 3, 1u << 20);
    FAIL("expected a resource limit");
  } catch (const ResourceLimit& e) {
    CHECK(e.estimate() > static_cast<double>(1u << 20));
    CHECK(e.code() == ErrorCode::resource_limit);
  }
}

TEST_CASE("indicator field is one on the lattice and zero elsewhere") {
  const DilationVector n{3.7, 2};
  const auto lattice = SimplexLattice::build(n, 2);
  const auto field = indicator_coefficients(lattice);
  CHECK(field.extents() == std::vector<int>{4, 3});
  std::size_t ones = 0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const auto k = field.index_of(i);
    const bool inside = k[0] / 3.7 + k[1] / 2.0 <= 1.0;
    CHECK(field[i] == cplx(inside ? 1.0 : 0.0));
    ones += inside;
  }
  CHECK(ones == lattice.size());
  CHECK(field.energy() == static_cast<double>(lattice.size()));
}

TEST_CASE("fractional field holds {Lambda_d(k')} exactly") {
  for (const auto& pair : std::vector<std::vector<std::size_t>>{{0, 2}, {2, 3}, {1, 2, 0}, {2, 0, 3}}) {
    std::vector<ExactEntry> n;
    std::vector<double> values;
    for (auto i : pair) {
      n.push_back(kEntries[i]);
      values.push_back(kEntries[i].value);
    }
    const auto field = fractional_coefficients(DilationVector(values));
    const std::vector<ExactEntry> head(n.begin(), n.end() - 1);
    for (const auto& k : brute_force(head)) {
      const double w = field.at(k).real();
      CHECK(w >= 0.0);
      CHECK(w < 1.0);
      CHECK(w == doctest::Approx(exact_fraction(n, k).get_d()).epsilon(1e-12));
    }
  }
}

TEST_CASE("fractional field of d = 1 is the zero-dimensional constant {n_1}") {
  const auto f = fractional_coefficients(DilationVector{3.25});
  CHECK(f.dim() == 0);
  CHECK(f.size() == 1);
  CHECK(f[0].real() == doctest::Approx(0.25));
  CHECK(fractional_coefficients(DilationVector{4}).energy() == 0.0);
}

TEST_CASE("F field vanishes when every Lambda_d is integral") {
  const auto f = fractional_coefficients(DilationVector{20, 60});
  CHECK(f.energy() == 0.0);
}

TEST_CASE("S slice uses the limit branch at x_d = 0 and refuses it on request") {
  const DilationVector n{3.7, 5};
  const auto field = slice_coefficients(n, SliceKernel::S, 0.0);
  const LambdaEvaluator lambda(n);
  for (int k = 0; k <= 3; ++k) {
    const std::vector<int> kk{k};
    CHECK(field.at(kk).real() == doctest::Approx(lambda.at_lattice(kk)));
    CHECK(field.at(kk).imag() == doctest::Approx(0.0));
  }
  SliceOptions strict;
  strict.allow_limit_branch = false;
  CHECK_THROWS_AS(slice_coefficients(n, SliceKernel::S, 1e-12, strict), InvalidArgument);
  CHECK_NOTHROW(slice_coefficients(n, SliceKernel::S, 0.5, strict));
}

TEST_CASE("slice weights match their closed forms") {
  const DilationVector n{2.5, 4.2};
  const LambdaEvaluator lambda(n);
  const double x = 0.7;
  const auto s = slice_coefficients(n, SliceKernel::S, x);
  const auto fc = slice_coefficients(n, SliceKernel::Fcomposite, x);
  SliceOptions shifted;
  shifted.shift = 1.3;
  const auto rd = slice_coefficients(n, SliceKernel::Rdelta, x, shifted);
  for (int k = 0; k <= 2; ++k) {
    const std::vector<int> kk{k};
    const double l = lambda.at_lattice(kk);
    const cplx i(0.0, 1.0);
    const cplx expect_s = (std::exp(i * l * x) - 1.0) / (i * x);
    CHECK(std::abs(s.at(kk) - expect_s) < 1e-13);
    CHECK(std::abs(fc.at(kk) - (l - std::floor(l)) * std::exp(i * l * x)) < 1e-13);
    CHECK(std::abs(rd.at(kk) - (std::exp(i * l * 1.3 / 4.2) - 1.0)) < 1e-13);
  }
  CHECK_THROWS_AS(slice_coefficients(n, SliceKernel::Rdelta, x), InvalidArgument);
  CHECK_THROWS_AS(slice_coefficients(DilationVector{3}, SliceKernel::S, x), InvalidArgument);
}

TEST_CASE("geometric sums") {
  const double x = 0.37;
  cplx direct = 0.0;
  for (int k = 0; k < 9; ++k) direct += std::polar(1.0, k * x);
  CHECK(std::abs(geometric_sum(9, x) - direct) < 1e-13);
  CHECK(geometric_sum(9, 0.0) == cplx(9.0));
  CHECK(std::abs(geometric_sum(9, 2 * M_PI) - cplx(9.0)) < 1e-12);
  CHECK(geometric_sum(0, x) == cplx(0.0));
}
