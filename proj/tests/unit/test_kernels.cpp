#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "lebesgue/errors.hpp"
#include "lebesgue/kernels.hpp"
#include "lebesgue/norms.hpp"

using namespace lebesgue;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

// Plain sum over the bounding box with a floating membership test.
cplx brute_D(const std::vector<double>& n, const std::vector<double>& x) {
  cplx sum = 0.0;
  std::vector<int> k(n.size(), 0);
  for (;;) {
    double t = 0.0, phase = 0.0;
    for (std::size_t j = 0; j < n.size(); ++j) {
      t += k[j] / n[j];
      phase += k[j] * x[j];
    }
    if (t <= 1.0 + 1e-12) sum += std::polar(1.0, phase);
    std::size_t j = 0;
    while (j < n.size() && ++k[j] > static_cast<int>(std::floor(n[j]))) k[j++] = 0;
    if (j == n.size()) break;
  }
  return sum;
}

// Sum over the (d-1)-lattice of w(Lambda_d(k')) e^{i(k', x')}.
template <class W>
cplx brute_modes(const std::vector<double>& n, const std::vector<double>& xp, W&& w) {
  std::vector<double> head(n.begin(), n.end() - 1);
  cplx sum = 0.0;
  std::vector<int> k(head.size(), 0);
  for (;;) {
    double t = 0.0, phase = 0.0;
    for (std::size_t j = 0; j < head.size(); ++j) {
      t += k[j] / head[j];
      phase += k[j] * xp[j];
    }
    if (t <= 1.0 + 1e-12) {
      double lambda = n.back() * (1.0 - t);
      if (std::fabs(lambda - std::round(lambda)) < 1e-9) lambda = std::round(lambda);
      sum += w(lambda) * std::polar(1.0, phase);
    }
    std::size_t j = 0;
    while (j < head.size() && ++k[j] > static_cast<int>(std::floor(head[j]))) k[j++] = 0;
    if (j == head.size()) break;
  }
  return sum;
}

}  // namespace

TEST_CASE("torus points reduce into (-pi, pi]") {
  CHECK(reduce_angle(kPi) == doctest::Approx(kPi));
  CHECK(reduce_angle(-kPi) == doctest::Approx(kPi));
  CHECK(reduce_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  const TorusPoint p{7.0, -0.5};
  CHECK(p[0] == doctest::Approx(7.0 - 2 * kPi));
  CHECK(p.head().dim() == 1);
}

TEST_CASE("eval_D matches the brute-force lattice sum") {
  const std::vector<std::vector<double>> ns = {{5.5}, {2, 3}, {7.3, 19.6}, {5, 9.5, 23}, {1.5, 3.7, 2}};
  PointSampler sampler(11);
  for (const auto& n : ns) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto x = sampler.torus_point(n.size());
      const cplx got = eval_D(DilationVector(n), TorusPoint(x));
      CHECK(std::abs(got - brute_D(n, x)) < 1e-9);
    }
    const std::vector<double> zero(n.size(), 0.0);
    CHECK(std::abs(eval_D(DilationVector(n), TorusPoint(zero)) - brute_D(n, zero)) < 1e-9);
  }
}

TEST_CASE("eval_F and eval_S match their defining sums") {
  const std::vector<double> n{7.3, 19.6};
  const std::vector<double> x{0.4, -1.1};
  const cplx f = eval_F(DilationVector(n), TorusPoint({x[0]}));
  CHECK(std::abs(f - brute_modes(n, {x[0]}, [](double l) { return cplx(l - std::floor(l)); })) < 1e-10);
  const cplx s = eval_S(DilationVector(n), TorusPoint(x));
  const cplx s_ref = brute_modes(n, {x[0]}, [&](double l) { return (std::exp(I * l * x[1]) - 1.0) / (I * x[1]); });
  CHECK(std::abs(s - s_ref) < 1e-9);
}

TEST_CASE("S in weight form equals the delta form") {
  PointSampler sampler(3);
  for (const auto& n : std::vector<std::vector<double>>{{2, 3}, {7.3, 19.6}, {5, 9.5, 23}}) {
    const SimplexKernels k{DilationVector(n)};
    for (int rep = 0; rep < 10; ++rep) {
      const TorusPoint x(sampler.torus_point(n.size()));
      const cplx a = k.s_kernel(x);
      const cplx b = k.s_kernel_delta_form(x);
      CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("composite F term by shift equals its weight form") {
  PointSampler sampler(5);
  const SimplexKernels k(DilationVector{5, 9.5, 23});
  for (int rep = 0; rep < 10; ++rep) {
    const TorusPoint x(sampler.torus_point(3));
    CHECK(std::abs(k.fcomposite(x) - k.fcomposite_from_weights(x)) < 1e-9);
  }
}

TEST_CASE("conjugate symmetry of D, F and S") {
  const DilationVector n{3.7, 6.1};
  const TorusPoint x{0.9, -2.2};
  const TorusPoint mx{-0.9, 2.2};
  CHECK(std::abs(eval_D(n, mx) - std::conj(eval_D(n, x))) < 1e-12);
  CHECK(std::abs(eval_S(n, mx) - std::conj(eval_S(n, x))) < 1e-10);
  CHECK(std::abs(eval_F(n, TorusPoint{-0.9}) - std::conj(eval_F(n, TorusPoint{0.9}))) < 1e-12);
}

TEST_CASE("periodicity in the first d-1 axes") {
  const DilationVector n{3.7, 6.1};
  const SimplexKernels k(n);
  const double a = 0.3, b = 1.7;
  // TorusPoint reduces coordinates, so shift through the raw sums instead.
  const cplx base = brute_modes({3.7, 6.1}, {a}, [&](double l) { return (std::exp(I * l * b) - 1.0) / (I * b); });
  const cplx moved =
      brute_modes({3.7, 6.1}, {a + 2 * kPi}, [&](double l) { return (std::exp(I * l * b) - 1.0) / (I * b); });
  CHECK(std::abs(base - moved) < 1e-10);
  CHECK(std::abs(k.s_kernel(TorusPoint{a, b}) - base) < 1e-10);
  CHECK(std::abs(eval_D(n, TorusPoint{a, b}) - brute_D({3.7, 6.1}, {a + 2 * kPi, b - 2 * kPi})) < 1e-10);
}

TEST_CASE("F vanishes identically when all Lambda_d are integral") {
  const DilationVector n{20, 60};
  for (double x : {0.0, 0.3, -2.9}) CHECK(std::abs(eval_F(n, TorusPoint{x})) == 0.0);
}

TEST_CASE("decomposition D = S - e^{i n_d x_d} F(x' - x_d m) + R holds within the tail bound") {
  PointSampler sampler(2024);
  for (const auto& n : std::vector<std::vector<double>>{{2, 3}, {7.3, 19.6}, {5, 9.5, 23}, {1.5, 3.7, 2}}) {
    const SimplexKernels k{DilationVector(n)};
    for (int rep = 0; rep < 20; ++rep) {
      const TorusPoint x(sampler.torus_point(n.size()));
      const auto p = check_identity_at(k, x, 1024);
      CHECK(p.residual <= p.tail_bound + 1e-9 * k.lattice_points());
    }
  }
}

TEST_CASE("R at x_d = 0 reduces to D_{n'}(x')") {
  const DilationVector n{7.3, 19.6};
  const SimplexKernels k(n);
  for (double x1 : {0.0, 0.8, -2.5}) {
    const auto r = k.remainder(TorusPoint{x1, 0.0}, 64);
    CHECK(std::abs(r.value - eval_D(DilationVector{7.3}, TorusPoint{x1})) < 1e-12);
    CHECK(r.tail_bound == 0.0);
  }
}

TEST_CASE("tail bound dominates the discarded nu-terms") {
  const DilationVector n{7.3, 19.6};
  const SimplexKernels k(n);
  PointSampler sampler(8);
  for (int rep = 0; rep < 10; ++rep) {
    const TorusPoint x(sampler.torus_point(2));
    const auto coarse = k.remainder(x, 32);
    const auto fine = k.remainder(x, 32 * 64);
    CHECK(std::abs(coarse.value - fine.value) <= coarse.tail_bound);
    CHECK(fine.tail_bound < coarse.tail_bound);
  }
  CHECK_THROWS_AS(k.remainder(TorusPoint{0.1, 0.2}, 0), InvalidArgument);
}

TEST_CASE("tail bound closed form") {
  const double b = remainder_tail_bound(10.0, 0.5, 100);
  CHECK(b == doctest::Approx(2 * 10.0 * 0.5 / (kPi * kPi) * std::log(200.0 / 199.0)).epsilon(1e-12));
  // integral comparison overestimates the explicit tail sum
  double explicit_tail = 0.0;
  for (int nu = 101; nu < 2000000; ++nu) explicit_tail += 2 * 2 * 10.0 * 0.5 / (2 * kPi * nu * (2 * kPi * nu - kPi));
  CHECK(explicit_tail <= b);
}

TEST_CASE("apply_delta is the Fourier-side action of delta_{h, xi}") {
  const DilationVector n{3.7, 6.1, 5};
  const auto field = fractional_coefficients(n);
  const std::vector<double> xi{1.0 / 3.7, 1.0 / 6.1};
  const double h = 2.3;
  const auto shifted = apply_delta(field, h, xi);
  const std::vector<double> x{0.4, -1.2};
  const std::vector<double> back{x[0] - h * xi[0], x[1] - h * xi[1]};
  const cplx expect = std::polar(1.0, h) * synthesize_at(field, back) - synthesize_at(field, x);
  CHECK(std::abs(synthesize_at(shifted, x) - expect) < 1e-10);
  const std::vector<double> wrong{1.0};
  CHECK_THROWS_AS(apply_delta(field, h, wrong), InvalidArgument);
}
