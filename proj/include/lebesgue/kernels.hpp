#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lebesgue/lattice.hpp"

namespace lebesgue {

/// A point of the torus (-pi, pi]^s; coordinates are reduced on construction.
class TorusPoint {
 public:
  explicit TorusPoint(std::vector<double> coords);
  TorusPoint(std::initializer_list<double> coords) : TorusPoint(std::vector<double>(coords)) {}

  std::size_t dim() const noexcept { return x_.size(); }
  double operator[](std::size_t j) const { return x_[j]; }
  std::span<const double> coords() const noexcept { return x_; }

  /// First dim()-1 coordinates.
  TorusPoint head() const;

 private:
  std::vector<double> x_;
};

/// Reduces an angle into (-pi, pi].
double reduce_angle(double x);

struct RemainderValue {
  cplx value;
  double tail_bound;  // bound on the discarded |nu| > nu_max terms
};

/// Closed-form bound on the discarded part of the nu-series of R:
///   (2 P' |x_d| / pi^2) * ln(2N / (2N - 1)),  N = nu_max.
double remainder_tail_bound(double lattice_points, double x_d, int nu_max);

/// Pointwise evaluation of the simplex kernels of one dilation vector.
/// Holds the (d-1)-lattice and its Lambda_d values; immutable and shareable.
class SimplexKernels {
 public:
  explicit SimplexKernels(const DilationVector& n, std::uint64_t budget = kDefaultMemoryBudget);

  const DilationVector& dilation() const noexcept { return lattice_.dilation(); }
  std::size_t dim() const noexcept { return dilation().dim(); }
  /// Point count P of the d-dimensional lattice.
  double lattice_points() const noexcept { return full_count_; }
  /// Point count P' of the (d-1)-lattice.
  double base_points() const noexcept { return static_cast<double>(lattice_.size()); }
  const SimplexLattice& base_lattice() const noexcept { return lattice_; }

  /// D_n(x); innermost axis aggregated as a geometric series.
  cplx dirichlet(const TorusPoint& x) const;
  /// F_n(x') with x' of dimension d-1 (ignored for d = 1, where F = {n_1}).
  cplx fractional(std::span<const double> x_prime) const;
  /// S_n(x) from its mode weights.
  cplx s_kernel(const TorusPoint& x) const;
  /// S_n(x) through (1/(i x_d)) delta_{n_d x_d, 1/n'} D_{n'}(x').
  cplx s_kernel_delta_form(const TorusPoint& x) const;
  /// e^{i n_d x_d} F_n(x' - x_d m^{(d-1)})
  cplx fcomposite(const TorusPoint& x) const;
  /// Same term from the slice weights {Lambda_d} e^{i Lambda_d x_d}.
  cplx fcomposite_from_weights(const TorusPoint& x) const;
  /// R_n(x) truncated at |nu| <= nu_max, with the tail bound.
  RemainderValue remainder(const TorusPoint& x, int nu_max) const;

 private:
  cplx mode_sum(std::span<const double> x_prime, auto&& weight) const;

  SimplexLattice lattice_;
  double full_count_;
};

cplx eval_D(const DilationVector& n, const TorusPoint& x);
cplx eval_F(const DilationVector& n, const TorusPoint& x_prime);
cplx eval_S(const DilationVector& n, const TorusPoint& x);
RemainderValue eval_R(const DilationVector& n, const TorusPoint& x, int nu_max);

/// Exact Fourier-side action of delta_{h, xi} f = e^{ih} f(x - h xi) - f(x):
/// c[k] -> (e^{ih(1 - (xi, k))} - 1) c[k].
CoefficientField apply_delta(const CoefficientField& field, double h, std::span<const double> xi);

/// Direct evaluation of sum_k c[k] e^{i(k, x)}.
cplx synthesize_at(const CoefficientField& field, std::span<const double> x);

}  // namespace lebesgue
