#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lebesgue {

/// Relative distance to the nearest integer below which a computed bound is
/// taken as exactly integral. Keeps boundary lattice points such as
/// k = (20, 0) for n = (20, 23) from being lost to roundoff in n_s/n_j.
inline constexpr double kIntegralSnap = 1e-11;

/// Rounds `value` to the nearest integer when it lies within
/// kIntegralSnap * max(1, scale) of it; otherwise returns it unchanged.
double snap_integral(double value, double scale);

/// Floor and fractional part of an already snapped value.
long long floor_of(double snapped);
double frac_of(double snapped);

/// The dilation tuple n = (n_1, ..., n_d) of the simplex
/// { xi >= 0 : sum_j xi_j / n_j <= 1 }. Entries are positive reals; they need
/// not be integers or sorted.
class DilationVector {
 public:
  explicit DilationVector(std::vector<double> entries);
  DilationVector(std::initializer_list<double> entries);

  std::size_t dim() const noexcept { return entries_.size(); }
  double operator[](std::size_t j) const { return entries_[j]; }
  std::span<const double> entries() const noexcept { return entries_; }

  bool sorted_ascending() const noexcept;

  /// m^{(s)} = (n_{s+1}/n_1, ..., n_{s+1}/n_s) for 1 <= s < dim().
  std::vector<double> ratios(std::size_t s) const;

  /// First s entries.
  DilationVector head(std::size_t s) const;

  /// Entries with `value` appended.
  DilationVector append(double value) const;

  /// Product of natural logarithms of the entries.
  double log_product() const;

  /// Rendering used for cache keys and CSV echo (12 significant digits).
  std::string key() const;

 private:
  std::vector<double> entries_;
};

/// Evaluates the nested lattice bounds
///   Lambda_1 = n_1,  Lambda_s(xi) = n_s - (m^{(s-1)}, xi)   (2 <= s <= d)
class LambdaEvaluator {
 public:
  explicit LambdaEvaluator(DilationVector n);

  const DilationVector& dilation() const noexcept { return n_; }

  /// Lambda_s with s = xi.size() + 1, evaluated as n_s - sum m_j xi_j.
  double operator()(std::span<const double> xi) const;

  /// Same bound through n_s (1 - sum xi_j / n_j); used as a cross-check.
  double scaled_form(std::span<const double> xi) const;

  /// Lambda_s at an integer point, snapped to an integer when within tolerance.
  double at_lattice(std::span<const int> k) const;

 private:
  DilationVector n_;
  std::vector<std::vector<double>> ratios_;  // ratios_[s-1] = m^{(s-1)}
};

}  // namespace lebesgue
