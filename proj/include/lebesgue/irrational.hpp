#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lebesgue/norms.hpp"

namespace lebesgue {

enum class AlphaKind { rational, quadratic, liouville, decimal };

const char* to_string(AlphaKind kind);

/// A real alpha that can be expanded and evaluated exactly or to certified
/// precision. Rational, Liouville truncations and decimal literals are exact
/// rationals; quadratic irrationals are kept as (P + sqrt(D)) / Q.
class AlphaSpec {
 public:
  /// rational:p/q | rational:p | golden | sqrt:D | liouville:b,m | dec:[-]d.ddd
  static AlphaSpec parse(const std::string& text);

  static AlphaSpec rational(const mpz_class& p, const mpz_class& q);
  static AlphaSpec golden();
  static AlphaSpec quadratic(const mpz_class& P, const mpz_class& D, const mpz_class& Q);
  /// sum_{k=1}^{m} b^{-k!}
  static AlphaSpec liouville(unsigned long base, unsigned depth);
  static AlphaSpec decimal(const std::string& literal);

  AlphaKind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  bool is_exact_rational() const noexcept { return kind_ != AlphaKind::quadratic; }
  /// The exact value; only for exact rationals.
  const mpq_class& exact() const;
  double to_double() const;

  /// (P + sqrt(D)) / Q (quadratic irrationals only).
  const mpz_class& surd_P() const noexcept { return P_; }
  const mpz_class& surd_D() const noexcept { return D_; }
  const mpz_class& surd_Q() const noexcept { return Q_; }

  unsigned long liouville_base() const noexcept { return base_; }
  unsigned liouville_depth() const noexcept { return depth_; }
  /// b^{j!}, j = 1..m (Liouville truncations only).
  std::vector<mpz_class> liouville_denominators() const;

  /// Starting working precision in bits for irrational evaluation.
  unsigned precision_bits = 256;

 private:
  AlphaKind kind_ = AlphaKind::rational;
  std::string label_;
  mpq_class exact_;
  mpz_class P_, D_, Q_;
  unsigned long base_ = 0;
  unsigned depth_ = 0;
};

struct ContinuedFraction {
  mpz_class a0;
  std::vector<mpz_class> quotients;  // a_1, a_2, ...
  std::vector<mpz_class> p;          // convergent numerators p_0, p_1, ...
  std::vector<mpz_class> q;          // convergent denominators
  bool terminated = false;           // the exact finite expansion of a rational
  bool precision_exhausted = false;  // true when only a certified prefix is returned
};

/// Exact Euclid for rationals, the exact surd recurrence for quadratic
/// irrationals; at most max_terms partial quotients after a_0.
ContinuedFraction cf_expand(const AlphaSpec& alpha, std::size_t max_terms);

/// {alpha k}, k = 0..n, each within 2^-40 of the exact value.
std::vector<double> fractional_parts(const AlphaSpec& alpha, std::size_t n);

/// Coefficient field of sum_{k <= n} {alpha k} e^{ikx}.
CoefficientField alpha_field(const AlphaSpec& alpha, std::size_t n);

/// I_n(alpha) = int_{-pi}^{pi} |sum_{0 <= k <= n} {alpha k} e^{ikx}| dx
NormResult I_n(const NormEngine& engine, const AlphaSpec& alpha, std::size_t n);

/// Riemann sum of |sum_k {pk/q} e^{ikx}| on m nodes, built from one period of
/// weights and geometric sums in e^{iqx}. Exact rationals only.
double rational_period_norm(const AlphaSpec& alpha, std::size_t n, std::size_t m);

struct RatioRecord {
  std::size_t n;
  double I_n;
  double ratio;  // I_n / ln^2 n
  bool is_convergent_q;
  double running_min;
  double running_max;
  bool converged;
};

struct RatioStudy {
  std::vector<RatioRecord> records;
  double omega_estimate = 0.0;  // running min over the grid, a finite-n estimator
  double Omega_estimate = 0.0;  // running max
};

/// Ratios I_n / ln^2 n along an increasing grid with entries >= 2.
RatioStudy study_ratio(const NormEngine& engine, const AlphaSpec& alpha, const std::vector<std::size_t>& n_grid);

struct DipReport {
  std::vector<std::size_t> designated;  // convergent denominators in range
  std::vector<double> designated_ratios;
  double generic_median = 0.0;
  double dip_factor = 0.0;  // generic median / min designated ratio; NaN when none
  RatioStudy generic;
};

/// Compares ratios at convergent denominators inside [min, max] of the grid
/// with the median over the remaining grid points. Liouville truncations use
/// their denominators b^{j!}; rational alpha gives an empty designated set.
DipReport liouville_dip_scan(const NormEngine& engine, const AlphaSpec& alpha, const std::vector<std::size_t>& n_grid);

/// Convergent denominators q_k with lo <= q_k <= hi.
std::vector<std::size_t> convergent_denominators(const AlphaSpec& alpha, std::size_t lo, std::size_t hi);

}  // namespace lebesgue
