#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "lebesgue/errors.hpp"
#include "lebesgue/grid.hpp"
#include "lebesgue/kernels.hpp"

namespace lebesgue {

enum class KernelKind { D, F, S, Fcomposite, R };

const char* to_string(KernelKind kind);
KernelKind parse_kernel(const std::string& name);

struct NormOptions {
  double tol = 1e-3;       // relative change between successive refinements
  int rho = 4;             // oversampling of the coarsest grid
  int max_doublings = 4;
  int nu_max = 4096;       // R kernel only
  std::uint64_t memory_budget = kDefaultMemoryBudget;
  unsigned workers = 1;
};

struct RefinementStep {
  std::vector<std::size_t> grid;
  double value;
};

/// An L1 norm ||f||_(s) = int_{T^s} |f| computed by Riemann sums on
/// successively doubled grids.
struct NormResult {
  std::string kernel;
  std::size_t dim = 0;
  double value = 0.0;       // plain integral
  double normalized = 0.0;  // value / (2 pi)^s
  std::vector<std::size_t> grid;
  std::vector<RefinementStep> history;
  double error_estimate = 0.0;  // |last - previous|
  bool converged = false;
  /// Largest relative Parseval defect seen on any synthesized slice.
  double parseval_rel_error = 0.0;
  /// (2 pi)^{-s} int |f|^2 on the final grid when f is a trigonometric
  /// polynomial sampled exactly (D, F, coefficient fields); NaN otherwise.
  double l2_normalized;
  /// Sum of |c_k|^2 (P for D); NaN when not applicable.
  double coefficient_energy;

  NormResult();
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(NormResult result);
  const NormResult& result() const noexcept { return result_; }

 private:
  NormResult result_;
};

struct IdentityPoint {
  std::vector<double> x;
  cplx lhs;
  cplx rhs;
  double residual;
  double tail_bound;
};

struct IdentityReport {
  std::vector<IdentityPoint> points;
  double lattice_points = 0.0;
  int nu_max = 0;
  double max_residual = 0.0;
  double median_residual = 0.0;
  bool passed = true;
  /// Indices of points exceeding tail_bound + 1e-9 P, worst first.
  std::vector<std::size_t> failures;
};

/// Residual of D = S - e^{i n_d x_d} F(x' - x_d m) + R at one point.
IdentityPoint check_identity_at(const SimplexKernels& kernels, const TorusPoint& x, int nu_max);

enum class MuRange {
  theorem,  // 1 <= |mu| <= [n_{k-l} / n_1]
  proof,    // 1 <= |mu| <= [n_{k-l} / (2 n_1)]
};

const char* to_string(MuRange range);

struct FrakOptions {
  int t_nodes = 64;
  MuRange mu_range = MuRange::theorem;
};

struct FrakMuTerm {
  int mu;
  double integral;         // refined trapezoid
  double integral_coarse;  // t_nodes trapezoid
};

struct FrakTerm {
  int l;
  std::vector<double> full;     // (n_1 1^l, n^{k-l})
  std::vector<double> swapped;  // (n_1 1^l, n^{k-l-1}, n_1)
  std::vector<double> reduced;  // (n~^{(l)}, n_1)
  double norm_full;
  double norm_swapped;
  double norm_reduced;
  int mu_max;
  std::vector<FrakMuTerm> mu_terms;
  double mu_sum;  // sum_mu integral / |mu|
};

struct FrakFValue {
  int k = 0;
  double value = 0.0;
  std::vector<FrakTerm> terms;
  int t_nodes = 0;
  double t_error = 0.0;  // change of the value under t-refinement
  bool zero_dim_convention = false;
  MuRange mu_range = MuRange::theorem;

  /// 2 pi sum_l (norm_full - norm_swapped + mu_sum), recomputed from terms.
  double recompute() const;
};

/// Quadrature front end: L1 norms of kernels and coefficient fields, the
/// decomposition check, the frak-F functional and the shifted double
/// integral. Norms of kernels are memoized; the cache is thread-safe.
class NormEngine {
 public:
  explicit NormEngine(NormOptions options = {});

  const NormOptions& options() const noexcept { return options_; }

  NormResult l1_norm(KernelKind kind, const DilationVector& n);
  NormResult field_norm(const CoefficientField& field) const;

  IdentityReport verify_identity(const DilationVector& n, std::size_t num_points, int nu_max,
                                 std::uint64_t seed) const;

  FrakFValue frak_f(int k, const DilationVector& n, const FrakOptions& frak = {});

  /// int_T int_T |e^{i(alpha y + beta)} D_n(x - y) - D_n(x)| dx dy
  NormResult double_integral_ld2(double n, double alpha, double beta) const;

  std::size_t cache_size() const;

 private:
  NormResult compute_kernel_norm(KernelKind kind, const DilationVector& n) const;

  NormOptions options_;
  mutable std::mutex cache_mutex_;
  std::map<std::string, NormResult> cache_;
};

/// Uniform doubles in [0, 1) from the top 53 bits of a 64-bit generator.
class PointSampler {
 public:
  explicit PointSampler(std::uint64_t seed);
  double uniform();
  std::vector<double> torus_point(std::size_t dim);

 private:
  std::mt19937_64 rng_;
};

}  // namespace lebesgue
