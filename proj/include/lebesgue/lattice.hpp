#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lebesgue/dilation.hpp"

namespace lebesgue {

using cplx = std::complex<double>;

/// Default cap on lattice points and dense grid entries (2^31).
inline constexpr std::uint64_t kDefaultMemoryBudget = std::uint64_t{1} << 31;

/// Integer points 0 <= k_1 <= [Lambda_1], 0 <= k_2 <= [Lambda_2(k_1)], ... for
/// the first s coordinates of a dilation vector, in lexicographic order.
/// When s < d the bound Lambda_{s+1}(k) of the next axis is cached per point.
class SimplexLattice {
 public:
  static SimplexLattice build(const DilationVector& n, std::size_t s,
                              std::uint64_t budget = kDefaultMemoryBudget);

  const DilationVector& dilation() const noexcept { return n_; }
  std::size_t dim() const noexcept { return s_; }
  std::size_t size() const noexcept { return count_; }

  std::span<const int> point(std::size_t i) const {
    return {coords_.data() + i * s_, s_};
  }

  bool has_next_lambda() const noexcept { return s_ < n_.dim(); }
  /// Snapped Lambda_{s+1}(k) at point i.
  double next_lambda(std::size_t i) const { return next_lambda_[i]; }
  std::span<const double> next_lambdas() const noexcept { return next_lambda_; }

  /// Per-axis maxima + 1 (the bounding box of the stored points).
  const std::vector<int>& extents() const noexcept { return extents_; }

  /// Number of points of the (s+1)-dimensional lattice obtained by extending
  /// each point along the next axis: sum_k ([Lambda_{s+1}(k)] + 1).
  double extended_count() const;

 private:
  SimplexLattice(DilationVector n, std::size_t s) : n_(std::move(n)), s_(s) {}

  DilationVector n_;
  std::size_t s_;
  std::size_t count_ = 0;
  std::vector<int> coords_;
  std::vector<double> next_lambda_;
  std::vector<int> extents_;
};

/// Rough upper estimate of the point count of the s-dimensional lattice, used
/// to refuse oversized builds before allocating.
double estimate_lattice_points(const DilationVector& n, std::size_t s);

enum class FieldTag { indicator, fractional, slice_D, slice_S, slice_Fcomposite, slice_R, slice_Rdelta, delta, custom };

const char* to_string(FieldTag tag);

/// Dense complex weights c[k] on the integer box [0, M_1) x ... x [0, M_s),
/// row-major with the last axis fastest. A zero-dimensional field holds one
/// constant.
class CoefficientField {
 public:
  CoefficientField(std::vector<int> extents, FieldTag tag);

  std::size_t dim() const noexcept { return extents_.size(); }
  const std::vector<int>& extents() const noexcept { return extents_; }
  std::size_t size() const noexcept { return weights_.size(); }
  FieldTag tag() const noexcept { return tag_; }

  std::size_t flat_index(std::span<const int> k) const;
  cplx& at(std::span<const int> k) { return weights_[flat_index(k)]; }
  cplx at(std::span<const int> k) const { return weights_[flat_index(k)]; }
  cplx& operator[](std::size_t i) { return weights_[i]; }
  cplx operator[](std::size_t i) const { return weights_[i]; }
  std::span<cplx> weights() noexcept { return weights_; }
  std::span<const cplx> weights() const noexcept { return weights_; }

  /// Multi-index of flat entry i.
  std::vector<int> index_of(std::size_t i) const;

  /// sum_k |c[k]|^2
  double energy() const;

 private:
  std::vector<int> extents_;
  FieldTag tag_;
  std::vector<cplx> weights_;
};

/// Weight 1 on every lattice point.
CoefficientField indicator_coefficients(const SimplexLattice& lattice);

/// F_n weights {Lambda_d(k')} on the (d-1)-lattice; for d = 1 the
/// zero-dimensional constant {n_1}.
CoefficientField fractional_coefficients(const DilationVector& n,
                                         std::uint64_t budget = kDefaultMemoryBudget);

enum class SliceKernel { D, S, Fcomposite, R, Rdelta };

const char* to_string(SliceKernel kind);

/// Below this |x_d| the S weight uses Lambda + i Lambda^2 x_d / 2.
inline constexpr double kSingularityThreshold = 1e-8;

struct SliceOptions {
  int nu_max = 4096;               // R: truncation of the nu-series
  std::optional<double> shift;     // Rdelta: the h of delta_{h, 1/n'}
  bool allow_limit_branch = true;  // S: refuse |x_d| < threshold when false
};

/// Builds the (d-1)-dimensional weights whose Fourier synthesis in x' equals
/// the x_d-slice of a d-dimensional kernel:
///   D          sum_{k_d <= [Lambda_d]} e^{i k_d x_d}
///   S          (e^{i Lambda_d x_d} - 1) / (i x_d)
///   Fcomposite {Lambda_d} e^{i Lambda_d x_d}
///   R          the full remainder weight, nu-series truncated at nu_max
///   Rdelta     e^{i Lambda_d h / n_d} - 1   (delta_{h,1/n'} D_{n'})
/// The (d-1)-lattice is built once; fill() may then be called per slice.
class SliceBuilder {
 public:
  explicit SliceBuilder(const DilationVector& n, std::uint64_t budget = kDefaultMemoryBudget);

  const DilationVector& dilation() const noexcept { return lattice_.dilation(); }
  const SimplexLattice& lattice() const noexcept { return lattice_; }
  /// Box extents of the slice field (empty for d = 1).
  const std::vector<int>& extents() const noexcept { return extents_; }
  /// Lattice point count of the full d-dimensional lattice.
  double full_count() const noexcept { return full_count_; }

  CoefficientField make_field(SliceKernel kind) const;
  void fill(SliceKernel kind, double x_d, const SliceOptions& options, CoefficientField& out) const;

 private:
  SimplexLattice lattice_;
  std::vector<int> extents_;
  std::vector<std::size_t> flat_;  // flat box index of each lattice point
  double full_count_;
};

CoefficientField slice_coefficients(const DilationVector& n, SliceKernel kind, double x_d,
                                    const SliceOptions& options = {});

/// Weight of the remainder kernel at one mode with bound `lambda`, together
/// with the nu-truncation. Shared by the pointwise evaluator and slices.
cplx remainder_weight(double lambda, double x_d, int nu_max);

/// Weight of the S kernel at one mode (removable singularity handled).
cplx s_weight(double lambda, double x_d);

/// sum_{k=0}^{count-1} e^{i k x}
cplx geometric_sum(long long count, double x);

}  // namespace lebesgue
