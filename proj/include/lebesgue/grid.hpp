#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lebesgue/lattice.hpp"

namespace lebesgue {

/// Smallest integer >= n whose prime factors are all in {2, 3, 5, 7}.
std::size_t smooth_size(std::size_t n);

/// Uniform torus grid: node t_j on axis j sits at -pi + 2 pi t_j / M_j.
struct GridSpec {
  std::vector<std::size_t> counts;
  int rho = 4;

  /// M_j = smooth_size(rho * extent_j).
  static GridSpec covering(std::span<const int> extents, int rho);

  std::size_t dim() const noexcept { return counts.size(); }
  std::size_t total() const noexcept;
  GridSpec doubled() const;
  double node(std::size_t axis, std::size_t t) const;
  std::string label() const;  // "M1xM2x..."
};

/// Kernel values on every node of a GridSpec, last axis fastest.
struct GridField {
  GridSpec spec;
  std::vector<cplx> values;
  std::string provenance;

  cplx at(std::span<const std::size_t> t) const;
};

/// Synthesizes sum_k c[k] e^{i(k, x)} on all nodes of a grid with one
/// backward transform. Since x_t = -pi + 2 pi t / M,
///   sum_k c[k] e^{i(k,x_t)} = sum_k (c[k] (-1)^{|k|}) e^{2 pi i (k,t)/M},
/// so the weights are sign-flipped by the parity of k_1 + ... + k_s and then
/// transformed with kernel e^{+2 pi i (k,t)/M}. Owns its work buffer; one
/// instance per worker thread.
class GridSynthesizer {
 public:
  GridSynthesizer(std::vector<int> extents, std::vector<std::size_t> counts);
  ~GridSynthesizer();
  GridSynthesizer(GridSynthesizer&&) noexcept;
  GridSynthesizer& operator=(GridSynthesizer&&) noexcept;

  const std::vector<std::size_t>& counts() const noexcept;
  std::size_t total() const noexcept;

  /// Values at all nodes; the span stays valid until the next call.
  std::span<const cplx> synthesize(std::span<const cplx> box_weights);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

GridField grid_eval(const CoefficientField& field, const GridSpec& grid);

/// Full d-dimensional grid of a sliced kernel, one (d-1)-dimensional
/// synthesis per x_d node. Rdelta is not accepted (it needs a shift).
GridField grid_eval_sliced(const DilationVector& n, SliceKernel kind, const GridSpec& grid, int nu_max = 4096);

}  // namespace lebesgue
