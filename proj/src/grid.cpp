#include "lebesgue/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include "lebesgue/errors.hpp"

namespace lebesgue {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_smooth(std::size_t n) {
  for (std::size_t p : {2u, 3u, 5u, 7u}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

}  // namespace

std::size_t smooth_size(std::size_t n) {
  if (n <= 1) return 1;
  while (!is_smooth(n)) ++n;
  return n;
}

GridSpec GridSpec::covering(std::span<const int> extents, int rho) {
  if (rho < 1) throw InvalidArgument("oversampling factor must be at least 1");
  GridSpec g;
  g.rho = rho;
  for (int e : extents) g.counts.push_back(smooth_size(static_cast<std::size_t>(rho) * static_cast<std::size_t>(e)));
  return g;
}

std::size_t GridSpec::total() const noexcept {
  std::size_t t = 1;
  for (auto c : counts) t *= c;
  return t;
}

GridSpec GridSpec::doubled() const {
  GridSpec g = *this;
  g.rho *= 2;
  for (auto& c : g.counts) c *= 2;
  return g;
}

double GridSpec::node(std::size_t axis, std::size_t t) const {
  return -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(counts[axis]);
}

std::string GridSpec::label() const {
  std::string s;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (j) s += 'x';
    s += std::to_string(counts[j]);
  }
  return s.empty() ? "1" : s;
}

cplx GridField::at(std::span<const std::size_t> t) const {
  if (t.size() != spec.dim()) throw InvalidArgument("grid index dimension mismatch");
  std::size_t idx = 0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (t[j] >= spec.counts[j]) throw InvalidArgument("grid index out of range");
    idx = idx * spec.counts[j] + t[j];
  }
  return values[idx];
}

struct GridSynthesizer::Impl {
  std::vector<int> extents;
  std::vector<std::size_t> counts;
  std::size_t total = 1;
  fftw_complex* buffer = nullptr;
  fftw_plan plan = nullptr;
  std::vector<std::size_t> target;  // grid flat index of each box entry
  std::vector<double> sign;         // (-1)^{|k|}

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (plan) fftw_destroy_plan(plan);
    if (buffer) fftw_free(buffer);
  }
};

GridSynthesizer::GridSynthesizer(std::vector<int> extents, std::vector<std::size_t> counts)
    : impl_(std::make_unique<Impl>()) {
  if (extents.size() != counts.size()) throw InvalidArgument("grid and field dimensions differ");
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] < static_cast<std::size_t>(extents[j])) {
      throw InvalidArgument("grid axis " + std::to_string(j + 1) + " has fewer nodes than the field extent");
    }
    impl_->total *= counts[j];
  }
  impl_->extents = std::move(extents);
  impl_->counts = std::move(counts);

  std::size_t box = 1;
  for (int e : impl_->extents) box *= static_cast<std::size_t>(e);
  impl_->target.resize(box);
  impl_->sign.resize(box);
  std::vector<int> k(impl_->extents.size(), 0);
  for (std::size_t i = 0; i < box; ++i) {
    std::size_t idx = 0;
    int parity = 0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      idx = idx * impl_->counts[j] + static_cast<std::size_t>(k[j]);
      parity += k[j];
    }
    impl_->target[i] = idx;
    impl_->sign[i] = (parity & 1) ? -1.0 : 1.0;
    for (std::size_t j = k.size(); j-- > 0;) {
      if (++k[j] < impl_->extents[j]) break;
      k[j] = 0;
    }
  }

  std::lock_guard lock(planner_mutex());
  impl_->buffer = fftw_alloc_complex(impl_->total);
  if (!impl_->counts.empty()) {
    std::vector<int> n(impl_->counts.begin(), impl_->counts.end());
    impl_->plan = fftw_plan_dft(static_cast<int>(n.size()), n.data(), impl_->buffer, impl_->buffer,
                                FFTW_BACKWARD, FFTW_ESTIMATE);
  }
}

GridSynthesizer::~GridSynthesizer() = default;
GridSynthesizer::GridSynthesizer(GridSynthesizer&&) noexcept = default;
GridSynthesizer& GridSynthesizer::operator=(GridSynthesizer&&) noexcept = default;

const std::vector<std::size_t>& GridSynthesizer::counts() const noexcept { return impl_->counts; }
std::size_t GridSynthesizer::total() const noexcept { return impl_->total; }

std::span<const cplx> GridSynthesizer::synthesize(std::span<const cplx> box_weights) {
  auto& im = *impl_;
  if (box_weights.size() != im.target.size()) throw InvalidArgument("weight box size mismatch");
  std::memset(im.buffer, 0, sizeof(fftw_complex) * im.total);
  auto* out = reinterpret_cast<cplx*>(im.buffer);
  for (std::size_t i = 0; i < box_weights.size(); ++i) out[im.target[i]] = im.sign[i] * box_weights[i];
  if (im.plan) fftw_execute(im.plan);
  return {out, im.total};
}

GridField grid_eval(const CoefficientField& field, const GridSpec& grid) {
  GridSynthesizer synth(field.extents(), grid.counts);
  auto values = synth.synthesize(field.weights());
  GridField out;
  out.spec = grid;
  out.values.assign(values.begin(), values.end());
  out.provenance = std::string("grid_eval:") + to_string(field.tag());
  return out;
}

GridField grid_eval_sliced(const DilationVector& n, SliceKernel kind, const GridSpec& grid, int nu_max) {
  if (n.dim() < 2) throw InvalidArgument("sliced evaluation needs d >= 2");
  if (kind == SliceKernel::Rdelta) throw InvalidArgument("Rdelta has no grid form without a shift");
  if (grid.dim() != n.dim()) throw InvalidArgument("grid dimension must equal d");
  SliceBuilder builder(n);
  std::vector<std::size_t> lower(grid.counts.begin(), grid.counts.end() - 1);
  GridSynthesizer synth(builder.extents(), lower);
  auto field = builder.make_field(kind);
  SliceOptions options;
  options.nu_max = nu_max;

  const std::size_t m_d = grid.counts.back();
  const std::size_t slice = synth.total();
  GridField out;
  out.spec = grid;
  out.values.assign(grid.total(), cplx{});
  out.provenance = std::string("grid_eval_sliced:") + to_string(kind) + ":" + n.key();
  for (std::size_t t = 0; t < m_d; ++t) {
    builder.fill(kind, grid.node(grid.dim() - 1, t), options, field);
    auto values = synth.synthesize(field.weights());
    // last axis is fastest in GridField; slice values are strided by m_d
    for (std::size_t i = 0; i < slice; ++i) out.values[i * m_d + t] = values[i];
  }
  return out;
}

}  // namespace lebesgue
