#include "lebesgue/kernels.hpp"

#include <cmath>
#include <numbers>

#include "lebesgue/errors.hpp"

namespace lebesgue {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidArgument("torus coordinates must be finite");
  }
}

}  // namespace

double reduce_angle(double x) {
  double r = std::remainder(x, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

TorusPoint::TorusPoint(std::vector<double> coords) : x_(std::move(coords)) {
  require_finite(x_);
  for (double& v : x_) v = reduce_angle(v);
}

TorusPoint TorusPoint::head() const {
  if (x_.empty()) throw InvalidArgument("cannot drop a coordinate of a 0-dimensional point");
  return TorusPoint(std::vector<double>(x_.begin(), x_.end() - 1));
}

double remainder_tail_bound(double lattice_points, double x_d, int nu_max) {
  if (nu_max < 1) throw InvalidArgument("nu_max must be at least 1");
  const double n = static_cast<double>(nu_max);
  return 2.0 * lattice_points * std::fabs(x_d) / (kPi * kPi) * -std::log1p(-1.0 / (2.0 * n));
}

SimplexKernels::SimplexKernels(const DilationVector& n, std::uint64_t budget)
    : lattice_(SimplexLattice::build(n, n.dim() - 1, budget)), full_count_(lattice_.extended_count()) {}

cplx SimplexKernels::mode_sum(std::span<const double> x_prime, auto&& weight) const {
  if (x_prime.size() + 1 != dim()) throw InvalidArgument("point dimension does not match the kernel");
  cplx total = 0.0;
  for (std::size_t i = 0; i < lattice_.size(); ++i) {
    const auto k = lattice_.point(i);
    double phase = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) phase += k[j] * x_prime[j];
    total += weight(lattice_.next_lambda(i)) * std::polar(1.0, phase);
  }
  return total;
}

cplx SimplexKernels::dirichlet(const TorusPoint& x) const {
  if (x.dim() != dim()) throw InvalidArgument("point dimension does not match the kernel");
  const double x_d = x[dim() - 1];
  return mode_sum(x.coords().first(dim() - 1),
                  [x_d](double l) { return geometric_sum(floor_of(l) + 1, x_d); });
}

cplx SimplexKernels::fractional(std::span<const double> x_prime) const {
  return mode_sum(x_prime, [](double l) { return cplx(frac_of(l)); });
}

cplx SimplexKernels::s_kernel(const TorusPoint& x) const {
  if (dim() < 2) throw InvalidArgument("S_n needs d >= 2");
  if (x.dim() != dim()) throw InvalidArgument("point dimension does not match the kernel");
  const double x_d = x[dim() - 1];
  return mode_sum(x.coords().first(dim() - 1), [x_d](double l) { return s_weight(l, x_d); });
}

cplx SimplexKernels::s_kernel_delta_form(const TorusPoint& x) const {
  if (dim() < 2) throw InvalidArgument("S_n needs d >= 2");
  if (x.dim() != dim()) throw InvalidArgument("point dimension does not match the kernel");
  const auto& n = dilation();
  const double x_d = x[dim() - 1];
  if (std::fabs(x_d) < kSingularityThreshold) return s_kernel(x);
  // D_{n'} is the (d-1)-dimensional Dirichlet kernel over the same index set.
  const SimplexKernels lower(n.head(dim() - 1));
  const double h = n[dim() - 1] * x_d;
  std::vector<double> shifted(dim() - 1);
  for (std::size_t j = 0; j + 1 < dim(); ++j) shifted[j] = x[j] - h / n[j];
  const cplx delta = std::polar(1.0, h) * lower.dirichlet(TorusPoint(shifted)) -
                     lower.dirichlet(x.head());
  return delta / cplx(0.0, x_d);
}

cplx SimplexKernels::fcomposite(const TorusPoint& x) const {
  if (dim() < 2) throw InvalidArgument("the composite F term needs d >= 2");
  if (x.dim() != dim()) throw InvalidArgument("point dimension does not match the kernel");
  const auto& n = dilation();
  const double x_d = x[dim() - 1];
  const auto m = n.ratios(dim() - 1);
  std::vector<double> shifted(dim() - 1);
  for (std::size_t j = 0; j + 1 < dim(); ++j) shifted[j] = x[j] - x_d * m[j];
  return std::polar(1.0, n[dim() - 1] * x_d) * fractional(shifted);
}

cplx SimplexKernels::fcomposite_from_weights(const TorusPoint& x) const {
  if (x.dim() != dim()) throw InvalidArgument("point dimension does not match the kernel");
  const double x_d = x[dim() - 1];
  return mode_sum(x.coords().first(dim() - 1),
                  [x_d](double l) { return frac_of(l) * std::polar(1.0, l * x_d); });
}

RemainderValue SimplexKernels::remainder(const TorusPoint& x, int nu_max) const {
  if (dim() < 2) throw InvalidArgument("R_n needs d >= 2");
  if (nu_max < 1) throw InvalidArgument("nu_max must be at least 1");
  if (x.dim() != dim()) throw InvalidArgument("point dimension does not match the kernel");
  const double x_d = x[dim() - 1];
  const cplx value = mode_sum(x.coords().first(dim() - 1),
                              [x_d, nu_max](double l) { return remainder_weight(l, x_d, nu_max); });
  return {value, remainder_tail_bound(base_points(), x_d, nu_max)};
}

cplx eval_D(const DilationVector& n, const TorusPoint& x) { return SimplexKernels(n).dirichlet(x); }

cplx eval_F(const DilationVector& n, const TorusPoint& x_prime) {
  return SimplexKernels(n).fractional(x_prime.coords());
}

cplx eval_S(const DilationVector& n, const TorusPoint& x) { return SimplexKernels(n).s_kernel(x); }

RemainderValue eval_R(const DilationVector& n, const TorusPoint& x, int nu_max) {
  return SimplexKernels(n).remainder(x, nu_max);
}

CoefficientField apply_delta(const CoefficientField& field, double h, std::span<const double> xi) {
  if (xi.size() != field.dim()) throw InvalidArgument("delta shift vector does not match the field dimension");
  CoefficientField out(field.extents(), FieldTag::delta);
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == cplx{}) continue;
    const auto k = field.index_of(i);
    double dot = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) dot += xi[j] * k[j];
    out[i] = (std::polar(1.0, h * (1.0 - dot)) - 1.0) * field[i];
  }
  return out;
}

cplx synthesize_at(const CoefficientField& field, std::span<const double> x) {
  if (x.size() != field.dim()) throw InvalidArgument("point dimension does not match the field");
  cplx total = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == cplx{}) continue;
    const auto k = field.index_of(i);
    double phase = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) phase += k[j] * x[j];
    total += field[i] * std::polar(1.0, phase);
  }
  return total;
}

}  // namespace lebesgue
