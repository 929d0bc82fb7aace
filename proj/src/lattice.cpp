#include "lebesgue/lattice.hpp"

#include <cmath>
#include <numbers>

#include "lebesgue/errors.hpp"

namespace lebesgue {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double estimate_lattice_points(const DilationVector& n, std::size_t s) {
  // Volume of the simplex enlarged by s along every axis: an overestimate of
  // the point count that is cheap and monotone in n.
  double v = 1.0;
  for (std::size_t j = 0; j < s; ++j) v *= (std::floor(n[j]) + static_cast<double>(s)) / static_cast<double>(j + 1);
  return std::max(v, 1.0);
}

SimplexLattice SimplexLattice::build(const DilationVector& n, std::size_t s, std::uint64_t budget) {
  if (s > n.dim()) throw InvalidArgument("lattice dimension exceeds the dilation dimension");
  SimplexLattice lat(n, s);
  lat.extents_.assign(s, 0);

  if (s == 0) {
    lat.count_ = 1;
    if (lat.has_next_lambda()) lat.next_lambda_.push_back(snap_integral(n[0], n[0]));
    return lat;
  }

  const double estimate = estimate_lattice_points(n, s);
  if (estimate * static_cast<double>(s) > static_cast<double>(budget)) {
    throw ResourceLimit("simplex lattice of dimension " + std::to_string(s) + " exceeds the memory budget",
                        estimate);
  }

  LambdaEvaluator lambda(n);
  std::vector<int> k(s, 0);
  std::vector<long long> upper(s, 0);
  upper[0] = floor_of(snap_integral(n[0], n[0]));

  // Odometer over the nested bounds; axis j's upper bound depends on k_0..k_{j-1}.
  std::size_t axis = 0;
  for (;;) {
    // descend: fill bounds for axes below `axis`
    while (axis + 1 < s) {
      ++axis;
      k[axis] = 0;
      upper[axis] = floor_of(lambda.at_lattice(std::span<const int>(k.data(), axis)));
    }
    if (upper[axis] >= k[axis]) {
      lat.coords_.insert(lat.coords_.end(), k.begin(), k.end());
      for (std::size_t j = 0; j < s; ++j) lat.extents_[j] = std::max(lat.extents_[j], k[j] + 1);
      if (lat.has_next_lambda()) lat.next_lambda_.push_back(lambda.at_lattice(k));
      ++lat.count_;
      if (static_cast<std::uint64_t>(lat.count_) * s > budget) {
        throw ResourceLimit("simplex lattice exceeds the memory budget", estimate);
      }
    }
    // advance
    for (;;) {
      ++k[axis];
      if (k[axis] <= upper[axis]) break;
      if (axis == 0) return lat;
      --axis;
    }
  }
}

double SimplexLattice::extended_count() const {
  if (!has_next_lambda()) throw InvalidArgument("extended_count needs a lattice built below the full dimension");
  double total = 0.0;
  for (double l : next_lambda_) total += static_cast<double>(floor_of(l) + 1);
  return total;
}

const char* to_string(FieldTag tag) {
  switch (tag) {
    case FieldTag::indicator: return "indicator";
    case FieldTag::fractional: return "fractional";
    case FieldTag::slice_D: return "slice_D";
    case FieldTag::slice_S: return "slice_S";
    case FieldTag::slice_Fcomposite: return "slice_Fcomposite";
    case FieldTag::slice_R: return "slice_R";
    case FieldTag::slice_Rdelta: return "slice_Rdelta";
    case FieldTag::delta: return "delta";
    case FieldTag::custom: return "custom";
  }
  return "unknown";
}

CoefficientField::CoefficientField(std::vector<int> extents, FieldTag tag)
    : extents_(std::move(extents)), tag_(tag) {
  std::size_t total = 1;
  for (int e : extents_) {
    if (e <= 0) throw InvalidArgument("coefficient field extents must be positive");
    total *= static_cast<std::size_t>(e);
  }
  weights_.assign(total, cplx{});
}

std::size_t CoefficientField::flat_index(std::span<const int> k) const {
  if (k.size() != extents_.size()) throw InvalidArgument("index dimension does not match the field");
  std::size_t idx = 0;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] < 0 || k[j] >= extents_[j]) throw InvalidArgument("index outside the coefficient box");
    idx = idx * static_cast<std::size_t>(extents_[j]) + static_cast<std::size_t>(k[j]);
  }
  return idx;
}

std::vector<int> CoefficientField::index_of(std::size_t i) const {
  std::vector<int> k(extents_.size());
  for (std::size_t j = extents_.size(); j-- > 0;) {
    k[j] = static_cast<int>(i % static_cast<std::size_t>(extents_[j]));
    i /= static_cast<std::size_t>(extents_[j]);
  }
  return k;
}

double CoefficientField::energy() const {
  double e = 0.0;
  for (const auto& c : weights_) e += std::norm(c);
  return e;
}

CoefficientField indicator_coefficients(const SimplexLattice& lattice) {
  CoefficientField field(lattice.extents(), FieldTag::indicator);
  for (std::size_t i = 0; i < lattice.size(); ++i) field.at(lattice.point(i)) = 1.0;
  return field;
}

CoefficientField fractional_coefficients(const DilationVector& n, std::uint64_t budget) {
  const auto lattice = SimplexLattice::build(n, n.dim() - 1, budget);
  CoefficientField field(lattice.extents(), FieldTag::fractional);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    field.at(lattice.point(i)) = frac_of(lattice.next_lambda(i));
  }
  return field;
}

const char* to_string(SliceKernel kind) {
  switch (kind) {
    case SliceKernel::D: return "D";
    case SliceKernel::S: return "S";
    case SliceKernel::Fcomposite: return "Fcomposite";
    case SliceKernel::R: return "R";
    case SliceKernel::Rdelta: return "Rdelta";
  }
  return "unknown";
}

cplx geometric_sum(long long count, double x) {
  if (count <= 0) return 0.0;
  // with x / 2 = h + j pi the signs (-1)^{(c-1) j} of ratio and phase cancel
  const double h = std::remainder(0.5 * x, std::numbers::pi);
  const double s = std::sin(h);
  const double c = static_cast<double>(count);
  if (std::fabs(s) < 1e-15) return c;
  return std::polar(std::sin(c * h) / s, (c - 1.0) * h);
}

cplx s_weight(double lambda, double x_d) {
  if (std::fabs(x_d) < kSingularityThreshold) return {lambda, 0.5 * lambda * lambda * x_d};
  // (e^{i L x} - 1)/(i x) = e^{i L x / 2} * 2 sin(L x / 2) / x
  const double half = 0.5 * lambda * x_d;
  return std::polar(2.0 * std::sin(half) / x_d, half);
}

cplx remainder_weight(double lambda, double x_d, int nu_max) {
  // 1/2 (E - 1) + 1 - x/(2 pi i) sum_{nu != 0} (E z^nu - 1) / (nu (2 pi nu + x)),
  // E = e^{i lambda x}, z = e^{2 pi i lambda}; nu and -nu are accumulated together.
  const cplx e = std::polar(1.0, lambda * x_d);
  cplx value = 0.5 * (e - 1.0) + 1.0;
  if (x_d == 0.0) return value;
  const double theta = 2.0 * kPi * (lambda - std::floor(lambda));
  const cplx z = std::polar(1.0, theta);
  cplx zp = 1.0;
  cplx oscillating = 0.0;
  double constant = 0.0;
  for (int nu = 1; nu <= nu_max; ++nu) {
    if ((nu & 1023) == 0) {
      zp = std::polar(1.0, std::fmod(theta * nu, 2.0 * kPi));
    } else {
      zp *= z;
    }
    const double a = 1.0 / (nu * (2.0 * kPi * nu + x_d));
    const double b = 1.0 / (nu * (2.0 * kPi * nu - x_d));
    oscillating += zp * a + std::conj(zp) * b;
    constant += a + b;
  }
  const cplx series = e * oscillating - constant;
  // - x/(2 pi i) = i x / (2 pi)
  value += cplx(0.0, x_d / (2.0 * kPi)) * series;
  return value;
}

SliceBuilder::SliceBuilder(const DilationVector& n, std::uint64_t budget)
    : lattice_(SimplexLattice::build(n, n.dim() - 1, budget)) {
  extents_ = lattice_.extents();
  double box = 1.0;
  for (int e : extents_) box *= e;
  if (box > static_cast<double>(budget)) throw ResourceLimit("slice box exceeds the memory budget", box);
  flat_.reserve(lattice_.size());
  for (std::size_t i = 0; i < lattice_.size(); ++i) {
    const auto k = lattice_.point(i);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < k.size(); ++j) idx = idx * static_cast<std::size_t>(extents_[j]) + k[j];
    flat_.push_back(idx);
  }
  full_count_ = lattice_.extended_count();
}

CoefficientField SliceBuilder::make_field(SliceKernel kind) const {
  FieldTag tag = FieldTag::custom;
  switch (kind) {
    case SliceKernel::D: tag = FieldTag::slice_D; break;
    case SliceKernel::S: tag = FieldTag::slice_S; break;
    case SliceKernel::Fcomposite: tag = FieldTag::slice_Fcomposite; break;
    case SliceKernel::R: tag = FieldTag::slice_R; break;
    case SliceKernel::Rdelta: tag = FieldTag::slice_Rdelta; break;
  }
  return CoefficientField(extents_, tag);
}

void SliceBuilder::fill(SliceKernel kind, double x_d, const SliceOptions& options, CoefficientField& out) const {
  if (!std::isfinite(x_d)) throw InvalidArgument("slice coordinate must be finite");
  if (out.extents() != extents_) throw InvalidArgument("slice field has the wrong box");
  if (kind == SliceKernel::S && !options.allow_limit_branch && std::fabs(x_d) < kSingularityThreshold) {
    throw InvalidArgument("|x_d| is below the singularity threshold and the limit branch was not requested");
  }
  if (kind == SliceKernel::R && options.nu_max < 1) throw InvalidArgument("nu_max must be at least 1");
  if (kind == SliceKernel::Rdelta && !options.shift) throw InvalidArgument("Rdelta slice needs a shift h");

  const double n_d = dilation()[dilation().dim() - 1];
  const auto lambdas = lattice_.next_lambdas();
  auto w = out.weights();
  std::fill(w.begin(), w.end(), cplx{});
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double l = lambdas[i];
    cplx value;
    switch (kind) {
      case SliceKernel::D: value = geometric_sum(floor_of(l) + 1, x_d); break;
      case SliceKernel::S: value = s_weight(l, x_d); break;
      case SliceKernel::Fcomposite: value = frac_of(l) * std::polar(1.0, l * x_d); break;
      case SliceKernel::R: value = remainder_weight(l, x_d, options.nu_max); break;
      case SliceKernel::Rdelta: value = std::polar(1.0, l * (*options.shift) / n_d) - 1.0; break;
    }
    w[flat_[i]] = value;
  }
}

CoefficientField slice_coefficients(const DilationVector& n, SliceKernel kind, double x_d,
                                    const SliceOptions& options) {
  if (n.dim() < 2) throw InvalidArgument("slice kernels need d >= 2");
  SliceBuilder builder(n);
  auto field = builder.make_field(kind);
  builder.fill(kind, x_d, options, field);
  return field;
}

}  // namespace lebesgue
