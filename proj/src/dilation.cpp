#include "lebesgue/dilation.hpp"

#include <cmath>
#include <cstdio>

#include "lebesgue/errors.hpp"

namespace lebesgue {

double snap_integral(double value, double scale) {
  const double nearest = std::nearbyint(value);
  const double tol = kIntegralSnap * std::max(1.0, std::fabs(scale));
  return std::fabs(value - nearest) <= tol ? nearest : value;
}

long long floor_of(double snapped) { return static_cast<long long>(std::floor(snapped)); }

double frac_of(double snapped) { return snapped - std::floor(snapped); }

DilationVector::DilationVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InvalidArgument("dilation vector must have at least one entry");
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (!std::isfinite(entries_[j]) || entries_[j] <= 0.0) {
      throw InvalidArgument("dilation entry n_" + std::to_string(j + 1) +
                            " must be finite and positive");
    }
  }
}

DilationVector::DilationVector(std::initializer_list<double> entries)
    : DilationVector(std::vector<double>(entries)) {}

bool DilationVector::sorted_ascending() const noexcept {
  for (std::size_t j = 1; j < entries_.size(); ++j) {
    if (entries_[j] < entries_[j - 1]) return false;
  }
  return true;
}

std::vector<double> DilationVector::ratios(std::size_t s) const {
  if (s == 0 || s >= entries_.size()) {
    throw InvalidArgument("ratio vector m^(s) needs 1 <= s < d");
  }
  std::vector<double> m(s);
  for (std::size_t j = 0; j < s; ++j) m[j] = entries_[s] / entries_[j];
  return m;
}

DilationVector DilationVector::head(std::size_t s) const {
  if (s == 0 || s > entries_.size()) throw InvalidArgument("head size out of range");
  return DilationVector(std::vector<double>(entries_.begin(), entries_.begin() + s));
}

DilationVector DilationVector::append(double value) const {
  auto copy = entries_;
  copy.push_back(value);
  return DilationVector(std::move(copy));
}

double DilationVector::log_product() const {
  double p = 1.0;
  for (double v : entries_) p *= std::log(v);
  return p;
}

std::string DilationVector::key() const {
  std::string out;
  char buf[40];
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.12g", entries_[j]);
    if (j) out += ',';
    out += buf;
  }
  return out;
}

LambdaEvaluator::LambdaEvaluator(DilationVector n) : n_(std::move(n)) {
  for (std::size_t s = 1; s < n_.dim(); ++s) ratios_.push_back(n_.ratios(s));
}

double LambdaEvaluator::operator()(std::span<const double> xi) const {
  const std::size_t s = xi.size() + 1;
  if (s > n_.dim()) throw InvalidArgument("Lambda_s requested beyond the dimension");
  double value = n_[s - 1];
  if (s >= 2) {
    const auto& m = ratios_[s - 2];
    for (std::size_t j = 0; j < xi.size(); ++j) value -= m[j] * xi[j];
  }
  return value;
}

double LambdaEvaluator::scaled_form(std::span<const double> xi) const {
  const std::size_t s = xi.size() + 1;
  if (s > n_.dim()) throw InvalidArgument("Lambda_s requested beyond the dimension");
  double t = 1.0;
  for (std::size_t j = 0; j < xi.size(); ++j) t -= xi[j] / n_[j];
  return n_[s - 1] * t;
}

double LambdaEvaluator::at_lattice(std::span<const int> k) const {
  const std::size_t s = k.size() + 1;
  if (s > n_.dim()) throw InvalidArgument("Lambda_s requested beyond the dimension");
  double value = n_[s - 1];
  if (s >= 2) {
    const auto& m = ratios_[s - 2];
    for (std::size_t j = 0; j < k.size(); ++j) value -= m[j] * k[j];
  }
  return snap_integral(value, n_[s - 1]);
}

}  // namespace lebesgue
