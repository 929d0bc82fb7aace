#include "lebesgue/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lebesgue {

namespace {

void require_predictor_domain(const DilationVector& n) {
  if (!n.sorted_ascending()) throw InvalidArgument("predictors need ascending entries n_1 <= ... <= n_d");
  if (!(n[0] > 3.0)) throw InvalidArgument("predictors need n_1 > 3");
}

double log_product(const DilationVector& n, std::size_t from) {
  double p = 1.0;
  for (std::size_t j = from; j < n.dim(); ++j) p *= std::log(n[j]);
  return p;
}

void combinations(std::size_t d, std::size_t ones, std::size_t start, std::vector<int>& eta,
                  std::vector<std::vector<int>>& out) {
  if (ones == 0) {
    out.push_back(eta);
    return;
  }
  for (std::size_t i = start; i + ones <= d; ++i) {
    eta[i] = 1;
    combinations(d, ones - 1, i + 1, eta, out);
    eta[i] = 0;
  }
}

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

}  // namespace

double main_term(const DilationVector& n) {
  require_predictor_domain(n);
  const std::size_t d = n.dim();
  const double l1 = std::log(n[0]);
  double bracket = 1.0;
  for (std::size_t j = 0; j < d; ++j) bracket += l1 / std::log(n[j]);
  return std::ldexp(1.0, static_cast<int>(d) + 1) / std::numbers::pi * bracket * log_product(n, 0);
}

double remainder_envelope(const DilationVector& n) {
  require_predictor_domain(n);
  return std::log(std::log(n[0])) * log_product(n, 1);
}

std::vector<EtaWeight> eta_weights(const DilationVector& n, int k) {
  require_predictor_domain(n);
  const std::size_t d = n.dim();
  if (k < 2 || static_cast<std::size_t>(k) > d) throw InvalidArgument("eta weights need 2 <= k <= d");
  std::vector<std::vector<int>> etas;
  std::vector<int> eta(d, 0);
  combinations(d, d - static_cast<std::size_t>(k), 0, eta, etas);
  std::vector<EtaWeight> out;
  for (auto& e : etas) {
    double w = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      // 1-based i pairs with n_{d-i+1}, i.e. 0-based index d-1-i
      if (e[i]) w *= std::log(n[d - 1 - i] / n[0]);
    }
    out.push_back({std::move(e), w});
  }
  return out;
}

PredictorValue full_predictor(const DilationVector& n, const std::map<int, double>& frak_values) {
  PredictorValue p;
  p.main = main_term(n);
  p.envelope = remainder_envelope(n);
  p.total = p.main;
  for (int k = 2; k <= static_cast<int>(n.dim()); ++k) {
    auto it = frak_values.find(k);
    if (it == frak_values.end()) throw InvalidArgument("missing frak-F value for k = " + std::to_string(k));
    PredictorTerm t{k, it->second, eta_weights(n, k), 0.0, 0.0};
    for (const auto& e : t.etas) t.eta_sum += e.weight;
    t.contribution = t.frak * t.eta_sum;
    p.total += t.contribution;
    p.terms.push_back(std::move(t));
  }
  return p;
}

MultiplesReport multiples_check(NormEngine& engine, const DilationVector& n) {
  require_predictor_domain(n);
  const std::size_t d = n.dim();
  if (d < 2) throw InvalidArgument("the multiple relation needs d >= 2");
  MultiplesReport r;
  const double top = n[d - 1];
  if (!is_integer(top)) throw InvalidArgument("n_d must be an integer for n_d = lambda_j n_j + p_j");
  r.exact_multiples = true;
  for (std::size_t j = 0; j + 1 < d; ++j) {
    if (!is_integer(n[j])) throw InvalidArgument("entries must be integers for n_d = lambda_j n_j + p_j");
    const auto lambda = static_cast<long long>(std::floor(top / n[j]));
    const double p = top - static_cast<double>(lambda) * n[j];
    if (p < 0.0 || p >= n[j]) throw InvalidArgument("malformed relation n_d = lambda_j n_j + p_j");
    r.lambda.push_back(lambda);
    r.remainder.push_back(p);
    r.exact_multiples = r.exact_multiples && p == 0.0;
  }
  r.norm_D = engine.l1_norm(KernelKind::D, n).value;
  r.norm_F = engine.l1_norm(KernelKind::F, n).value;
  r.main = main_term(n);
  r.residual = r.norm_D - r.main;
  r.envelope = remainder_envelope(n);
  r.ratio = std::fabs(r.residual) / r.envelope;
  return r;
}

FractionalTrend fractional_trend(NormEngine& engine, double n1, double p, const std::vector<long long>& lambdas) {
  if (lambdas.empty()) throw InvalidArgument("the lambda list is empty");
  FractionalTrend t;
  t.lambdas = lambdas;
  for (auto lambda : lambdas) {
    if (lambda < 1) throw InvalidArgument("lambda must be positive");
    const DilationVector n{n1, static_cast<double>(lambda) * n1 + p};
    t.norms.push_back(engine.l1_norm(KernelKind::F, n).value);
  }
  const auto [lo, hi] = std::minmax_element(t.norms.begin(), t.norms.end());
  t.min = *lo;
  t.max = *hi;
  if (t.max == 0.0) {
    t.max_over_min = 1.0;
  } else {
    t.max_over_min = t.min > 0.0 ? t.max / t.min : std::numeric_limits<double>::infinity();
  }
  return t;
}

GapRegimeReport gap_regime(const DilationVector& n, double norm) {
  require_predictor_domain(n);
  const std::size_t d = n.dim();
  if (d < 2 || !(n[d - 1] > n[d - 2])) {
    throw InvalidArgument("regime hypothesis not met: needs d >= 2 and n_{d-1} < n_d");
  }
  GapRegimeReport r;
  r.norm = norm;
  const double l1 = std::log(n[0]);
  double bracket = 1.0;
  for (std::size_t j = 0; j + 1 < d; ++j) bracket += l1 / std::log(n[j]);
  const double logs = log_product(n, 0);
  r.predictor = std::ldexp(1.0, static_cast<int>(d) + 1) / std::numbers::pi * bracket * logs;
  r.residual = norm - r.predictor;
  r.envelope = (std::log(n[d - 2]) / std::log(n[d - 1]) + std::log(l1) / l1) * logs;
  r.ratio = std::fabs(r.residual) / r.envelope;
  return r;
}

EnvelopeFit fit_envelope(const std::vector<double>& residuals, const std::vector<double>& envelopes) {
  if (residuals.empty()) throw InvalidArgument("no records to fit");
  if (residuals.size() != envelopes.size()) throw InvalidArgument("residual and envelope counts differ");
  if (residuals.size() < 3) throw InvalidArgument("an envelope fit needs at least 3 records");
  EnvelopeFit fit;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (!(envelopes[i] > 0.0) || !std::isfinite(envelopes[i])) throw InvalidArgument("envelopes must be positive");
    fit.ratios.push_back(std::fabs(residuals[i]) / envelopes[i]);
  }
  const auto [lo, hi] = std::minmax_element(fit.ratios.begin(), fit.ratios.end());
  fit.c_min = *lo;
  fit.c_hat = *hi;
  if (fit.c_hat == 0.0) {
    fit.max_over_min = 1.0;
  } else {
    fit.max_over_min = fit.c_min > 0.0 ? fit.c_hat / fit.c_min : std::numeric_limits<double>::infinity();
  }
  fit.nonincreasing = std::is_sorted(fit.ratios.rbegin(), fit.ratios.rend());
  fit.nondecreasing = std::is_sorted(fit.ratios.begin(), fit.ratios.end());
  return fit;
}

}  // namespace lebesgue
