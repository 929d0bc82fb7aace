#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lebesgue/dilation.hpp"
#include "lebesgue/norms.hpp"

namespace lebesgue {

/// 2^{d+1}/pi (1 + sum_j ln n_1 / ln n_j) prod_i ln n_i. Natural logs.
/// Requires ascending entries, all > 3.
double main_term(const DilationVector& n);

/// ln ln n_1 * prod_{j >= 2} ln n_j
double remainder_envelope(const DilationVector& n);

struct EtaWeight {
  std::vector<int> eta;  // eta_1 .. eta_d
  double weight;         // prod_{i : eta_i = 1} ln(n_{d-i+1} / n_1)
};

/// All eta in {0,1}^d with |eta| = d - k, in lexicographic order of the
/// positions of their ones.
std::vector<EtaWeight> eta_weights(const DilationVector& n, int k);

struct PredictorTerm {
  int k;
  double frak;
  std::vector<EtaWeight> etas;
  double eta_sum;
  double contribution;  // frak * eta_sum
};

struct PredictorValue {
  double main = 0.0;
  std::vector<PredictorTerm> terms;  // k = 2..d
  double total = 0.0;
  double envelope = 0.0;
};

/// main_term + sum_k frak_k * sum_eta weight. frak_values must hold k = 2..d.
PredictorValue full_predictor(const DilationVector& n, const std::map<int, double>& frak_values);

struct MultiplesReport {
  std::vector<long long> lambda;  // lambda_j = [n_d / n_j], j < d
  std::vector<double> remainder;  // p_j = n_d - lambda_j n_j
  bool exact_multiples = false;   // every p_j = 0
  double norm_D = 0.0;
  double norm_F = 0.0;
  double main = 0.0;
  double residual = 0.0;  // norm_D - main
  double envelope = 0.0;
  double ratio = 0.0;     // |residual| / envelope
};

/// Requires integer entries so that n_d = lambda_j n_j + p_j with integer
/// lambda_j, p_j and 0 <= p_j < n_j.
MultiplesReport multiples_check(NormEngine& engine, const DilationVector& n);

struct FractionalTrend {
  std::vector<long long> lambdas;
  std::vector<double> norms;  // ||F_{(n_1, lambda n_1 + p)}||
  double min = 0.0;
  double max = 0.0;
  double max_over_min = 0.0;  // infinity when min = 0 < max, 1 when all vanish
};

/// ||F|| along n = (n_1, lambda n_1 + p) for the given lambdas.
FractionalTrend fractional_trend(NormEngine& engine, double n1, double p, const std::vector<long long>& lambdas);

struct GapRegimeReport {
  double norm = 0.0;
  double predictor = 0.0;  // 2^{d+1}/pi (1 + sum_{j <= d-1} ln n_1 / ln n_j) prod ln n_i
  double residual = 0.0;
  double envelope = 0.0;   // (ln n_{d-1} / ln n_d + ln ln n_1 / ln n_1) prod ln n_k
  double ratio = 0.0;
};

/// Rejects inputs outside the regime n_{d-1} < n_d.
GapRegimeReport gap_regime(const DilationVector& n, double norm);

struct EnvelopeFit {
  std::vector<double> ratios;  // |residual| / envelope
  double c_hat = 0.0;          // max ratio
  double c_min = 0.0;
  double max_over_min = 0.0;
  bool nonincreasing = false;
  bool nondecreasing = false;
};

/// At least three (residual, envelope) pairs with positive envelopes.
EnvelopeFit fit_envelope(const std::vector<double>& residuals, const std::vector<double>& envelopes);

struct SweepRecord {
  std::vector<double> n;
  double norm_D = 0.0;
  double norm_S = 0.0;
  double norm_F = 0.0;
  std::vector<double> frak;  // frak[k - 2] for k = 2..d
  PredictorValue predictor;
  double residual = 0.0;     // norm_D - predictor.total
  double envelope = 0.0;
  double ratio = 0.0;
  std::string grid;
  double seconds = 0.0;

  double recompute_residual() const { return norm_D - predictor.total; }
};

}  // namespace lebesgue
