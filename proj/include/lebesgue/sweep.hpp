#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lebesgue/asymptotics.hpp"
#include "lebesgue/irrational.hpp"
#include "lebesgue/norms.hpp"

namespace lebesgue {

/// One axis of a sweep. Generators (constant arguments):
///   geom(a, b, k)   k geometric points from a to b
///   lin(a, b, k)    k equispaced points from a to b
///   list(v1, v2, ...)
///   <expr>          a single value
/// An expression may reference earlier axes n1..n{j-1}, e.g. pow(n1, 2),
/// and is then evaluated per row. Functions: pow sqrt exp log floor ceil
/// min max abs; constants pi e; operators + - * / ^ and parentheses.
struct SweepAxis {
  std::string text;
  bool derived = false;
  std::vector<double> values;  // generators only
};

SweepAxis parse_axis(const std::string& text, std::size_t index);

/// Rows of the sweep in lexicographic order of the generator axes, axis 1
/// outermost.
std::vector<std::vector<double>> expand_sweep(const std::vector<std::string>& axes);

/// Evaluates a constant or n-referencing expression.
double evaluate_expression(const std::string& text, const std::vector<double>& earlier);

struct SweepOptions {
  bool with_S = true;
  bool with_frak = true;
  bool timing = false;  // otherwise the seconds column is 0
  FrakOptions frak;
};

struct SweepOutcome {
  std::vector<SweepRecord> records;
  std::vector<std::string> warnings;  // non-converged norms, skipped predictors
  bool all_converged = true;
};

SweepOutcome run_sweep(NormEngine& engine, const std::vector<std::vector<double>>& rows, const SweepOptions& options);

/// 17 significant digits, '.' decimal, "nan"/"inf" spelled out.
std::string format_double(double v);

std::string sweep_header(std::size_t d);

/// '#' metadata lines (each element of `meta` becomes one line), the header
/// and one line per record.
std::string sweep_csv(const SweepOutcome& outcome, std::size_t d, const std::vector<std::string>& meta);

std::string irrational_csv(const RatioStudy& study, const std::vector<std::string>& meta);

/// Metadata lines shared by every output: version and convention flags.
std::vector<std::string> convention_lines(const NormOptions& norm, const FrakOptions& frak);

const char* library_version();

}  // namespace lebesgue
