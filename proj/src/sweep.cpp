#include "lebesgue/sweep.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cctype>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

namespace lebesgue {

namespace {

class ExpressionParser {
 public:
  ExpressionParser(const std::string& text, const std::vector<double>* earlier)
      : text_(text), earlier_(earlier) {}

  double parse() {
    const double v = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + text_.substr(pos_) + "'");
    return v;
  }

  bool references_axes() const { return references_; }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw InvalidArgument("sweep expression '" + text_ + "': " + why);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  double expression() {
    double v = term();
    for (;;) {
      if (accept('+')) {
        v += term();
      } else if (accept('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = unary();
    for (;;) {
      if (accept('*')) {
        v *= unary();
      } else if (accept('/')) {
        v /= unary();
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  double power() {
    const double base = primary();
    if (accept('^')) return std::pow(base, unary());
    return base;
  }

  std::vector<double> arguments() {
    std::vector<double> args;
    expect('(');
    if (accept(')')) return args;
    do {
      args.push_back(expression());
    } while (accept(','));
    expect(')');
    return args;
  }

  double primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (accept('(')) {
      const double v = expression();
      expect(')');
      return v;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
      if (ec != std::errc()) fail("bad number");
      pos_ = static_cast<std::size_t>(end - text_.data());
      return v;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail(std::string("unexpected '") + c + "'");
    std::string name;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) name += text_[pos_++];
    if (name == "pi") return std::numbers::pi;
    if (name == "e") return std::numbers::e;
    if (name.size() > 1 && name[0] == 'n' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      const std::size_t axis = std::stoul(name.substr(1));
      if (!earlier_) fail("axis references are not allowed here");
      if (axis < 1 || axis > earlier_->size()) fail("'" + name + "' is not an earlier axis");
      references_ = true;
      return (*earlier_)[axis - 1];
    }
    const auto args = arguments();
    auto arity = [&](std::size_t k) {
      if (args.size() != k) fail(name + " takes " + std::to_string(k) + " argument(s)");
    };
    if (name == "pow") return arity(2), std::pow(args[0], args[1]);
    if (name == "sqrt") return arity(1), std::sqrt(args[0]);
    if (name == "exp") return arity(1), std::exp(args[0]);
    if (name == "log") return arity(1), std::log(args[0]);
    if (name == "floor") return arity(1), std::floor(args[0]);
    if (name == "ceil") return arity(1), std::ceil(args[0]);
    if (name == "abs") return arity(1), std::fabs(args[0]);
    if (name == "min") return arity(2), std::min(args[0], args[1]);
    if (name == "max") return arity(2), std::max(args[0], args[1]);
    fail("unknown function '" + name + "'");
  }

  const std::string& text_;
  const std::vector<double>* earlier_;
  std::size_t pos_ = 0;
  bool references_ = false;
};

// Splits "name(a, b, c)" into name and top-level arguments.
std::optional<std::pair<std::string, std::vector<std::string>>> split_call(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') return std::nullopt;
  std::string name = text.substr(0, open);
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
  std::vector<std::string> args;
  int depth = 0;
  std::string current;
  for (std::size_t i = open + 1; i + 1 < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) return std::nullopt;
    if (c == ',' && depth == 0) {
      args.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (depth != 0) return std::nullopt;
  args.push_back(current);
  return std::make_pair(name, args);
}

double constant(const std::string& text) { return ExpressionParser(text, nullptr).parse(); }

std::size_t count_argument(const std::string& text) {
  const double k = constant(text);
  if (!(k >= 1.0) || k != std::floor(k) || k > 1e6) throw InvalidArgument("point count must be a positive integer: " + text);
  return static_cast<std::size_t>(k);
}

double snapped(double v) { return snap_integral(v, std::max(1.0, std::fabs(v))); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

double evaluate_expression(const std::string& text, const std::vector<double>& earlier) {
  return ExpressionParser(text, &earlier).parse();
}

SweepAxis parse_axis(const std::string& raw, std::size_t index) {
  SweepAxis axis;
  axis.text = trim(raw);
  if (axis.text.empty()) throw InvalidArgument("sweep axis n" + std::to_string(index + 1) + " is empty");
  if (auto call = split_call(axis.text); call && (call->first == "geom" || call->first == "lin" || call->first == "list")) {
    const auto& [name, args] = *call;
    if (name == "list") {
      for (const auto& a : args) axis.values.push_back(constant(a));
    } else {
      if (args.size() != 3) throw InvalidArgument(name + " takes (start, stop, count)");
      const double a = constant(args[0]);
      const double b = constant(args[1]);
      const std::size_t k = count_argument(args[2]);
      if (name == "geom" && !(a > 0.0 && b > 0.0)) throw InvalidArgument("geom needs positive endpoints");
      for (std::size_t i = 0; i < k; ++i) {
        if (k == 1) {
          axis.values.push_back(a);
          break;
        }
        const double t = static_cast<double>(i) / static_cast<double>(k - 1);
        const double v = name == "geom" ? a * std::pow(b / a, t) : a + (b - a) * t;
        axis.values.push_back(i + 1 == k ? b : snapped(v));
      }
    }
    return axis;
  }
  ExpressionParser probe(axis.text, nullptr);
  try {
    axis.values.push_back(probe.parse());
  } catch (const InvalidArgument&) {
    // retry as an expression in earlier axes
    std::vector<double> dummy(index, 1.0);
    ExpressionParser derived(axis.text, &dummy);
    derived.parse();
    if (!derived.references_axes()) throw;
    axis.derived = true;
  }
  return axis;
}

std::vector<std::vector<double>> expand_sweep(const std::vector<std::string>& texts) {
  if (texts.empty()) throw InvalidArgument("a sweep needs at least one axis");
  std::vector<SweepAxis> axes;
  for (std::size_t j = 0; j < texts.size(); ++j) axes.push_back(parse_axis(texts[j], j));
  std::vector<std::vector<double>> rows{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& row : rows) {
      if (axis.derived) {
        auto r = row;
        r.push_back(snapped(evaluate_expression(axis.text, row)));
        next.push_back(std::move(r));
      } else {
        for (double v : axis.values) {
          auto r = row;
          r.push_back(v);
          next.push_back(std::move(r));
        }
      }
    }
    rows = std::move(next);
  }
  for (const auto& row : rows) {
    for (double v : row) {
      if (!std::isfinite(v) || v <= 0.0) throw InvalidArgument("sweep produced a non-positive entry");
    }
  }
  return rows;
}

const char* library_version() { return "1.0.0"; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, end);
}

std::vector<std::string> convention_lines(const NormOptions& norm, const FrakOptions& frak) {
  return {
      std::string("lebesgue ") + library_version(),
      "normalization=plain (normalized values divide by (2pi)^s)",
      std::string("mu_range=") + to_string(frak.mu_range),
      "zero_dim_norm=modulus",
      "tol=" + format_double(norm.tol) + " rho=" + std::to_string(norm.rho) +
          " max_doublings=" + std::to_string(norm.max_doublings) + " nu_max=" + std::to_string(norm.nu_max) +
          " t_nodes=" + std::to_string(frak.t_nodes),
  };
}

SweepOutcome run_sweep(NormEngine& engine, const std::vector<std::vector<double>>& rows, const SweepOptions& options) {
  SweepOutcome out;
  std::size_t row_index = 0;
  auto norm_of = [&](KernelKind kind, const DilationVector& n, std::string* grid) {
    NormResult r;
    try {
      r = engine.l1_norm(kind, n);
    } catch (const NonConvergence& e) {
      r = e.result();
      out.all_converged = false;
      out.warnings.push_back("row " + std::to_string(row_index + 1) + ": " + to_string(kind) +
                             " not converged, last change " + format_double(r.error_estimate));
    }
    if (grid) {
      GridSpec spec;
      spec.counts = r.grid;
      *grid = spec.label();
    }
    return r.value;
  };
  for (; row_index < rows.size(); ++row_index) {
    const auto start = std::chrono::steady_clock::now();
    const DilationVector n(rows[row_index]);
    const std::size_t d = n.dim();
    SweepRecord rec;
    rec.n = rows[row_index];
    rec.norm_D = norm_of(KernelKind::D, n, &rec.grid);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.norm_S = d >= 2 && options.with_S ? norm_of(KernelKind::S, n, nullptr) : nan;
    rec.norm_F = norm_of(KernelKind::F, n, nullptr);
    const bool predictable = n.sorted_ascending() && n[0] > 3.0;
    std::map<int, double> frak;
    for (int k = 2; k <= static_cast<int>(d); ++k) {
      double v = nan;
      if (options.with_frak && predictable) {
        try {
          v = engine.frak_f(k, n, options.frak).value;
        } catch (const NonConvergence&) {
          out.all_converged = false;
          out.warnings.push_back("row " + std::to_string(row_index + 1) + ": frakF" + std::to_string(k) +
                                 " needs a norm that did not converge");
        }
      }
      rec.frak.push_back(v);
      frak[k] = v;
    }
    if (predictable) {
      rec.predictor = full_predictor(n, frak);
      rec.residual = rec.recompute_residual();
      rec.envelope = rec.predictor.envelope;
      rec.ratio = std::fabs(rec.residual) / rec.envelope;
    } else {
      rec.predictor.main = rec.predictor.total = rec.residual = rec.envelope = rec.ratio = nan;
      out.warnings.push_back("row " + std::to_string(row_index + 1) +
                             ": predictors need ascending entries above 3");
    }
    if (options.timing) {
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

std::string sweep_header(std::size_t d) {
  std::string h = "d";
  for (std::size_t j = 1; j <= d; ++j) h += ",n" + std::to_string(j);
  h += ",norm_D,norm_S,norm_F";
  for (std::size_t k = 2; k <= d; ++k) h += ",frakF" + std::to_string(k);
  h += ",main_term,residual,envelope,ratio,grid_M,seconds";
  return h;
}

std::string sweep_csv(const SweepOutcome& outcome, std::size_t d, const std::vector<std::string>& meta) {
  std::string s;
  for (const auto& m : meta) s += "# " + m + "\n";
  for (const auto& w : outcome.warnings) s += "# warning: " + w + "\n";
  s += sweep_header(d) + "\n";
  for (const auto& r : outcome.records) {
    s += std::to_string(d);
    for (double v : r.n) s += "," + format_double(v);
    s += "," + format_double(r.norm_D) + "," + format_double(r.norm_S) + "," + format_double(r.norm_F);
    for (double v : r.frak) s += "," + format_double(v);
    s += "," + format_double(r.predictor.main) + "," + format_double(r.residual) + "," + format_double(r.envelope) +
         "," + format_double(r.ratio) + "," + r.grid + "," + format_double(r.seconds) + "\n";
  }
  return s;
}

std::string irrational_csv(const RatioStudy& study, const std::vector<std::string>& meta) {
  std::string s;
  for (const auto& m : meta) s += "# " + m + "\n";
  s += "n,I_n,ratio,is_convergent_q\n";
  for (const auto& r : study.records) {
    s += std::to_string(r.n) + "," + format_double(r.I_n) + "," + format_double(r.ratio) + "," +
         (r.is_convergent_q ? "1" : "0") + "\n";
  }
  return s;
}

}  // namespace lebesgue
