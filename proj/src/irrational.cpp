#include "lebesgue/irrational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include <mpfr.h>

#include "parallel.hpp"

namespace lebesgue {

namespace {

constexpr unsigned kMaxPrecisionBits = 1u << 16;
constexpr double kCertifiedWidth = 0x1.0p-41;
constexpr std::size_t kMaxLiouvilleBits = std::size_t{1} << 22;

mpz_class parse_integer(const std::string& text, const std::string& what) {
  mpz_class v;
  if (text.empty() || v.set_str(text, 10) != 0) throw InvalidArgument("cannot parse " + what + " '" + text + "'");
  return v;
}

unsigned long parse_unsigned(const std::string& text, const std::string& what) {
  const mpz_class v = parse_integer(text, what);
  if (v < 0 || !v.fits_ulong_p()) throw InvalidArgument(what + " out of range: " + text);
  return v.get_ui();
}

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// floor((P + sqrt(D)) / Q) for non-square D > 0 and Q != 0.
mpz_class surd_floor(const mpz_class& P, const mpz_class& D, const mpz_class& Q) {
  const mpz_class s = sqrt(D);
  if (Q > 0) return floor_div(P + s, Q);
  return floor_div(-P - s - 1, -Q);
}

bool perfect_square(const mpz_class& v) { return mpz_perfect_square_p(v.get_mpz_t()) != 0; }

struct Mpfr {
  mpfr_t v;
  explicit Mpfr(unsigned bits) { mpfr_init2(v, bits); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

// Encloses {k (P + sqrt(D)) / Q}, Q > 0, and returns the midpoint once the
// enclosure is narrower than 2^-41; nullopt if `bits` is insufficient.
std::optional<double> certified_surd_fraction(const mpz_class& P, const mpz_class& D, const mpz_class& Q,
                                              unsigned long k, unsigned bits) {
  const mpz_class kk = k;
  const mpz_class kP = kk * P;
  const mpz_class kkD = kk * kk * D;
  const mpz_class whole = k == 0 ? mpz_class(0) : surd_floor(kP, kkD, Q);
  Mpfr lo(bits), hi(bits);
  mpfr_set_z(lo.v, kkD.get_mpz_t(), MPFR_RNDD);
  mpfr_sqrt(lo.v, lo.v, MPFR_RNDD);
  mpfr_add_z(lo.v, lo.v, kP.get_mpz_t(), MPFR_RNDD);
  mpfr_div_z(lo.v, lo.v, Q.get_mpz_t(), MPFR_RNDD);
  mpfr_sub_z(lo.v, lo.v, whole.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi.v, kkD.get_mpz_t(), MPFR_RNDU);
  mpfr_sqrt(hi.v, hi.v, MPFR_RNDU);
  mpfr_add_z(hi.v, hi.v, kP.get_mpz_t(), MPFR_RNDU);
  mpfr_div_z(hi.v, hi.v, Q.get_mpz_t(), MPFR_RNDU);
  mpfr_sub_z(hi.v, hi.v, whole.get_mpz_t(), MPFR_RNDU);
  Mpfr width(bits);
  mpfr_sub(width.v, hi.v, lo.v, MPFR_RNDU);
  if (mpfr_get_d(width.v, MPFR_RNDU) > kCertifiedWidth) return std::nullopt;
  mpfr_add(lo.v, lo.v, hi.v, MPFR_RNDN);
  mpfr_div_2ui(lo.v, lo.v, 1, MPFR_RNDN);
  return std::clamp(mpfr_get_d(lo.v, MPFR_RNDN), 0.0, std::nextafter(1.0, 0.0));
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace

const char* to_string(AlphaKind kind) {
  switch (kind) {
    case AlphaKind::rational: return "rational";
    case AlphaKind::quadratic: return "quadratic";
    case AlphaKind::liouville: return "liouville";
    case AlphaKind::decimal: return "decimal";
  }
  return "unknown";
}

AlphaSpec AlphaSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "golden" && colon == std::string::npos) return golden();
  if (colon == std::string::npos) throw InvalidArgument("unparsable alpha '" + text + "'");
  if (head == "rational") {
    const auto slash = body.find('/');
    if (slash == std::string::npos) return rational(parse_integer(body, "numerator"), 1);
    return rational(parse_integer(body.substr(0, slash), "numerator"),
                    parse_integer(body.substr(slash + 1), "denominator"));
  }
  if (head == "sqrt") return quadratic(0, parse_integer(body, "radicand"), 1);
  if (head == "liouville") {
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw InvalidArgument("liouville needs base,depth: '" + text + "'");
    const auto b = parse_unsigned(body.substr(0, comma), "liouville base");
    const auto m = parse_unsigned(body.substr(comma + 1), "liouville depth");
    if (m > 64) throw InvalidArgument("liouville depth out of range");
    return liouville(b, static_cast<unsigned>(m));
  }
  if (head == "dec") return decimal(body);
  throw InvalidArgument("unparsable alpha '" + text + "'");
}

AlphaSpec AlphaSpec::rational(const mpz_class& p, const mpz_class& q) {
  if (q == 0) throw InvalidArgument("zero denominator");
  AlphaSpec a;
  a.kind_ = AlphaKind::rational;
  a.exact_ = mpq_class(p, q);
  a.exact_.canonicalize();
  a.label_ = "rational:" + a.exact_.get_num().get_str() + "/" + a.exact_.get_den().get_str();
  return a;
}

AlphaSpec AlphaSpec::golden() {
  AlphaSpec a = quadratic(1, 5, 2);
  a.label_ = "golden";
  return a;
}

AlphaSpec AlphaSpec::quadratic(const mpz_class& P, const mpz_class& D, const mpz_class& Q) {
  if (D <= 0 || perfect_square(D)) throw InvalidArgument("quadratic irrational needs a positive non-square radicand");
  if (Q <= 0) throw InvalidArgument("quadratic irrational needs a positive denominator");
  AlphaSpec a;
  a.kind_ = AlphaKind::quadratic;
  a.P_ = P;
  a.D_ = D;
  a.Q_ = Q;
  a.label_ = "quadratic:(" + P.get_str() + "+sqrt(" + D.get_str() + "))/" + Q.get_str();
  return a;
}

AlphaSpec AlphaSpec::liouville(unsigned long base, unsigned depth) {
  if (base < 2) throw InvalidArgument("liouville base must be at least 2");
  if (depth < 1) throw InvalidArgument("liouville depth must be at least 1");
  AlphaSpec a;
  a.kind_ = AlphaKind::liouville;
  a.base_ = base;
  a.depth_ = depth;
  unsigned long factorial = 1;
  const double bits_per_digit = std::log2(static_cast<double>(base));
  a.exact_ = 0;
  for (unsigned j = 1; j <= depth; ++j) {
    factorial *= j;
    if (static_cast<double>(factorial) * bits_per_digit > static_cast<double>(kMaxLiouvilleBits)) {
      throw ResourceLimit("liouville truncation denominator too large", static_cast<double>(factorial) * bits_per_digit);
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), base, factorial);
    a.exact_ += mpq_class(1, den);
  }
  a.exact_.canonicalize();
  a.label_ = "liouville:" + std::to_string(base) + "," + std::to_string(depth);
  return a;
}

AlphaSpec AlphaSpec::decimal(const std::string& literal) {
  std::string digits = literal;
  while (!digits.empty() && digits.back() == '.') digits.pop_back();  // tolerate a trailing "..."
  bool negative = false;
  std::size_t pos = 0;
  if (pos < digits.size() && (digits[pos] == '-' || digits[pos] == '+')) negative = digits[pos++] == '-';
  std::string whole, frac;
  bool seen_point = false;
  for (; pos < digits.size(); ++pos) {
    const char c = digits[pos];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      (seen_point ? frac : whole) += c;
    } else {
      throw InvalidArgument("unparsable decimal literal '" + literal + "'");
    }
  }
  if (whole.empty() && frac.empty()) throw InvalidArgument("unparsable decimal literal '" + literal + "'");
  mpz_class num(whole + frac == "" ? "0" : whole + frac, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  AlphaSpec a;
  a.kind_ = AlphaKind::decimal;
  a.exact_ = mpq_class(negative ? mpz_class(-num) : num, den);
  a.exact_.canonicalize();
  a.label_ = "dec:" + std::string(negative ? "-" : "") + (whole.empty() ? "0" : whole) + (frac.empty() ? "" : "." + frac);
  return a;
}

const mpq_class& AlphaSpec::exact() const {
  if (!is_exact_rational()) throw InvalidArgument(label_ + " is not an exact rational");
  return exact_;
}

double AlphaSpec::to_double() const {
  if (is_exact_rational()) return exact_.get_d();
  Mpfr v(precision_bits);
  mpfr_set_z(v.v, D_.get_mpz_t(), MPFR_RNDN);
  mpfr_sqrt(v.v, v.v, MPFR_RNDN);
  mpfr_add_z(v.v, v.v, P_.get_mpz_t(), MPFR_RNDN);
  mpfr_div_z(v.v, v.v, Q_.get_mpz_t(), MPFR_RNDN);
  return mpfr_get_d(v.v, MPFR_RNDN);
}

std::vector<mpz_class> AlphaSpec::liouville_denominators() const {
  std::vector<mpz_class> out;
  if (kind_ != AlphaKind::liouville) return out;
  unsigned long factorial = 1;
  for (unsigned j = 1; j <= depth_; ++j) {
    factorial *= j;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), base_, factorial);
    out.push_back(den);
  }
  return out;
}

ContinuedFraction cf_expand(const AlphaSpec& alpha, std::size_t max_terms) {
  ContinuedFraction cf;
  std::vector<mpz_class> a;
  if (alpha.is_exact_rational()) {
    mpz_class num = alpha.exact().get_num();
    mpz_class den = alpha.exact().get_den();
    while (den != 0 && a.size() <= max_terms) {
      const mpz_class quot = floor_div(num, den);
      a.push_back(quot);
      num -= quot * den;
      std::swap(num, den);
    }
    cf.terminated = den == 0;
  } else {
    // complete quotients (P + sqrt(D)) / Q with Q | D - P^2
    mpz_class P = alpha.surd_P(), D = alpha.surd_D(), Q = alpha.surd_Q();
    if (((D - P * P) % Q) != 0) {
      const mpz_class aq = abs(Q);
      P *= aq;
      D *= aq * aq;
      Q *= aq;
    }
    while (a.size() <= max_terms) {
      const mpz_class quot = surd_floor(P, D, Q);
      a.push_back(quot);
      P = quot * Q - P;
      Q = (D - P * P) / Q;
    }
  }
  cf.a0 = a.front();
  cf.quotients.assign(a.begin() + 1, a.end());
  mpz_class p_prev = 1, q_prev = 0, p_cur = cf.a0, q_cur = 1;
  cf.p.push_back(p_cur);
  cf.q.push_back(q_cur);
  for (const auto& ak : cf.quotients) {
    const mpz_class p_next = ak * p_cur + p_prev;
    const mpz_class q_next = ak * q_cur + q_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    cf.p.push_back(p_cur);
    cf.q.push_back(q_cur);
  }
  return cf;
}

std::vector<double> fractional_parts(const AlphaSpec& alpha, std::size_t n) {
  std::vector<double> out(n + 1, 0.0);
  if (alpha.is_exact_rational()) {
    const mpz_class& p = alpha.exact().get_num();
    const mpz_class& q = alpha.exact().get_den();
    mpz_class r = 0;  // p k mod q, stepped incrementally
    mpz_class step;
    mpz_fdiv_r(step.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    for (std::size_t k = 0; k <= n; ++k) {
      out[k] = mpq_class(r, q).get_d();
      r += step;
      if (r >= q) r -= q;
    }
    return out;
  }
  unsigned bits = std::max(alpha.precision_bits, 64u);
  for (std::size_t k = 0; k <= n; ++k) {
    for (;;) {
      auto v = certified_surd_fraction(alpha.surd_P(), alpha.surd_D(), alpha.surd_Q(), k, bits);
      if (v) {
        out[k] = *v;
        break;
      }
      bits *= 2;
      if (bits > kMaxPrecisionBits) {
        throw PrecisionExhausted("cannot certify {alpha k} for k = " + std::to_string(k) + " within 2^-40");
      }
    }
  }
  return out;
}

CoefficientField alpha_field(const AlphaSpec& alpha, std::size_t n) {
  const auto parts = fractional_parts(alpha, n);
  CoefficientField field(std::vector<int>{static_cast<int>(n + 1)}, FieldTag::fractional);
  for (std::size_t k = 0; k <= n; ++k) field[k] = parts[k];
  return field;
}

NormResult I_n(const NormEngine& engine, const AlphaSpec& alpha, std::size_t n) {
  if (n > static_cast<std::size_t>(std::numeric_limits<int>::max() - 1)) throw InvalidArgument("n too large");
  auto result = engine.field_norm(alpha_field(alpha, n));
  result.kernel = "I_n";
  return result;
}

double rational_period_norm(const AlphaSpec& alpha, std::size_t n, std::size_t m) {
  if (m == 0) throw InvalidArgument("grid needs at least one node");
  const mpz_class& den = alpha.exact().get_den();
  if (!den.fits_ulong_p()) throw InvalidArgument("denominator too large for the period route");
  const std::size_t q = den.get_ui();
  const std::size_t period = std::min(q, n + 1);
  const auto weights = fractional_parts(alpha, period - 1);
  const std::size_t blocks = (n + 1) / q;
  const std::size_t rest = (n + 1) - blocks * q;
  // node t sits at x = pi (2t - m) / m; multiples of x are reduced in integers
  const unsigned long long twice_m = 2ull * m;
  auto angle = [&](unsigned long long k, std::size_t t) {
    const unsigned long long r = (k % twice_m) * ((2ull * t + m) % twice_m) % twice_m;
    return std::numbers::pi * static_cast<double>(r) / static_cast<double>(m);
  };
  double total = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    cplx head = 0.0, tail = 0.0;
    for (std::size_t r = 0; r < period; ++r) {
      const cplx term = weights[r] * std::polar(1.0, angle(r, t));
      head += term;
      if (r < rest) tail += term;
    }
    const cplx value = blocks > 0 ? head * geometric_sum(static_cast<long long>(blocks), angle(q, t)) +
                                        std::polar(1.0, angle(blocks * q, t)) * tail
                                  : tail;
    total += std::abs(value);
  }
  return 2.0 * std::numbers::pi / static_cast<double>(m) * total;
}

std::vector<std::size_t> convergent_denominators(const AlphaSpec& alpha, std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  const mpz_class bound = static_cast<unsigned long>(hi);
  ContinuedFraction cf = cf_expand(alpha, 8);
  while (!cf.terminated && cf.q.back() <= bound) cf = cf_expand(alpha, cf.quotients.size() * 2);
  for (const auto& q : cf.q) {
    if (q >= static_cast<unsigned long>(lo) && q <= bound) {
      const auto v = static_cast<std::size_t>(q.get_ui());
      if (out.empty() || out.back() != v) out.push_back(v);
    }
  }
  return out;
}

RatioStudy study_ratio(const NormEngine& engine, const AlphaSpec& alpha, const std::vector<std::size_t>& n_grid) {
  if (n_grid.empty()) throw InvalidArgument("the n grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw InvalidArgument("ratio study needs n >= 2 (ln n > 0)");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw InvalidArgument("the n grid must be increasing");
  }
  const auto denominators = convergent_denominators(alpha, n_grid.front(), n_grid.back());
  const std::set<std::size_t> convergent(denominators.begin(), denominators.end());

  auto chunks = detail::parallel_chunks<NormResult>(
      n_grid.size(), 1, engine.options().workers, [] { return 0; },
      [&](int&, std::size_t begin, std::size_t) { return I_n(engine, alpha, n_grid[begin]); });

  RatioStudy study;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const double log_n = std::log(static_cast<double>(n_grid[i]));
    const double ratio = chunks[i].value / (log_n * log_n);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    study.records.push_back({n_grid[i], chunks[i].value, ratio, convergent.count(n_grid[i]) > 0, lo, hi,
                             chunks[i].converged});
  }
  study.omega_estimate = lo;
  study.Omega_estimate = hi;
  return study;
}

DipReport liouville_dip_scan(const NormEngine& engine, const AlphaSpec& alpha, const std::vector<std::size_t>& n_grid) {
  if (n_grid.empty()) throw InvalidArgument("the n grid is empty");
  DipReport report;
  report.dip_factor = std::numeric_limits<double>::quiet_NaN();
  const std::size_t lo = std::max<std::size_t>(n_grid.front(), 16);
  const std::size_t hi = n_grid.back();
  if (alpha.kind() != AlphaKind::rational) {
    const auto denominators = convergent_denominators(alpha, lo, hi);
    if (alpha.kind() == AlphaKind::liouville) {
      for (const auto& q : alpha.liouville_denominators()) {
        if (q.fits_ulong_p() &&
            std::find(denominators.begin(), denominators.end(), q.get_ui()) != denominators.end()) {
          report.designated.push_back(q.get_ui());
        }
      }
    } else {
      report.designated = denominators;
    }
  }
  std::vector<std::size_t> generic;
  for (auto n : n_grid) {
    if (std::find(report.designated.begin(), report.designated.end(), n) == report.designated.end()) {
      generic.push_back(n);
    }
  }
  if (generic.empty()) throw InvalidArgument("the grid has no generic points");
  report.generic = study_ratio(engine, alpha, generic);
  std::vector<double> ratios;
  for (const auto& r : report.generic.records) ratios.push_back(r.ratio);
  report.generic_median = median(ratios);
  if (!report.designated.empty()) {
    const auto designated = study_ratio(engine, alpha, report.designated);
    for (const auto& r : designated.records) report.designated_ratios.push_back(r.ratio);
    const double worst = *std::min_element(report.designated_ratios.begin(), report.designated_ratios.end());
    report.dip_factor = worst > 0.0 ? report.generic_median / worst : std::numeric_limits<double>::infinity();
  }
  return report;
}

}  // namespace lebesgue
