#include "lebesgue/lebesgue.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "lebesgue/irrational.hpp"
#include "lebesgue/norms.hpp"
#include "lebesgue/sweep.hpp"

using nlohmann::json;
using namespace lebesgue;

struct leb_context {
  NormEngine engine;
  FrakOptions frak;
};

struct leb_norm_result {
  NormResult result;
  std::string json;
};

struct leb_identity_report {
  IdentityReport report;
  std::string json;
};

struct leb_frak_value {
  FrakFValue value;
  std::string json;
};

struct leb_alpha {
  AlphaSpec spec;
};

struct leb_cf {
  ContinuedFraction cf;
  std::string json;
};

namespace {

thread_local std::string last_error;

int fail(int status, const std::string& message) {
  last_error = message;
  return status;
}

int status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return LEB_INVALID_ARGUMENT;
    case ErrorCode::resource_limit: return LEB_RESOURCE_LIMIT;
    case ErrorCode::non_convergence: return LEB_NOT_CONVERGED;
    case ErrorCode::identity_violation: return LEB_IDENTITY_VIOLATION;
    case ErrorCode::precision_exhausted: return LEB_PRECISION_EXHAUSTED;
  }
  return LEB_INTERNAL;
}

template <class F>
int guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LEB_RESOURCE_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return fail(LEB_INTERNAL, e.what());
  } catch (...) {
    return fail(LEB_INTERNAL, "unknown failure");
  }
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json norm_json(const NormResult& r) {
  json history = json::array();
  for (const auto& step : r.history) history.push_back({{"grid", step.grid}, {"value", number(step.value)}});
  return {
      {"kernel", r.kernel},
      {"dim", r.dim},
      {"value", number(r.value)},
      {"normalized", number(r.normalized)},
      {"grid", r.grid},
      {"history", history},
      {"error_estimate", number(r.error_estimate)},
      {"converged", r.converged},
      {"parseval_rel_error", number(r.parseval_rel_error)},
      {"l2_normalized", number(r.l2_normalized)},
      {"coefficient_energy", number(r.coefficient_energy)},
  };
}

std::string complex_string(cplx z) { return format_double(z.real()) + (z.imag() < 0 ? "" : "+") + format_double(z.imag()) + "i"; }

json identity_json(const IdentityReport& r) {
  json failures = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(r.failures.size(), 10); ++i) {
    const auto& p = r.points[r.failures[i]];
    failures.push_back({{"x", p.x},
                        {"lhs", complex_string(p.lhs)},
                        {"rhs", complex_string(p.rhs)},
                        {"residual", number(p.residual)},
                        {"tail_bound", number(p.tail_bound)}});
  }
  return {
      {"points", r.points.size()},
      {"lattice_points", r.lattice_points},
      {"nu_max", r.nu_max},
      {"max_residual", number(r.max_residual)},
      {"median_residual", number(r.median_residual)},
      {"passed", r.passed},
      {"failures", r.failures.size()},
      {"worst", failures},
  };
}

json frak_json(const FrakFValue& f) {
  json terms = json::array();
  for (const auto& t : f.terms) {
    json mus = json::array();
    for (const auto& m : t.mu_terms) mus.push_back({{"mu", m.mu}, {"integral", number(m.integral)}});
    terms.push_back({{"l", t.l},
                     {"full", t.full},
                     {"swapped", t.swapped},
                     {"reduced", t.reduced},
                     {"norm_full", number(t.norm_full)},
                     {"norm_swapped", number(t.norm_swapped)},
                     {"norm_reduced", number(t.norm_reduced)},
                     {"mu_max", t.mu_max},
                     {"mu_sum", number(t.mu_sum)},
                     {"mu_terms", mus}});
  }
  return {{"k", f.k},
          {"value", number(f.value)},
          {"t_nodes", f.t_nodes},
          {"t_error", number(f.t_error)},
          {"mu_range", to_string(f.mu_range)},
          {"zero_dim_convention", f.zero_dim_convention ? "modulus" : "unused"},
          {"terms", terms}};
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

DilationVector dilation(const double* n, size_t d) {
  if (!n || d == 0) throw InvalidArgument("empty dilation vector");
  return DilationVector(std::vector<double>(n, n + d));
}

std::vector<std::string> meta_from(const char* meta_lines, const leb_context* ctx) {
  std::vector<std::string> meta;
  if (meta_lines) {
    std::string block(meta_lines);
    std::size_t start = 0;
    while (start <= block.size()) {
      const auto end = block.find('\n', start);
      const std::string line = block.substr(start, end == std::string::npos ? std::string::npos : end - start);
      if (!line.empty()) meta.push_back(line);
      if (end == std::string::npos) break;
      start = end + 1;
    }
  }
  for (auto& line : convention_lines(ctx->engine.options(), ctx->frak)) meta.push_back(std::move(line));
  return meta;
}

template <class T>
int require(T* p, const char* what) {
  if (!p) return fail(LEB_INVALID_ARGUMENT, std::string(what) + " is null");
  return LEB_OK;
}

}  // namespace

extern "C" {

const char* leb_version(void) { return library_version(); }

const char* leb_status_string(int status) {
  switch (status) {
    case LEB_OK: return "ok";
    case LEB_INVALID_ARGUMENT: return "invalid argument";
    case LEB_NOT_CONVERGED: return "quadrature not converged";
    case LEB_IDENTITY_VIOLATION: return "identity violation";
    case LEB_RESOURCE_LIMIT: return "resource limit";
    case LEB_PRECISION_EXHAUSTED: return "precision exhausted";
    case LEB_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* leb_last_error(void) { return last_error.c_str(); }

void leb_string_free(char* s) { std::free(s); }

void leb_options_default(leb_options* opts) {
  if (!opts) return;
  const NormOptions n;
  const FrakOptions f;
  opts->tol = n.tol;
  opts->rho = n.rho;
  opts->max_doublings = n.max_doublings;
  opts->nu_max = n.nu_max;
  opts->memory_budget = n.memory_budget;
  opts->workers = n.workers;
  opts->t_nodes = f.t_nodes;
  opts->mu_range = LEB_MU_THEOREM;
}

int leb_context_create(const leb_options* opts, leb_context** out) {
  if (int s = require(out, "out")) return s;
  return guarded([&]() -> int {
    leb_options o;
    leb_options_default(&o);
    if (opts) o = *opts;
    NormOptions n;
    n.tol = o.tol;
    n.rho = o.rho;
    n.max_doublings = o.max_doublings;
    n.nu_max = o.nu_max;
    n.memory_budget = o.memory_budget;
    n.workers = o.workers;
    FrakOptions f;
    if (o.t_nodes < 2) throw InvalidArgument("t_nodes must be at least 2");
    f.t_nodes = o.t_nodes;
    if (o.mu_range != LEB_MU_THEOREM && o.mu_range != LEB_MU_PROOF) throw InvalidArgument("unknown mu range");
    f.mu_range = o.mu_range == LEB_MU_PROOF ? MuRange::proof : MuRange::theorem;
    *out = new leb_context{NormEngine(n), f};
    return LEB_OK;
  });
}

void leb_context_destroy(leb_context* ctx) { delete ctx; }

int leb_norm(leb_context* ctx, const char* kernel, const double* n, size_t d, leb_norm_result** out) {
  if (int s = require(ctx, "context")) return s;
  if (int s = require(kernel, "kernel")) return s;
  if (int s = require(out, "out")) return s;
  *out = nullptr;
  return guarded([&]() -> int {
    const auto kind = parse_kernel(kernel);
    const auto n_vec = dilation(n, d);
    try {
      auto r = ctx->engine.l1_norm(kind, n_vec);
      *out = new leb_norm_result{r, norm_json(r).dump()};
      return LEB_OK;
    } catch (const NonConvergence& e) {
      *out = new leb_norm_result{e.result(), norm_json(e.result()).dump()};
      return fail(LEB_NOT_CONVERGED, e.what());
    }
  });
}

double leb_norm_value(const leb_norm_result* r) { return r ? r->result.value : std::numeric_limits<double>::quiet_NaN(); }
double leb_norm_normalized(const leb_norm_result* r) {
  return r ? r->result.normalized : std::numeric_limits<double>::quiet_NaN();
}
double leb_norm_error_estimate(const leb_norm_result* r) {
  return r ? r->result.error_estimate : std::numeric_limits<double>::quiet_NaN();
}
double leb_norm_parseval_error(const leb_norm_result* r) {
  return r ? r->result.parseval_rel_error : std::numeric_limits<double>::quiet_NaN();
}
int leb_norm_converged(const leb_norm_result* r) { return r && r->result.converged; }
const char* leb_norm_json(const leb_norm_result* r) { return r ? r->json.c_str() : ""; }
void leb_norm_destroy(leb_norm_result* r) { delete r; }

int leb_verify(leb_context* ctx, const double* n, size_t d, size_t points, int nu_max, uint64_t seed,
               leb_identity_report** out) {
  if (int s = require(ctx, "context")) return s;
  if (int s = require(out, "out")) return s;
  *out = nullptr;
  return guarded([&]() -> int {
    auto report = ctx->engine.verify_identity(dilation(n, d), points, nu_max, seed);
    const bool passed = report.passed;
    auto j = identity_json(report).dump();
    *out = new leb_identity_report{std::move(report), std::move(j)};
    if (!passed) return fail(LEB_IDENTITY_VIOLATION, "residual above the tail bound");
    return LEB_OK;
  });
}

int leb_identity_passed(const leb_identity_report* r) { return r && r->report.passed; }
double leb_identity_max_residual(const leb_identity_report* r) {
  return r ? r->report.max_residual : std::numeric_limits<double>::quiet_NaN();
}
double leb_identity_median_residual(const leb_identity_report* r) {
  return r ? r->report.median_residual : std::numeric_limits<double>::quiet_NaN();
}
const char* leb_identity_json(const leb_identity_report* r) { return r ? r->json.c_str() : ""; }
void leb_identity_destroy(leb_identity_report* r) { delete r; }

int leb_frak(leb_context* ctx, int k, const double* n, size_t d, leb_frak_value** out) {
  if (int s = require(ctx, "context")) return s;
  if (int s = require(out, "out")) return s;
  *out = nullptr;
  return guarded([&]() -> int {
    auto v = ctx->engine.frak_f(k, dilation(n, d), ctx->frak);
    auto j = frak_json(v).dump();
    *out = new leb_frak_value{std::move(v), std::move(j)};
    return LEB_OK;
  });
}

double leb_frak_value_get(const leb_frak_value* f) { return f ? f->value.value : std::numeric_limits<double>::quiet_NaN(); }
double leb_frak_t_error(const leb_frak_value* f) { return f ? f->value.t_error : std::numeric_limits<double>::quiet_NaN(); }
const char* leb_frak_json(const leb_frak_value* f) { return f ? f->json.c_str() : ""; }
void leb_frak_destroy(leb_frak_value* f) { delete f; }

int leb_alpha_parse(const char* text, leb_alpha** out) {
  if (int s = require(text, "alpha")) return s;
  if (int s = require(out, "out")) return s;
  *out = nullptr;
  return guarded([&]() -> int {
    *out = new leb_alpha{AlphaSpec::parse(text)};
    return LEB_OK;
  });
}

const char* leb_alpha_label(const leb_alpha* a) { return a ? a->spec.label().c_str() : ""; }
void leb_alpha_destroy(leb_alpha* a) { delete a; }

int leb_cf_expand(const leb_alpha* a, size_t max_terms, leb_cf** out) {
  if (int s = require(a, "alpha")) return s;
  if (int s = require(out, "out")) return s;
  *out = nullptr;
  return guarded([&]() -> int {
    auto cf = cf_expand(a->spec, max_terms);
    json quotients = json::array(), p = json::array(), q = json::array();
    for (const auto& v : cf.quotients) quotients.push_back(v.get_str());
    for (const auto& v : cf.p) p.push_back(v.get_str());
    for (const auto& v : cf.q) q.push_back(v.get_str());
    json j = {{"alpha", a->spec.label()},
              {"a0", cf.a0.get_str()},
              {"quotients", quotients},
              {"p", p},
              {"q", q},
              {"terminated", cf.terminated},
              {"precision_exhausted", cf.precision_exhausted}};
    *out = new leb_cf{std::move(cf), j.dump()};
    return LEB_OK;
  });
}

size_t leb_cf_length(const leb_cf* cf) { return cf ? cf->cf.quotients.size() : 0; }
int leb_cf_terminated(const leb_cf* cf) { return cf && cf->cf.terminated; }
const char* leb_cf_json(const leb_cf* cf) { return cf ? cf->json.c_str() : ""; }
void leb_cf_destroy(leb_cf* cf) { delete cf; }

int leb_I_n(leb_context* ctx, const leb_alpha* a, size_t n, double* value) {
  if (int s = require(ctx, "context")) return s;
  if (int s = require(a, "alpha")) return s;
  if (int s = require(value, "value")) return s;
  return guarded([&]() -> int {
    const auto r = I_n(ctx->engine, a->spec, n);
    *value = r.value;
    if (!r.converged) return fail(LEB_NOT_CONVERGED, "I_n quadrature did not converge");
    return LEB_OK;
  });
}

int leb_sweep_csv(leb_context* ctx, const char* const* axes, size_t d, int with_S, int with_frak, int timing,
                  const char* meta_lines, char** csv) {
  if (int s = require(ctx, "context")) return s;
  if (int s = require(axes, "axes")) return s;
  if (int s = require(csv, "csv")) return s;
  *csv = nullptr;
  return guarded([&]() -> int {
    std::vector<std::string> texts;
    for (size_t j = 0; j < d; ++j) {
      if (!axes[j]) throw InvalidArgument("axis expression is null");
      texts.emplace_back(axes[j]);
    }
    const auto rows = expand_sweep(texts);
    SweepOptions options;
    options.with_S = with_S != 0;
    options.with_frak = with_frak != 0;
    options.timing = timing != 0;
    options.frak = ctx->frak;
    const auto outcome = run_sweep(ctx->engine, rows, options);
    *csv = duplicate(sweep_csv(outcome, d, meta_from(meta_lines, ctx)));
    if (!outcome.all_converged) return fail(LEB_NOT_CONVERGED, "some norms did not converge");
    return LEB_OK;
  });
}

int leb_irrational_csv(leb_context* ctx, const leb_alpha* a, const size_t* n_grid, size_t count,
                       const char* meta_lines, char** csv, char** summary_json) {
  if (int s = require(ctx, "context")) return s;
  if (int s = require(a, "alpha")) return s;
  if (int s = require(n_grid, "n_grid")) return s;
  if (int s = require(csv, "csv")) return s;
  *csv = nullptr;
  if (summary_json) *summary_json = nullptr;
  return guarded([&]() -> int {
    const auto study = study_ratio(ctx->engine, a->spec, std::vector<size_t>(n_grid, n_grid + count));
    const auto meta = meta_from(meta_lines, ctx);
    bool converged = true;
    std::vector<double> generic;
    double at_convergent = std::numeric_limits<double>::infinity();
    size_t convergent_rows = 0;
    for (const auto& r : study.records) {
      converged = converged && r.converged;
      if (r.is_convergent_q) {
        ++convergent_rows;
        at_convergent = std::min(at_convergent, r.ratio);
      } else {
        generic.push_back(r.ratio);
      }
    }
    double median = std::numeric_limits<double>::quiet_NaN();
    if (!generic.empty()) {
      std::sort(generic.begin(), generic.end());
      const size_t m = generic.size();
      median = m % 2 ? generic[m / 2] : 0.5 * (generic[m / 2 - 1] + generic[m / 2]);
    }
    json summary = {
        {"alpha", a->spec.label()},
        {"points", study.records.size()},
        {"omega_estimate", number(study.omega_estimate)},
        {"Omega_estimate", number(study.Omega_estimate)},
        {"estimator_note", "running min/max of I_n/ln^2 n over the grid; finite-n estimators, not limits"},
        {"convergent_rows", convergent_rows},
        {"median_ratio_generic", number(median)},
        {"min_ratio_at_convergent_q", convergent_rows ? number(at_convergent) : json(nullptr)},
        {"dip_factor", convergent_rows && at_convergent > 0 ? number(median / at_convergent) : json(nullptr)},
        {"all_converged", converged},
        {"metadata", meta},
    };
    *csv = duplicate(irrational_csv(study, meta));
    if (summary_json) *summary_json = duplicate(summary.dump(2) + "\n");
    if (!converged) return fail(LEB_NOT_CONVERGED, "some I_n did not converge");
    return LEB_OK;
  });
}

}  // extern "C"
