#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include <json.hpp>

#include "lebesgue/errors.hpp"
#include "lebesgue/lebesgue.h"

using nlohmann::json;

namespace {

struct Context {
  leb_context* ctx = nullptr;
  explicit Context(const leb_options* o = nullptr) { REQUIRE(leb_context_create(o, &ctx) == LEB_OK); }
  ~Context() { leb_context_destroy(ctx); }
};

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::string(leb_version()) == "1.0.0");
  CHECK(std::string(leb_status_string(LEB_OK)).size() > 0);
  CHECK(std::string(leb_status_string(LEB_PRECISION_EXHAUSTED)).size() > 0);
  CHECK(std::string(leb_status_string(99)).size() > 0);
}

TEST_CASE("options") {
  leb_options o;
  leb_options_default(&o);
  CHECK(o.tol == 1e-3);
  CHECK(o.rho == 4);
  CHECK(o.max_doublings == 4);
  CHECK(o.mu_range == LEB_MU_THEOREM);
  o.tol = -1.0;
  leb_context* ctx = nullptr;
  CHECK(leb_context_create(&o, &ctx) == LEB_INVALID_ARGUMENT);
  CHECK(ctx == nullptr);
  CHECK(std::string(leb_last_error()).size() > 0);
  CHECK(leb_context_create(nullptr, nullptr) == LEB_INVALID_ARGUMENT);
}

TEST_CASE("norms through the C interface") {
  leb_options o;
  leb_options_default(&o);
  o.tol = 1e-8;
  o.max_doublings = 12;
  Context c(&o);
  const double n[] = {2.0};
  leb_norm_result* r = nullptr;
  REQUIRE(leb_norm(c.ctx, "D", n, 1, &r) == LEB_OK);
  const double exact = 2 * std::numbers::pi / 3 + 4 * std::sqrt(3.0);
  CHECK(leb_norm_value(r) == doctest::Approx(exact).epsilon(1e-7));
  CHECK(leb_norm_normalized(r) == doctest::Approx(leb_norm_value(r) / (2 * std::numbers::pi)));
  CHECK(leb_norm_converged(r) == 1);
  CHECK(leb_norm_parseval_error(r) < 1e-10);
  const auto j = json::parse(leb_norm_json(r));
  CHECK(j["value"].get<double>() == leb_norm_value(r));
  CHECK(j["kernel"] == "D");
  leb_norm_destroy(r);

  const double bad[] = {2.0, -1.0};
  r = nullptr;
  CHECK(leb_norm(c.ctx, "D", bad, 2, &r) == LEB_INVALID_ARGUMENT);
  CHECK(r == nullptr);
  CHECK(leb_norm(c.ctx, "Q", n, 1, &r) == LEB_INVALID_ARGUMENT);
  CHECK(leb_norm(c.ctx, "D", nullptr, 1, &r) == LEB_INVALID_ARGUMENT);
  CHECK(leb_norm(nullptr, "D", n, 1, &r) == LEB_INVALID_ARGUMENT);
}

TEST_CASE("non-convergence still returns a result") {
  leb_options o;
  leb_options_default(&o);
  o.tol = 1e-12;
  o.max_doublings = 1;
  Context c(&o);
  const double n[] = {40.0, 50.0};
  leb_norm_result* r = nullptr;
  CHECK(leb_norm(c.ctx, "D", n, 2, &r) == LEB_NOT_CONVERGED);
  REQUIRE(r != nullptr);
  CHECK(leb_norm_converged(r) == 0);
  CHECK(leb_norm_error_estimate(r) > 0.0);
  leb_norm_destroy(r);
}

TEST_CASE("identity verification") {
  Context c;
  const double n[] = {7.3, 19.6};
  leb_identity_report* r = nullptr;
  REQUIRE(leb_verify(c.ctx, n, 2, 20, 1024, 7, &r) == LEB_OK);
  CHECK(leb_identity_passed(r) == 1);
  CHECK(leb_identity_median_residual(r) <= leb_identity_max_residual(r));
  const auto j = json::parse(leb_identity_json(r));
  CHECK(j["points"] == 20);
  leb_identity_destroy(r);
  const double one[] = {5.0};
  r = nullptr;
  CHECK(leb_verify(c.ctx, one, 1, 20, 1024, 7, &r) == LEB_INVALID_ARGUMENT);
}

TEST_CASE("frak functional") {
  Context c;
  const double n[] = {8.0, 21.0};
  leb_frak_value* f = nullptr;
  REQUIRE(leb_frak(c.ctx, 2, n, 2, &f) == LEB_OK);
  leb_norm_result* r = nullptr;
  REQUIRE(leb_norm(c.ctx, "F", n, 2, &r) == LEB_OK);
  CHECK(std::isfinite(leb_frak_value_get(f)));
  CHECK(leb_frak_t_error(f) >= 0.0);
  CHECK(json::parse(leb_frak_json(f))["k"] == 2);
  leb_norm_destroy(r);
  leb_frak_destroy(f);
  const double desc[] = {21.0, 8.0};
  f = nullptr;
  CHECK(leb_frak(c.ctx, 2, desc, 2, &f) == LEB_INVALID_ARGUMENT);
}

TEST_CASE("alpha and continued fractions") {
  leb_alpha* a = nullptr;
  REQUIRE(leb_alpha_parse("rational:415/93", &a) == LEB_OK);
  CHECK(std::string(leb_alpha_label(a)) == "rational:415/93");
  leb_cf* cf = nullptr;
  REQUIRE(leb_cf_expand(a, 20, &cf) == LEB_OK);
  CHECK(leb_cf_length(cf) == 3);
  CHECK(leb_cf_terminated(cf) == 1);
  const auto j = json::parse(leb_cf_json(cf));
  CHECK(j["a0"] == "4");
  CHECK(j["quotients"] == json::array({"2", "6", "7"}));
  leb_cf_destroy(cf);

  Context c;
  double v = 0.0;
  CHECK(leb_I_n(c.ctx, a, 64, &v) == LEB_OK);
  CHECK(v > 0.0);
  leb_alpha_destroy(a);

  leb_alpha* bad = nullptr;
  CHECK(leb_alpha_parse("pi", &bad) == LEB_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
}

TEST_CASE("csv producers") {
  Context c;
  const char* axes[] = {"list(8,16)", "2*n1"};
  char* csv = nullptr;
  REQUIRE(leb_sweep_csv(c.ctx, axes, 2, 1, 1, 0, "run=test", &csv) == LEB_OK);
  const std::string s(csv);
  leb_string_free(csv);
  CHECK(s.rfind("# run=test\n", 0) == 0);
  CHECK(s.find("d,n1,n2,norm_D") != std::string::npos);
  CHECK(s.find("\n2,16,32,") != std::string::npos);

  const char* bad_axes[] = {"geom(16,256)"};
  csv = nullptr;
  CHECK(leb_sweep_csv(c.ctx, bad_axes, 1, 1, 1, 0, "", &csv) == LEB_INVALID_ARGUMENT);

  leb_alpha* a = nullptr;
  REQUIRE(leb_alpha_parse("golden", &a) == LEB_OK);
  const size_t grid[] = {16, 32, 64};
  char* summary = nullptr;
  REQUIRE(leb_irrational_csv(c.ctx, a, grid, 3, "", &csv, &summary) == LEB_OK);
  CHECK(std::string(csv).find("n,I_n,ratio,is_convergent_q") != std::string::npos);
  const auto j = json::parse(summary);
  CHECK(j.contains("omega_estimate"));
  leb_string_free(csv);
  leb_string_free(summary);
  leb_alpha_destroy(a);
}
