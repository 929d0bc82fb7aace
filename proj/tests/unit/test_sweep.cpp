#include <doctest.h>

#include <charconv>
#include <cmath>
#include <vector>

#include "lebesgue/errors.hpp"
#include "lebesgue/sweep.hpp"

using namespace lebesgue;

TEST_CASE("geometric and linear axes hit their endpoints exactly") {
  CHECK(parse_axis("geom(16,256,5)", 0).values == std::vector<double>{16, 32, 64, 128, 256});
  CHECK(parse_axis("lin(2, 10, 5)", 0).values == std::vector<double>{2, 4, 6, 8, 10});
  CHECK(parse_axis("list(3, 7.5, 1e2)", 0).values == std::vector<double>{3, 7.5, 100});
  CHECK(parse_axis("geom(1, 1000, 4)", 0).values == std::vector<double>{1, 10, 100, 1000});
  CHECK(parse_axis("2^5", 0).values == std::vector<double>{32});
  CHECK(parse_axis("exp(1)", 0).values[0] == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("derived axes reference earlier axes") {
  const auto rows = expand_sweep({"geom(16,64,3)", "pow(n1,2)"});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<double>{16, 256});
  CHECK(rows[2] == std::vector<double>{64, 4096});
  const auto grid = expand_sweep({"list(2,3)", "list(5,7)", "n1*n2 + 1"});
  REQUIRE(grid.size() == 4);
  CHECK(grid[1] == std::vector<double>{2, 7, 15});
  CHECK(grid[2] == std::vector<double>{3, 5, 16});
  CHECK(evaluate_expression("max(n1, n2) - floor(2.5) + sqrt(16)", {3, 9}) == 11.0);
  CHECK(evaluate_expression("-2^2", {}) == -4.0);
  CHECK(evaluate_expression("log(e) + pi", {}) == doctest::Approx(1 + std::acos(-1.0)));
}

TEST_CASE("sweep grammar errors") {
  CHECK_THROWS_AS(parse_axis("geom(16,256)", 0), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("geom(0,256,3)", 0), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("lin(1,2,x)", 0), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("", 0), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("3 +", 0), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("foo(2)", 0), InvalidArgument);
  CHECK_THROWS_AS(expand_sweep({"n2", "4"}), InvalidArgument);
  CHECK_THROWS_AS(expand_sweep({"4", "n2"}), InvalidArgument);
  CHECK_THROWS_AS(expand_sweep({"list(2,3)", "n1 - 3"}), InvalidArgument);
  CHECK_THROWS_AS(expand_sweep({}), InvalidArgument);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 5.576410134, 1e-300, 123456789.123456789, -2.5}) {
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("csv header") {
  CHECK(sweep_header(2) == "d,n1,n2,norm_D,norm_S,norm_F,frakF2,main_term,residual,envelope,ratio,grid_M,seconds");
  CHECK(sweep_header(1) == "d,n1,norm_D,norm_S,norm_F,main_term,residual,envelope,ratio,grid_M,seconds");
}

TEST_CASE("sweep rows agree with the engine") {
  NormEngine engine;
  const auto rows = expand_sweep({"list(8, 16)", "2*n1"});
  const auto out = run_sweep(engine, rows, {});
  REQUIRE(out.records.size() == 2);
  CHECK(out.all_converged);
  NormEngine fresh;
  for (const auto& r : out.records) {
    const DilationVector n(r.n);
    CHECK(r.norm_D == fresh.l1_norm(KernelKind::D, n).value);
    CHECK(r.norm_S == fresh.l1_norm(KernelKind::S, n).value);
    CHECK(r.norm_F == fresh.l1_norm(KernelKind::F, n).value);
    CHECK(r.frak[0] == fresh.frak_f(2, n).value);
    CHECK(r.residual == r.recompute_residual());
    CHECK(r.envelope == doctest::Approx(std::log(std::log(r.n[0])) * std::log(r.n[1])));
    CHECK(r.ratio == doctest::Approx(std::fabs(r.residual) / r.envelope));
    CHECK(r.seconds == 0.0);
  }
}

TEST_CASE("rows without predictors") {
  NormEngine engine;
  SweepOptions o;
  o.with_S = false;
  const auto out = run_sweep(engine, {{9, 5}, {3, 4}}, o);
  for (const auto& r : out.records) {
    CHECK(std::isnan(r.norm_S));
    CHECK(std::isnan(r.residual));
    CHECK(std::isnan(r.frak[0]));
  }
  CHECK(out.warnings.size() == 2);
  CHECK(sweep_csv(out, 2, {"m"}).find("# warning: row 1") != std::string::npos);
}

TEST_CASE("sweep output does not depend on the worker count") {
  NormOptions a;
  a.workers = 1;
  NormOptions b;
  b.workers = 4;
  NormEngine one(a), four(b);
  const auto rows = expand_sweep({"geom(16,64,3)", "n1 + 5"});
  const auto meta = convention_lines(a, {});
  CHECK(sweep_csv(run_sweep(one, rows, {}), 2, meta) == sweep_csv(run_sweep(four, rows, {}), 2, meta));
}

TEST_CASE("isotropic ratios stay finite") {
  NormEngine engine;
  SweepOptions o;
  o.with_S = false;
  const auto out = run_sweep(engine, expand_sweep({"geom(16,64,3)", "n1"}), o);
  for (const auto& r : out.records) {
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio > 0.0);
  }
}
