#include <lebesgue/lebesgue.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitIdentity = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(int status) {
  switch (status) {
    case LEB_OK: return kExitOk;
    case LEB_NOT_CONVERGED: return kExitNotConverged;
    case LEB_IDENTITY_VIOLATION: return kExitIdentity;
    default: return kExitUsage;
  }
}

std::vector<double> parse_tuple(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw UsageError("malformed n-tuple '" + text + "'");
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

struct Settings {
  double tol = 1e-3;
  int rho = 4;
  int max_doublings = 4;
  int nu_max = 4096;
  std::uint64_t memory_budget = 0;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  int t_nodes = 64;
  std::string mu_range = "theorem";
};

// Unsectioned keys of a flat config file belong to the chosen subcommand.
class FlatConfig : public CLI::ConfigBase {
 public:
  std::string target;

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigBase::from_config(input);
    if (!target.empty()) {
      for (auto& item : items) {
        if (item.parents.empty()) item.parents.insert(item.parents.begin(), target);
      }
    }
    return items;
  }
};

void add_engine_options(CLI::App* app, Settings& s) {
  app->add_option("--tol", s.tol, "relative change between refinements")->capture_default_str();
  app->add_option("--rho", s.rho, "oversampling of the coarsest grid")->capture_default_str();
  app->add_option("--max-doublings", s.max_doublings, "grid doublings before giving up")->capture_default_str();
  app->add_option("--nu-max", s.nu_max, "truncation of the R series")->capture_default_str();
  app->add_option("--memory-budget", s.memory_budget, "cap on complex entries per allocation (0 = default)")
      ->capture_default_str();
  app->add_option("--workers", s.workers, "worker threads")->envname("LEBESGUE_WORKERS")->capture_default_str();
  app->add_option("--t-nodes", s.t_nodes, "trapezoid nodes of the frak-F t-integral")->capture_default_str();
  app->add_option("--mu-range", s.mu_range, "frak-F mu range: theorem or proof")
      ->check(CLI::IsMember({"theorem", "proof"}))
      ->capture_default_str();
}

struct Context {
  leb_context* ctx = nullptr;
  ~Context() { leb_context_destroy(ctx); }
};

void open_context(const Settings& s, Context& c) {
  leb_options o;
  leb_options_default(&o);
  o.tol = s.tol;
  o.rho = s.rho;
  o.max_doublings = s.max_doublings;
  o.nu_max = s.nu_max;
  if (s.memory_budget) o.memory_budget = s.memory_budget;
  o.workers = s.workers;
  o.t_nodes = s.t_nodes;
  o.mu_range = s.mu_range == "proof" ? LEB_MU_PROOF : LEB_MU_THEOREM;
  if (const int st = leb_context_create(&o, &c.ctx)) throw UsageError(leb_last_error());
}

std::vector<std::string> config_lines(const CLI::App& app) {
  std::vector<std::string> lines;
  std::istringstream in(app.config_to_str(true, false));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back("config " + line);
  }
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  return s;
}

json envelope(const CLI::App& app, const Settings& s, const char* result_json) {
  return {{"version", leb_version()},
          {"config", config_lines(app)},
          {"conventions",
           {{"normalization", "plain; normalized = value / (2pi)^s"},
            {"mu_range", s.mu_range},
            {"zero_dim_norm", "modulus"}}},
          {"result", json::parse(result_json)}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  out << text;
}

void report_status(int status) {
  if (status != LEB_OK) std::fprintf(stderr, "lebesgue: %s: %s\n", leb_status_string(status), leb_last_error());
}

int run_norm(const CLI::App& app, const Settings& s, const std::string& kernel, const std::string& n_text) {
  const auto n = parse_tuple(n_text);
  Context c;
  open_context(s, c);
  leb_norm_result* r = nullptr;
  const int st = leb_norm(c.ctx, kernel.c_str(), n.data(), n.size(), &r);
  std::unique_ptr<leb_norm_result, decltype(&leb_norm_destroy)> guard(r, leb_norm_destroy);
  report_status(st);
  if (r) std::cout << envelope(app, s, leb_norm_json(r)).dump(2) << "\n";
  return exit_code(st);
}

int run_verify(const CLI::App& app, const Settings& s, const std::string& n_text, std::size_t points,
               std::uint64_t seed) {
  const auto n = parse_tuple(n_text);
  Context c;
  open_context(s, c);
  leb_identity_report* r = nullptr;
  const int st = leb_verify(c.ctx, n.data(), n.size(), points, s.nu_max, seed, &r);
  std::unique_ptr<leb_identity_report, decltype(&leb_identity_destroy)> guard(r, leb_identity_destroy);
  report_status(st);
  if (r) std::cout << envelope(app, s, leb_identity_json(r)).dump(2) << "\n";
  return exit_code(st);
}

int run_frak(const CLI::App& app, const Settings& s, int k, const std::string& n_text) {
  const auto n = parse_tuple(n_text);
  Context c;
  open_context(s, c);
  leb_frak_value* f = nullptr;
  const int st = leb_frak(c.ctx, k, n.data(), n.size(), &f);
  std::unique_ptr<leb_frak_value, decltype(&leb_frak_destroy)> guard(f, leb_frak_destroy);
  report_status(st);
  if (f) std::cout << envelope(app, s, leb_frak_json(f)).dump(2) << "\n";
  return exit_code(st);
}

int run_cf(const std::string& alpha_text, std::size_t terms) {
  leb_alpha* a = nullptr;
  int st = leb_alpha_parse(alpha_text.c_str(), &a);
  std::unique_ptr<leb_alpha, decltype(&leb_alpha_destroy)> ga(a, leb_alpha_destroy);
  if (st) return report_status(st), exit_code(st);
  leb_cf* cf = nullptr;
  st = leb_cf_expand(a, terms, &cf);
  std::unique_ptr<leb_cf, decltype(&leb_cf_destroy)> gc(cf, leb_cf_destroy);
  report_status(st);
  if (cf) std::cout << json::parse(leb_cf_json(cf)).dump(2) << "\n";
  return exit_code(st);
}

int run_sweep(const CLI::App& app, const Settings& s, const std::vector<std::string>& axes, bool no_S, bool no_frak,
              bool timing, const std::string& out) {
  std::vector<const char*> ptrs;
  for (const auto& a : axes) {
    if (a.empty()) break;
    ptrs.push_back(a.c_str());
  }
  if (ptrs.empty()) throw UsageError("sweep needs --n1");
  for (std::size_t j = ptrs.size(); j < axes.size(); ++j) {
    if (!axes[j].empty()) throw UsageError("sweep axes must be contiguous from --n1");
  }
  Context c;
  open_context(s, c);
  char* csv = nullptr;
  const int st = leb_sweep_csv(c.ctx, ptrs.data(), ptrs.size(), !no_S, !no_frak, timing,
                               join_lines(config_lines(app)).c_str(), &csv);
  std::unique_ptr<char, decltype(&leb_string_free)> guard(csv, leb_string_free);
  report_status(st);
  if (csv) write_text(out, csv);
  return exit_code(st);
}

std::vector<std::size_t> irrational_grid(const std::vector<std::string>& n_list, std::size_t nmax, int per_octave) {
  std::vector<std::size_t> grid;
  if (!n_list.empty()) {
    for (const auto& item : n_list) {
      std::size_t v = 0;
      const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
        throw UsageError("malformed n '" + item + "'");
      }
      grid.push_back(v);
    }
    return grid;
  }
  if (nmax < 16) throw UsageError("--nmax must be at least 16");
  if (per_octave < 1) throw UsageError("--per-octave must be positive");
  for (int i = 0;; ++i) {
    const double v = 16.0 * std::pow(2.0, static_cast<double>(i) / per_octave);
    const auto n = static_cast<std::size_t>(std::llround(v));
    if (n > nmax) break;
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }
  return grid;
}

int run_irrational(const CLI::App& app, const Settings& s, const std::string& alpha_text,
                   const std::vector<std::string>& n_list, std::size_t nmax, int per_octave, const std::string& out,
                   const std::string& summary_path) {
  const auto grid = irrational_grid(n_list, nmax, per_octave);
  leb_alpha* a = nullptr;
  int st = leb_alpha_parse(alpha_text.c_str(), &a);
  std::unique_ptr<leb_alpha, decltype(&leb_alpha_destroy)> ga(a, leb_alpha_destroy);
  if (st) return report_status(st), exit_code(st);
  Context c;
  open_context(s, c);
  char* csv = nullptr;
  char* summary = nullptr;
  st = leb_irrational_csv(c.ctx, a, grid.data(), grid.size(), join_lines(config_lines(app)).c_str(), &csv, &summary);
  std::unique_ptr<char, decltype(&leb_string_free)> g1(csv, leb_string_free), g2(summary, leb_string_free);
  report_status(st);
  if (csv) write_text(out, csv);
  if (summary) {
    if (summary_path.empty()) {
      std::fputs(summary, stderr);
    } else {
      write_text(summary_path, summary);
    }
  }
  return exit_code(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lebesgue constants of anisotropic simplex Dirichlet kernels"};
  app.set_version_flag("--version", std::string(leb_version()));
  app.set_config("--config", "", "flat key=value config file; flags override file values");
  app.allow_config_extras(false);
  app.require_subcommand(1);
  Settings s;

  auto* norm = app.add_subcommand("norm", "L1 norm of a kernel, JSON on stdout");
  std::string kernel = "D", n_text;
  norm->add_option("--kernel", kernel, "D, F, S, Fcomposite or R")->capture_default_str();
  norm->add_option("--n", n_text, "dilation tuple, e.g. 2,3")->required();
  add_engine_options(norm, s);

  auto* verify = app.add_subcommand("verify", "check D = S - e^{i n_d x_d} F(x' - x_d m) + R at random points");
  std::size_t points = 100;
  std::uint64_t seed = 1;
  verify->add_option("--n", n_text, "dilation tuple, d >= 2")->required();
  verify->add_option("--points", points, "number of random torus points")->capture_default_str();
  verify->add_option("--seed", seed, "random seed")->capture_default_str();
  add_engine_options(verify, s);

  auto* sweep = app.add_subcommand("sweep", "norms and predictors over a parameter grid, CSV");
  std::vector<std::string> axes(8);
  for (std::size_t j = 0; j < axes.size(); ++j) {
    sweep->add_option("--n" + std::to_string(j + 1), axes[j], "axis " + std::to_string(j + 1) + " generator or expression");
  }
  bool no_S = false, no_frak = false, timing = false;
  std::string out, summary_path;
  sweep->add_flag("--no-S", no_S, "skip the S norm");
  sweep->add_flag("--no-frak", no_frak, "skip the frak-F terms");
  sweep->add_flag("--timing", timing, "fill the seconds column (breaks byte-identical reruns)");
  sweep->add_option("--out", out, "CSV path, '-' for stdout")->configurable(false);
  add_engine_options(sweep, s);

  auto* irrational = app.add_subcommand("irrational", "ratios I_n(alpha) / ln^2 n, CSV plus summary JSON");
  std::string alpha_text;
  std::vector<std::string> n_list;
  std::size_t nmax = 4096;
  int per_octave = 1;
  irrational->add_option("--alpha", alpha_text, "rational:p/q | golden | sqrt:D | liouville:b,m | dec:0.707...")
      ->required();
  irrational->add_option("--n", n_list, "explicit n values (comma separated)")->delimiter(',');
  irrational->add_option("--nmax", nmax, "largest n of the geometric grid from 16")->capture_default_str();
  irrational->add_option("--per-octave", per_octave, "grid points per octave")->capture_default_str();
  irrational->add_option("--out", out, "CSV path, '-' for stdout")->configurable(false);
  irrational->add_option("--summary", summary_path, "summary JSON path (default stderr)")->configurable(false);
  add_engine_options(irrational, s);

  auto* cf = app.add_subcommand("cf", "continued fraction expansion, JSON");
  std::size_t terms = 20;
  cf->add_option("--alpha", alpha_text, "alpha spec")->required();
  cf->add_option("--terms", terms, "partial quotients after a_0")->capture_default_str();

  auto* frak = app.add_subcommand("frak", "the frak-F functional with its breakdown, JSON");
  int k = 2;
  frak->add_option("--k", k, "order, 2 <= k <= d")->capture_default_str();
  frak->add_option("--n", n_text, "ascending dilation tuple")->required();
  add_engine_options(frak, s);

  auto flat = std::make_shared<FlatConfig>();
  for (int i = 1; i < argc && flat->target.empty(); ++i) {
    for (const auto* sub : app.get_subcommands({})) {
      if (sub->get_name() == argv[i]) flat->target = argv[i];
    }
  }
  app.config_formatter(flat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*norm) return run_norm(*norm, s, kernel, n_text);
    if (*verify) return run_verify(*verify, s, n_text, points, seed);
    if (*sweep) return run_sweep(*sweep, s, axes, no_S, no_frak, timing, out);
    if (*irrational) return run_irrational(*irrational, s, alpha_text, n_list, nmax, per_octave, out, summary_path);
    if (*cf) return run_cf(alpha_text, terms);
    if (*frak) return run_frak(*frak, s, k, n_text);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "lebesgue: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lebesgue: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
