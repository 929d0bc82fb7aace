#include "lebesgue/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "parallel.hpp"

namespace lebesgue {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kSliceChunk = 32;

struct SliceSums {
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  double parseval = 0.0;
};

double parseval_defect(double sq_sum, double total_nodes, double energy) {
  const double l2 = sq_sum / total_nodes;
  if (energy == 0.0) return l2 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::fabs(l2 - energy) / energy;
}

double grid_cell(const std::vector<std::size_t>& counts) {
  double cell = 1.0;
  for (auto c : counts) cell *= kTwoPi / static_cast<double>(c);
  return cell;
}

// Iterates `level(grid)` on doubled grids until the relative change is <= tol.
template <class Level>
NormResult refine(NormResult result, GridSpec grid, const NormOptions& options, Level&& level) {
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int step = 0; step <= options.max_doublings; ++step) {
    const double value = level(grid, result);
    result.history.push_back({grid.counts, value});
    result.grid = grid.counts;
    result.value = value;
    if (step > 0) {
      result.error_estimate = std::fabs(value - previous);
      if (result.error_estimate <= options.tol * std::fabs(value)) {
        result.converged = true;
        break;
      }
    }
    previous = value;
    if (step < options.max_doublings) grid = grid.doubled();
  }
  result.normalized = result.value / std::pow(kTwoPi, static_cast<double>(result.dim));
  return result;
}

void check_budget(const GridSpec& grid, std::uint64_t copies, std::uint64_t budget) {
  const double entries = static_cast<double>(grid.total()) * static_cast<double>(copies);
  if (entries > static_cast<double>(budget)) {
    throw ResourceLimit("quadrature grid " + grid.label() + " exceeds the memory budget", entries);
  }
}

std::string options_key(const NormOptions& o) {
  std::ostringstream s;
  s.precision(17);
  s << o.tol << '|' << o.rho << '|' << o.max_doublings << '|' << o.nu_max;
  return s.str();
}

}  // namespace

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::D: return "D";
    case KernelKind::F: return "F";
    case KernelKind::S: return "S";
    case KernelKind::Fcomposite: return "Fcomposite";
    case KernelKind::R: return "R";
  }
  return "unknown";
}

KernelKind parse_kernel(const std::string& name) {
  if (name == "D") return KernelKind::D;
  if (name == "F") return KernelKind::F;
  if (name == "S") return KernelKind::S;
  if (name == "Fcomposite") return KernelKind::Fcomposite;
  if (name == "R") return KernelKind::R;
  throw InvalidArgument("unknown kernel '" + name + "' (expected D, F, S, Fcomposite or R)");
}

const char* to_string(MuRange range) { return range == MuRange::theorem ? "theorem" : "proof"; }

NormResult::NormResult()
    : l2_normalized(std::numeric_limits<double>::quiet_NaN()),
      coefficient_energy(std::numeric_limits<double>::quiet_NaN()) {}

NonConvergence::NonConvergence(NormResult result)
    : Error(ErrorCode::non_convergence,
            "quadrature for " + result.kernel + " did not converge after " +
                std::to_string(result.history.size()) + " grids (last change " +
                std::to_string(result.error_estimate) + ")"),
      result_(std::move(result)) {}

double FrakFValue::recompute() const {
  double total = 0.0;
  for (const auto& t : terms) total += t.norm_full - t.norm_swapped + t.mu_sum;
  return kTwoPi * total;
}

PointSampler::PointSampler(std::uint64_t seed) : rng_(seed) {}

double PointSampler::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

std::vector<double> PointSampler::torus_point(std::size_t dim) {
  std::vector<double> x(dim);
  for (auto& v : x) v = -kPi + kTwoPi * uniform();
  return x;
}

NormEngine::NormEngine(NormOptions options) : options_(options) {
  if (!(options_.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (options_.rho < 1) throw InvalidArgument("oversampling factor must be at least 1");
  if (options_.max_doublings < 1) throw InvalidArgument("at least one refinement doubling is required");
  if (options_.nu_max < 1) throw InvalidArgument("nu_max must be at least 1");
  options_.workers = std::max(1u, options_.workers);
}

std::size_t NormEngine::cache_size() const {
  std::lock_guard lock(cache_mutex_);
  return cache_.size();
}

NormResult NormEngine::l1_norm(KernelKind kind, const DilationVector& n) {
  const std::string key = std::string(to_string(kind)) + "|" + n.key() + "|" + options_key(options_);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      if (!it->second.converged) throw NonConvergence(it->second);
      return it->second;
    }
  }
  NormResult result = compute_kernel_norm(kind, n);
  {
    std::lock_guard lock(cache_mutex_);
    cache_.emplace(key, result);
  }
  if (!result.converged) throw NonConvergence(result);
  return result;
}

NormResult NormEngine::compute_kernel_norm(KernelKind kind, const DilationVector& n) const {
  if (kind == KernelKind::F) {
    auto result = field_norm(fractional_coefficients(n, options_.memory_budget));
    result.kernel = "F";
    return result;
  }
  const std::size_t d = n.dim();
  if (kind != KernelKind::D && d < 2) throw InvalidArgument(std::string(to_string(kind)) + " needs d >= 2");

  SliceKernel slice_kind = SliceKernel::D;
  switch (kind) {
    case KernelKind::D: slice_kind = SliceKernel::D; break;
    case KernelKind::S: slice_kind = SliceKernel::S; break;
    case KernelKind::Fcomposite: slice_kind = SliceKernel::Fcomposite; break;
    case KernelKind::R: slice_kind = SliceKernel::R; break;
    case KernelKind::F: break;
  }
  const bool periodic = kind == KernelKind::D;

  const SliceBuilder builder(n, options_.memory_budget);
  std::vector<int> extents = builder.extents();
  extents.push_back(static_cast<int>(std::floor(n[d - 1])) + 1);
  const GridSpec base = GridSpec::covering(extents, options_.rho);

  NormResult result;
  result.kernel = to_string(kind);
  result.dim = d;
  if (periodic) result.coefficient_energy = builder.full_count();

  SliceOptions slice_options;
  slice_options.nu_max = options_.nu_max;

  auto level = [&](const GridSpec& grid, NormResult& res) {
    const std::vector<std::size_t> lower(grid.counts.begin(), grid.counts.end() - 1);
    GridSpec lower_spec;
    lower_spec.counts = lower;
    check_budget(lower_spec, options_.workers, options_.memory_budget);
    const std::size_t m_d = grid.counts.back();
    const std::size_t nodes = periodic ? m_d : m_d + 1;
    const double lower_total = static_cast<double>(lower_spec.total());

    struct State {
      GridSynthesizer synth;
      CoefficientField field;
    };
    auto partials = detail::parallel_chunks<SliceSums>(
        nodes, kSliceChunk, options_.workers,
        [&] { return State{GridSynthesizer(builder.extents(), lower), builder.make_field(slice_kind)}; },
        [&](State& st, std::size_t begin, std::size_t end) {
          SliceSums sums;
          for (std::size_t t = begin; t < end; ++t) {
            const double x_d = -kPi + kTwoPi * static_cast<double>(t) / static_cast<double>(m_d);
            builder.fill(slice_kind, x_d, slice_options, st.field);
            auto values = st.synth.synthesize(st.field.weights());
            double a = 0.0, q = 0.0;
            for (const auto& v : values) {
              a += std::abs(v);
              q += std::norm(v);
            }
            const double w = (!periodic && (t == 0 || t == m_d)) ? 0.5 : 1.0;
            sums.abs_sum += w * a;
            sums.sq_sum += w * q;
            sums.parseval = std::max(sums.parseval, parseval_defect(q, lower_total, st.field.energy()));
          }
          return sums;
        });
    SliceSums total;
    for (const auto& p : partials) {
      total.abs_sum += p.abs_sum;
      total.sq_sum += p.sq_sum;
      total.parseval = std::max(total.parseval, p.parseval);
    }
    res.parseval_rel_error = std::max(res.parseval_rel_error, total.parseval);
    if (periodic) res.l2_normalized = total.sq_sum / (lower_total * static_cast<double>(m_d));
    return grid_cell(grid.counts) * total.abs_sum;
  };
  return refine(std::move(result), base, options_, level);
}

NormResult NormEngine::field_norm(const CoefficientField& field) const {
  NormResult result;
  result.kernel = std::string("field:") + to_string(field.tag());
  result.dim = field.dim();
  result.coefficient_energy = field.energy();
  if (field.dim() == 0) {
    // zero-dimensional convention: the norm of a constant is its modulus
    result.value = result.normalized = std::abs(field[0]);
    result.history.push_back({{}, result.value});
    result.converged = true;
    result.l2_normalized = std::norm(field[0]);
    return result;
  }
  const GridSpec base = GridSpec::covering(field.extents(), options_.rho);
  auto level = [&](const GridSpec& grid, NormResult& res) {
    check_budget(grid, 1, options_.memory_budget);
    GridSynthesizer synth(field.extents(), grid.counts);
    auto values = synth.synthesize(field.weights());
    double a = 0.0, q = 0.0;
    for (const auto& v : values) {
      a += std::abs(v);
      q += std::norm(v);
    }
    const double total = static_cast<double>(grid.total());
    res.parseval_rel_error = std::max(res.parseval_rel_error, parseval_defect(q, total, res.coefficient_energy));
    res.l2_normalized = q / total;
    return grid_cell(grid.counts) * a;
  };
  return refine(std::move(result), base, options_, level);
}

IdentityPoint check_identity_at(const SimplexKernels& kernels, const TorusPoint& x, int nu_max) {
  IdentityPoint p;
  p.x.assign(x.coords().begin(), x.coords().end());
  p.lhs = kernels.dirichlet(x);
  const auto r = kernels.remainder(x, nu_max);
  p.rhs = kernels.s_kernel(x) - kernels.fcomposite(x) + r.value;
  p.residual = std::abs(p.lhs - p.rhs);
  p.tail_bound = r.tail_bound;
  return p;
}

IdentityReport NormEngine::verify_identity(const DilationVector& n, std::size_t num_points, int nu_max,
                                           std::uint64_t seed) const {
  if (n.dim() < 2) throw InvalidArgument("the decomposition identity needs d >= 2");
  if (nu_max < 1) throw InvalidArgument("nu_max must be at least 1");
  const SimplexKernels kernels(n, options_.memory_budget);
  PointSampler sampler(seed);
  std::vector<TorusPoint> xs;
  xs.reserve(num_points);
  for (std::size_t i = 0; i < num_points; ++i) xs.emplace_back(sampler.torus_point(n.dim()));

  IdentityReport report;
  report.lattice_points = kernels.lattice_points();
  report.nu_max = nu_max;
  auto chunks = detail::parallel_chunks<std::vector<IdentityPoint>>(
      xs.size(), 8, options_.workers, [] { return 0; },
      [&](int&, std::size_t begin, std::size_t end) {
        std::vector<IdentityPoint> out;
        for (std::size_t i = begin; i < end; ++i) out.push_back(check_identity_at(kernels, xs[i], nu_max));
        return out;
      });
  for (auto& c : chunks) {
    for (auto& p : c) report.points.push_back(std::move(p));
  }

  const double slack = 1e-9 * report.lattice_points;
  std::vector<double> residuals;
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& p = report.points[i];
    residuals.push_back(p.residual);
    report.max_residual = std::max(report.max_residual, p.residual);
    if (!(p.residual <= p.tail_bound + slack)) report.failures.push_back(i);
  }
  std::sort(report.failures.begin(), report.failures.end(), [&](std::size_t a, std::size_t b) {
    return report.points[a].residual - report.points[a].tail_bound >
           report.points[b].residual - report.points[b].tail_bound;
  });
  report.passed = report.failures.empty();
  if (!residuals.empty()) {
    std::sort(residuals.begin(), residuals.end());
    const std::size_t m = residuals.size();
    report.median_residual = m % 2 ? residuals[m / 2] : 0.5 * (residuals[m / 2 - 1] + residuals[m / 2]);
  }
  return report;
}

FrakFValue NormEngine::frak_f(int k, const DilationVector& n, const FrakOptions& frak) {
  if (k < 2 || static_cast<std::size_t>(k) > n.dim()) throw InvalidArgument("frak-F needs 2 <= k <= d");
  if (!n.head(static_cast<std::size_t>(k)).sorted_ascending()) {
    throw InvalidArgument("frak-F needs ascending entries n_1 <= ... <= n_k");
  }
  if (frak.t_nodes < 2) throw InvalidArgument("t-quadrature needs at least 2 nodes");

  FrakFValue out;
  out.k = k;
  out.t_nodes = frak.t_nodes;
  out.mu_range = frak.mu_range;
  out.zero_dim_convention = (k == 2);
  const double n1 = n[0];

  // Refined trapezoid nodes; the coarse rule uses every other node.
  const int fine_nodes = 2 * frak.t_nodes - 1;
  const double fine_h = kTwoPi / (fine_nodes - 1);
  double coarse_total = 0.0;

  for (int l = 0; l <= k - 2; ++l) {
    FrakTerm term;
    term.l = l;
    term.full.assign(static_cast<std::size_t>(l), n1);
    for (int j = 0; j < k - l; ++j) term.full.push_back(n[j]);
    term.swapped.assign(static_cast<std::size_t>(l), n1);
    for (int j = 0; j < k - l - 1; ++j) term.swapped.push_back(n[j]);
    term.swapped.push_back(n1);
    std::vector<double> tilde(static_cast<std::size_t>(l), n1);
    for (int j = 1; j < k - l - 1; ++j) tilde.push_back(n[j]);
    term.reduced = tilde;
    term.reduced.push_back(n1);

    term.norm_full = l1_norm(KernelKind::F, DilationVector(term.full)).value;
    term.norm_swapped = l1_norm(KernelKind::F, DilationVector(term.swapped)).value;
    const auto reduced_field = fractional_coefficients(DilationVector(term.reduced), options_.memory_budget);
    term.norm_reduced = field_norm(reduced_field).value;

    const double top = n[k - l - 1];
    const double ratio = frak.mu_range == MuRange::theorem ? top / n1 : top / (2.0 * n1);
    term.mu_max = static_cast<int>(std::floor(snap_integral(ratio, ratio)));

    std::vector<double> xi(tilde.size());
    for (std::size_t j = 0; j < tilde.size(); ++j) xi[j] = 1.0 / tilde[j];

    term.mu_sum = 0.0;
    double coarse_sum = 0.0;
    for (int mu = -term.mu_max; mu <= term.mu_max; ++mu) {
      if (mu == 0) continue;
      std::vector<double> integrand(static_cast<std::size_t>(fine_nodes));
      for (int i = 0; i < fine_nodes; ++i) {
        const double t = -kPi + fine_h * i;
        const double h = n1 * (t + kTwoPi * mu);
        const auto shifted = apply_delta(reduced_field, h, xi);
        integrand[static_cast<std::size_t>(i)] = field_norm(shifted).value - 2.0 * term.norm_reduced;
      }
      double fine = 0.0, coarse = 0.0;
      for (int i = 0; i < fine_nodes; ++i) {
        const double w = (i == 0 || i == fine_nodes - 1) ? 0.5 : 1.0;
        fine += w * integrand[static_cast<std::size_t>(i)];
        if (i % 2 == 0) coarse += w * integrand[static_cast<std::size_t>(i)];
      }
      fine *= fine_h;
      coarse *= 2.0 * fine_h;
      term.mu_terms.push_back({mu, fine, coarse});
      term.mu_sum += fine / std::abs(mu);
      coarse_sum += coarse / std::abs(mu);
    }
    coarse_total += term.norm_full - term.norm_swapped + coarse_sum;
    out.terms.push_back(std::move(term));
  }
  out.value = out.recompute();
  out.t_error = std::fabs(out.value - kTwoPi * coarse_total);
  return out;
}

NormResult NormEngine::double_integral_ld2(double n, double alpha, double beta) const {
  if (!(n > 3.0) || !std::isfinite(n)) throw InvalidArgument("the double integral needs a finite n > 3");
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw InvalidArgument("alpha and beta must be finite");
  const long long degree = floor_of(snap_integral(n, n));
  const int extent = static_cast<int>(degree + 1);

  NormResult result;
  result.kernel = "ld2";
  result.dim = 2;
  result.coefficient_energy = static_cast<double>(extent);

  GridSpec base = GridSpec::covering(std::vector<int>{extent}, options_.rho);
  if (base.counts[0] % 2) base.counts[0] = smooth_size(base.counts[0] + 1);
  while (base.counts[0] % 2) base.counts[0] = smooth_size(base.counts[0] + 1);

  auto level = [&](const GridSpec& grid, NormResult& res) {
    const std::size_t m = grid.counts[0];
    check_budget(grid, 2, options_.memory_budget);
    CoefficientField ones(std::vector<int>{extent}, FieldTag::indicator);
    for (auto& c : ones.weights()) c = 1.0;
    GridSynthesizer synth(ones.extents(), grid.counts);
    const auto synthesized = synth.synthesize(ones.weights());
    const std::vector<cplx> dvals(synthesized.begin(), synthesized.end());
    double q = 0.0;
    for (const auto& v : dvals) q += std::norm(v);
    res.parseval_rel_error = std::max(res.parseval_rel_error, parseval_defect(q, static_cast<double>(m), extent));
    res.l2_normalized = q / static_cast<double>(m);

    // x_i - y_t = 2 pi (i - t) / m is the node with index i - t + m/2.
    const double step = kTwoPi / static_cast<double>(m);
    auto partials = detail::parallel_chunks<double>(
        m + 1, kSliceChunk, options_.workers, [] { return 0; },
        [&](int&, std::size_t begin, std::size_t end) {
          double acc = 0.0;
          for (std::size_t t = begin; t < end; ++t) {
            const double y = -kPi + step * static_cast<double>(t);
            const cplx phase = std::polar(1.0, alpha * y + beta);
            const std::size_t offset = (m / 2 + m - (t % m)) % m;
            double row = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
              const std::size_t j = i + offset < m ? i + offset : i + offset - m;
              row += std::abs(phase * dvals[j] - dvals[i]);
            }
            acc += (t == 0 || t == m) ? 0.5 * row : row;
          }
          return acc;
        });
    double total = 0.0;
    for (double p : partials) total += p;
    return step * step * total;
  };
  return refine(std::move(result), base, options_, level);
}

}  // namespace lebesgue
