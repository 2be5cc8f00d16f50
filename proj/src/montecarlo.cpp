#include "plab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "plab/errors.hpp"
#include "plab/parallel.hpp"
#include "plab/stats.hpp"

namespace plab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median_abs(const Eigen::ArrayXd& x) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::isfinite(x[i])) v.push_back(std::abs(x[i]));
  }
  if (v.empty()) throw NumericError("median of an empty sample");
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

void throw_if_failure_budget_exceeded(long n_failures, long n_paths) {
  if (n_failures * 1000 > n_paths) {
    throw NumericError("more than 0.1% of sample paths failed numerically");
  }
}

}  // namespace

void parallel_for(long n, int n_threads,
                  const std::function<void(long, long)>& body) {
  if (n <= 0) return;
  long workers = n_threads > 0
                     ? n_threads
                     : static_cast<long>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, n);
  if (workers == 1) {
    body(0, n);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const long chunk = n / workers;
  const long extra = n % workers;
  long begin = 0;
  for (long w = 0; w < workers; ++w) {
    const long end = begin + chunk + (w < extra ? 1 : 0);
    pool.emplace_back([&body, &errors, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Eigen::ArrayXd log_spaced_grid(double t_min, double t_max, int n) {
  if (!(t_min > 0.0) || !std::isfinite(t_max) || !(t_max > t_min)) {
    throw std::invalid_argument("log_spaced_grid requires 0 < t_min < t_max");
  }
  if (n < 2) throw std::invalid_argument("log_spaced_grid requires n >= 2");
  Eigen::ArrayXd grid(n);
  const double l0 = std::log(t_min);
  const double l1 = std::log(t_max);
  for (int i = 0; i < n; ++i) {
    grid[i] = std::exp(l0 + (l1 - l0) * i / (n - 1));
  }
  grid[0] = t_min;
  grid[n - 1] = t_max;
  return grid;
}

void MonteCarloConfig::validate() const {
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw std::invalid_argument("level must be positive and finite");
  }
  if (n_paths < 100) throw std::invalid_argument("n_paths must be at least 100");
  if (n_steps < 16) throw std::invalid_argument("n_steps must be at least 16");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be positive and finite");
  }
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || t_grid[i] > horizon) {
      throw std::invalid_argument("t_grid entries must lie in (0, horizon]");
    }
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
      throw std::invalid_argument("t_grid must be strictly increasing");
    }
  }
}

Eigen::ArrayXd MonteCarloConfig::effective_grid() const {
  if (t_grid.size() > 0) return t_grid;
  return log_spaced_grid(10.0 * dt(), horizon, 40);
}

namespace {

double passage_on_grid(const MonteCarloConfig& cfg, const PathGrid& grid,
                       Eigen::Index* index_upper = nullptr) {
  PassageTime passage;
  if (cfg.functional) {
    FunctionalSeries series = homogeneous_functional(grid, *cfg.functional);
    passage = first_passage(series.times, series.values, cfg.level);
  } else {
    passage = first_passage(grid.times, grid.values, cfg.level);
  }
  if (index_upper != nullptr) *index_upper = passage.index_upper;
  return passage.crossed ? passage.t_upper : kInf;
}

}  // namespace

PassageBatch passage_batch(const MonteCarloConfig& cfg, int n_threads,
                           bool with_coarse) {
  cfg.validate();
  PassageBatch out;
  out.t_upper = Eigen::ArrayXd::Constant(cfg.n_paths, kNaN);
  out.value_at_cross = Eigen::ArrayXd::Constant(cfg.n_paths, kNaN);
  const Eigen::Index coarse_steps = cfg.n_steps / 2;
  if (with_coarse) {
    out.t_upper_coarse = Eigen::ArrayXd::Constant(cfg.n_paths, kNaN);
  }

  parallel_for(cfg.n_paths, n_threads, [&](long begin, long end) {
    for (long p = begin; p < end; ++p) {
      const std::uint64_t stream =
          make_stream(StreamDomain::paths, static_cast<std::uint64_t>(p));
      PathGrid grid = simulate_path(cfg.params, cfg.horizon, cfg.n_steps,
                                    cfg.seed, stream);
      if (!grid.values.allFinite()) continue;
      Eigen::Index index_upper = -1;
      out.t_upper[p] = passage_on_grid(cfg, grid, &index_upper);
      if (index_upper >= 0) out.value_at_cross[p] = grid.values[index_upper];
      if (with_coarse) {
        // Every second grid point of the same path; summed adjacent
        // increments are exact increments of the halved grid, so this is the
        // common-random-numbers coarsening rather than a fresh simulation.
        PathGrid half;
        half.times.resize(coarse_steps + 1);
        half.values.resize(coarse_steps + 1);
        for (Eigen::Index k = 0; k <= coarse_steps; ++k) {
          half.times[k] = grid.times[2 * k];
          half.values[k] = grid.values[2 * k];
        }
        out.t_upper_coarse[p] = passage_on_grid(cfg, half);
      }
    }
  });

  for (long p = 0; p < cfg.n_paths; ++p) {
    if (std::isnan(out.t_upper[p])) ++out.n_failures;
  }
  throw_if_failure_budget_exceeded(out.n_failures, cfg.n_paths);
  return out;
}

TailEstimate survival_from_samples(const Eigen::ArrayXd& samples,
                                   const Eigen::ArrayXd& t_grid, double dt) {
  std::vector<double> kept;
  kept.reserve(static_cast<std::size_t>(samples.size()));
  long failures = 0;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    if (std::isnan(samples[i])) {
      ++failures;
    } else {
      kept.push_back(samples[i]);
    }
  }
  if (kept.empty()) throw NumericError("survival curve has no usable samples");
  std::sort(kept.begin(), kept.end());

  TailEstimate out;
  out.t_grid = t_grid;
  out.dt = dt;
  out.n_effective = static_cast<long>(kept.size());
  out.n_failures = failures;
  out.survivors.resize(t_grid.size());
  out.survival.resize(t_grid.size());
  out.se.resize(t_grid.size());
  const double n = static_cast<double>(out.n_effective);
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    const auto it = std::upper_bound(kept.begin(), kept.end(), t_grid[i]);
    const long surv = static_cast<long>(kept.end() - it);
    out.survivors[i] = surv;
    const double p = static_cast<double>(surv) / n;
    out.survival[i] = p;
    out.se[i] = std::sqrt(p * (1.0 - p) / n);
  }
  return out;
}

TailEstimate estimate_survival(const MonteCarloConfig& cfg, int n_threads) {
  PassageBatch batch = passage_batch(cfg, n_threads);
  TailEstimate curve =
      survival_from_samples(batch.t_upper, cfg.effective_grid(), cfg.dt());
  return curve;
}

ExponentFit fit_exponent(const TailEstimate& curve) {
  const Eigen::Index m = curve.t_grid.size();
  // Admissible points: past the grid transient, strictly below full survival
  // (log p = 0 carries no weighting information) and with enough survivors
  // for the binomial error model.  These cuts trim a prefix and a suffix, so
  // the admissible set is one contiguous run.
  Eigen::Index lo = -1, hi = -1;
  for (Eigen::Index i = 0; i < m; ++i) {
    const bool ok = curve.t_grid[i] >= 10.0 * curve.dt &&
                    curve.survivors[i] >= 30 &&
                    curve.survivors[i] < curve.n_effective;
    if (!ok) continue;
    if (lo < 0) lo = i;
    hi = i;
  }
  if (lo < 0 || hi - lo + 1 < 3) {
    throw NumericError(
        "not enough usable points in the survival tail to fit an exponent");
  }

  const Eigen::Index count = hi - lo + 1;
  Eigen::ArrayXd x(count), y(count), var(count);
  const double n = static_cast<double>(curve.n_effective);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double p = curve.survival[lo + i];
    x[i] = std::log(curve.t_grid[lo + i]);
    y[i] = std::log(p);
    var[i] = (1.0 - p) / (n * p);
  }

  auto fit_window = [&](Eigen::Index a, Eigen::Index b, LineFit& fit) {
    const Eigen::Index w = b - a + 1;
    fit = weighted_line_fit(x.segment(a, w), y.segment(a, w),
                            var.segment(a, w));
  };
  // A window is kept when every two-point slope inside it is statistically
  // compatible with the window's global slope; the widest such window wins,
  // ties going to the one deeper in the tail.
  auto window_stable = [&](Eigen::Index a, Eigen::Index b, const LineFit& fit) {
    for (Eigen::Index k = a; k < b; ++k) {
      const double dx = x[k + 1] - x[k];
      const double slope_k = (y[k + 1] - y[k]) / dx;
      const double var_k = (var[k + 1] + var[k]) / (dx * dx);
      const double tol =
          2.0 * std::sqrt(var_k + fit.slope_se * fit.slope_se);
      if (std::abs(slope_k - fit.slope) > tol) return false;
    }
    return true;
  };

  ExponentFit out;
  for (Eigen::Index width = count; width >= 3; --width) {
    for (Eigen::Index b = count - 1; b >= width - 1; --b) {
      const Eigen::Index a = b - width + 1;
      LineFit fit;
      fit_window(a, b, fit);
      if (!window_stable(a, b, fit)) continue;
      out.theta_hat = -fit.slope;
      out.theta_stderr = fit.slope_se;
      out.window_lo = lo + a;
      out.window_hi = lo + b;
      out.n_points = static_cast<int>(width);
      return out;
    }
  }
  // No window coheres; report the full admissible range so callers can still
  // judge it against theory and the resolution check.
  LineFit fit;
  fit_window(0, count - 1, fit);
  out.theta_hat = -fit.slope;
  out.theta_stderr = fit.slope_se;
  out.window_lo = lo;
  out.window_hi = hi;
  out.n_points = static_cast<int>(count);
  return out;
}

namespace {

// Weighted fit over a fixed index window of the curve, clamped to the
// admissible points of this curve.  Falls back to the curve's own window
// search when the clamp leaves fewer than three points.
ExponentFit fit_exponent_over(const TailEstimate& curve, Eigen::Index lo,
                              Eigen::Index hi) {
  auto admissible = [&](Eigen::Index i) {
    return curve.t_grid[i] >= 10.0 * curve.dt && curve.survivors[i] >= 30 &&
           curve.survivors[i] < curve.n_effective;
  };
  while (lo <= hi && !admissible(lo)) ++lo;
  while (hi >= lo && !admissible(hi)) --hi;
  if (hi - lo + 1 < 3) return fit_exponent(curve);

  const Eigen::Index count = hi - lo + 1;
  Eigen::ArrayXd x(count), y(count), var(count);
  const double n = static_cast<double>(curve.n_effective);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double p = curve.survival[lo + i];
    x[i] = std::log(curve.t_grid[lo + i]);
    y[i] = std::log(p);
    var[i] = (1.0 - p) / (n * p);
  }
  const LineFit fit = weighted_line_fit(x, y, var);
  ExponentFit out;
  out.theta_hat = -fit.slope;
  out.theta_stderr = fit.slope_se;
  out.window_lo = lo;
  out.window_hi = hi;
  out.n_points = static_cast<int>(count);
  return out;
}

}  // namespace

std::optional<double> theoretical_theta(const StableParams& p,
                                        bool functional_kind) {
  if (!functional_kind) return positivity_parameter(p);
  if (p.gaussian() || p.chi == 1.0) {
    return (p.alpha - 1.0) / (2.0 * p.alpha);
  }
  return std::nullopt;
}

ThetaResult estimate_theta(const MonteCarloConfig& cfg, int n_threads) {
  ThetaResult out;
  PassageBatch batch = passage_batch(cfg, n_threads, /*with_coarse=*/true);
  out.curve = survival_from_samples(batch.t_upper, cfg.effective_grid(),
                                    cfg.dt());
  out.fit = fit_exponent(out.curve);

  // Same paths read on the even-index subgrid and fitted over the same
  // window; a drift of the fitted slope beyond the joint noise level flags
  // discretization bias.
  TailEstimate coarse_curve = survival_from_samples(
      batch.t_upper_coarse, cfg.effective_grid(), 2.0 * cfg.dt());
  out.coarse_fit =
      fit_exponent_over(coarse_curve, out.fit.window_lo, out.fit.window_hi);
  out.resolution_passed =
      std::abs(out.fit.theta_hat - out.coarse_fit.theta_hat) <=
      out.fit.theta_stderr + out.coarse_fit.theta_stderr;

  out.theory = theoretical_theta(cfg.params, cfg.functional.has_value());
  if (out.theory) {
    out.agrees = std::abs(out.fit.theta_hat - *out.theory) <= 0.05;
  }
  return out;
}

XiBatch sample_xi_batch(const XiBatchConfig& cfg, int n_threads) {
  if (cfg.n_paths < 100) {
    throw std::invalid_argument("n_paths must be at least 100");
  }
  if (cfg.n_steps < 16) throw std::invalid_argument("n_steps must be at least 16");
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) {
    throw std::invalid_argument("horizon must be positive and finite");
  }
  if (!(cfg.level > 0.0)) throw std::invalid_argument("level must be positive");
  if (!(cfg.passage_level > 0.0)) {
    throw std::invalid_argument("passage_level must be positive");
  }

  const double eps =
      cfg.pv_epsilon >= 0.0
          ? cfg.pv_epsilon
          : (cfg.beta <= -1.0
                 ? default_pv_epsilon(cfg.params, cfg.horizon, cfg.n_steps)
                 : 0.0);
  const FunctionalParams functional(cfg.params, cfg.beta, eps);
  const double h = cfg.bandwidth > 0.0
                       ? cfg.bandwidth
                       : default_bandwidth(cfg.params, cfg.horizon, cfg.n_steps);

  XiBatch out;
  const long n = cfg.n_paths;
  out.tau = Eigen::ArrayXd::Constant(n, kNaN);
  out.xi = Eigen::ArrayXd::Constant(n, kNaN);
  out.xi_plus = Eigen::ArrayXd::Constant(n, kNaN);
  out.xi_minus = Eigen::ArrayXd::Constant(n, kNaN);
  out.t_cross = Eigen::ArrayXd::Constant(n, kNaN);
  out.theta_tau = Eigen::ArrayXd::Constant(n, kNaN);
  out.tau_before = Eigen::ArrayXd::Constant(n, kNaN);
  out.exc_total = Eigen::ArrayXd::Constant(n, kNaN);
  out.exc_mixed = Eigen::ArrayXd::Constant(n, kNaN);
  out.dt = cfg.horizon / static_cast<double>(cfg.n_steps);
  out.horizon = cfg.horizon;
  out.bandwidth = h;
  out.pv_epsilon = eps;
  out.beta = cfg.beta;
  out.level = cfg.level;
  out.passage_level = cfg.passage_level;

  // 0 = ok, 1 = local time never reached the level, 2 = numeric failure.
  std::vector<char> status(static_cast<std::size_t>(n), 2);

  parallel_for(n, n_threads, [&](long begin, long end) {
    for (long p = begin; p < end; ++p) {
      const std::uint64_t stream =
          make_stream(StreamDomain::paths, static_cast<std::uint64_t>(p));
      PathGrid grid = simulate_path(cfg.params, cfg.horizon, cfg.n_steps,
                                    cfg.seed, stream);
      if (!grid.values.allFinite()) continue;
      FunctionalSeries series = homogeneous_functional(grid, functional);
      if (!series.values.allFinite()) continue;
      LocalTimeCurve local = local_time_zero(grid, h);
      XiValue value = xi_process(series, local, cfg.level);
      status[static_cast<std::size_t>(p)] = value.censored ? 1 : 0;
      if (value.censored) {
        // The level was never reached inside the horizon: tau is censored
        // from the right, the xi readout does not exist.
        out.tau[p] = kInf;
      } else {
        out.tau[p] = value.tau;
        out.xi[p] = value.xi;
        out.xi_plus[p] = value.xi_plus;
        out.xi_minus[p] = value.xi_minus;
      }

      PassageTime passage =
          first_passage(series.times, series.values, cfg.passage_level);
      out.t_cross[p] = passage.crossed ? passage.t_upper : kInf;

      // Scan the zero visits (grid points inside the local-time bandwidth).
      // theta_tau is the first visit at which the functional has already
      // exceeded the passage level, tau_before the visit just before it.
      // Between visits we track signs to count sign-mixed stretches, which
      // measure how often the skeleton crosses zero without being seen.
      double theta = kInf;
      double before = kNaN;
      double last_visit = kNaN;
      bool theta_found = false;
      long total = 0, mixed = 0;
      bool has_pos = false, has_neg = false;
      for (Eigen::Index j = 0; j < grid.values.size(); ++j) {
        if (std::abs(grid.values[j]) < h) {
          if (has_pos || has_neg) {
            ++total;
            if (has_pos && has_neg) ++mixed;
          }
          has_pos = has_neg = false;
          if (!theta_found && series.values[j] > cfg.passage_level) {
            theta = grid.times[j];
            before = last_visit;
            theta_found = true;
          }
          last_visit = grid.times[j];
        } else if (grid.values[j] > 0.0) {
          has_pos = true;
        } else {
          has_neg = true;
        }
      }
      out.theta_tau[p] = theta;
      out.tau_before[p] = before;
      out.exc_total[p] = static_cast<double>(total);
      out.exc_mixed[p] = static_cast<double>(mixed);
    }
  });

  for (long p = 0; p < n; ++p) {
    const char s = status[static_cast<std::size_t>(p)];
    if (s == 1) ++out.n_censored;
    if (s == 2) ++out.n_failures;
  }
  throw_if_failure_budget_exceeded(out.n_failures, n);
  return out;
}

Eigen::ArrayXd increment_batch(const StableParams& p, long n,
                               std::uint64_t seed, int n_threads) {
  if (n < 1) throw std::invalid_argument("increment_batch requires n >= 1");
  Eigen::ArrayXd out(n);
  parallel_for(n, n_threads, [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      StableSampler sampler(
          p, seed,
          make_stream(StreamDomain::increments, static_cast<std::uint64_t>(i)));
      out[i] = sampler.next_increment(1.0);
    }
  });
  return out;
}

Eigen::ArrayXd sup_batch(const StableParams& p, double horizon,
                         Eigen::Index n_steps, long n, std::uint64_t seed,
                         int n_threads) {
  if (n < 1) throw std::invalid_argument("sup_batch requires n >= 1");
  Eigen::ArrayXd out = Eigen::ArrayXd::Constant(n, kNaN);
  parallel_for(n, n_threads, [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      PathGrid grid = simulate_path(
          p, horizon, n_steps, seed,
          make_stream(StreamDomain::paths, static_cast<std::uint64_t>(i)));
      if (grid.values.allFinite()) out[i] = grid.values.maxCoeff();
    }
  });
  return out;
}

Eigen::ArrayXd terminal_functional_batch(const StableParams& p,
                                         const FunctionalParams& f,
                                         double horizon, Eigen::Index n_steps,
                                         long n, std::uint64_t seed,
                                         int n_threads) {
  if (n < 1) {
    throw std::invalid_argument("terminal_functional_batch requires n >= 1");
  }
  Eigen::ArrayXd out = Eigen::ArrayXd::Constant(n, kNaN);
  parallel_for(n, n_threads, [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      PathGrid grid = simulate_path(
          p, horizon, n_steps, seed,
          make_stream(StreamDomain::paths, static_cast<std::uint64_t>(i)));
      if (!grid.values.allFinite()) continue;
      FunctionalSeries series = homogeneous_functional(grid, f);
      out[i] = series.values[series.values.size() - 1];
    }
  });
  return out;
}

namespace {

constexpr int kJackknifeBlocks = 20;

// Per-block partial sums of exp(i lambda x), interleaved assignment so block
// membership is independent of any ordering in the sample.
struct BlockSums {
  Eigen::ArrayXXcd block;  // (n_lambdas, kJackknifeBlocks)
  Eigen::ArrayXcd total;   // (n_lambdas)
  Eigen::ArrayXd block_count;
  long n = 0;
};

BlockSums block_charfn_sums(const Eigen::ArrayXd& samples,
                            const Eigen::ArrayXd& lambdas) {
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(samples.size()));
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    if (std::isfinite(samples[i])) x.push_back(samples[i]);
  }
  BlockSums sums;
  sums.n = static_cast<long>(x.size());
  if (sums.n < 5 * kJackknifeBlocks) {
    throw NumericError(
        "too few samples for a characteristic function estimate");
  }
  const Eigen::Index m = lambdas.size();
  sums.block = Eigen::ArrayXXcd::Zero(m, kJackknifeBlocks);
  sums.total = Eigen::ArrayXcd::Zero(m);
  sums.block_count = Eigen::ArrayXd::Zero(kJackknifeBlocks);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int b = static_cast<int>(i % kJackknifeBlocks);
    sums.block_count[b] += 1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double arg = lambdas[j] * x[i];
      const std::complex<double> e(std::cos(arg), std::sin(arg));
      sums.block(j, b) += e;
      sums.total[j] += e;
    }
  }
  return sums;
}

double jackknife_se(const Eigen::ArrayXd& leave_one_out) {
  const double b = static_cast<double>(leave_one_out.size());
  const double mean = leave_one_out.mean();
  const double ss = (leave_one_out - mean).square().sum();
  return std::sqrt((b - 1.0) / b * ss);
}

}  // namespace

CharfnEstimate empirical_charfn(const Eigen::ArrayXd& samples,
                                const Eigen::ArrayXd& lambdas) {
  BlockSums sums = block_charfn_sums(samples, lambdas);
  const Eigen::Index m = lambdas.size();
  CharfnEstimate out;
  out.lambdas = lambdas;
  out.n = sums.n;
  out.phi = sums.total / static_cast<double>(sums.n);
  out.se_abs.resize(m);
  out.se_re.resize(m);
  out.se_im.resize(m);
  Eigen::ArrayXd loo_re(kJackknifeBlocks), loo_im(kJackknifeBlocks),
      loo_abs(kJackknifeBlocks);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (int b = 0; b < kJackknifeBlocks; ++b) {
      const std::complex<double> rest = sums.total[j] - sums.block(j, b);
      const double count = static_cast<double>(sums.n) - sums.block_count[b];
      const std::complex<double> phi_b = rest / count;
      loo_re[b] = phi_b.real();
      loo_im[b] = phi_b.imag();
      loo_abs[b] = std::abs(phi_b);
    }
    out.se_re[j] = jackknife_se(loo_re);
    out.se_im[j] = jackknife_se(loo_im);
    out.se_abs[j] = jackknife_se(loo_abs);
  }
  return out;
}

KappaXiFit estimate_kappa_xi(const Eigen::ArrayXd& xi_samples) {
  const double scale = median_abs(xi_samples);
  if (!(scale > 0.0)) {
    throw NumericError("sample median is zero, no scale for a frequency grid");
  }
  // Half-octave spacing: a full-octave grid anchored at the sample median
  // can leave fewer than five usable frequencies inside the acceptance band
  // when -log|phi| lands exactly on powers of two.
  Eigen::ArrayXd lambdas(21);
  for (int j = -10; j <= 10; ++j) {
    lambdas[j + 10] = std::exp2(0.5 * j) / scale;
  }
  BlockSums sums = block_charfn_sums(xi_samples, lambdas);
  const double n = static_cast<double>(sums.n);

  // Keep frequencies where -log|phi| is resolvable: neither noise-dominated
  // near phi ~ 1 nor saturated where |phi| sinks toward the noise floor.
  std::vector<Eigen::Index> window;
  Eigen::ArrayXd y(lambdas.size()), yvar(lambdas.size());
  Eigen::ArrayXd loo_abs(kJackknifeBlocks);
  for (Eigen::Index j = 0; j < lambdas.size(); ++j) {
    const std::complex<double> phi = sums.total[j] / n;
    const double mag = std::abs(phi);
    for (int b = 0; b < kJackknifeBlocks; ++b) {
      const std::complex<double> rest = sums.total[j] - sums.block(j, b);
      loo_abs[b] = std::abs(rest / (n - sums.block_count[b]));
    }
    const double se_mag = jackknife_se(loo_abs);
    const double neglog = -std::log(mag);
    y[j] = std::log(neglog);
    yvar[j] = (se_mag / mag) * (se_mag / mag) / (neglog * neglog);
    if (neglog >= 0.15 && neglog <= 2.5 && mag > 5.0 * se_mag) {
      window.push_back(j);
    }
  }
  if (window.size() < 5) {
    throw NumericError(
        "characteristic function window too narrow for a scale fit");
  }

  const Eigen::Index w = static_cast<Eigen::Index>(window.size());
  Eigen::ArrayXd fx(w), fy(w), fvar(w);
  for (Eigen::Index k = 0; k < w; ++k) {
    fx[k] = std::log(lambdas[window[static_cast<std::size_t>(k)]]);
    fy[k] = y[window[static_cast<std::size_t>(k)]];
    fvar[k] = yvar[window[static_cast<std::size_t>(k)]];
  }
  LineFit full = weighted_line_fit(fx, fy, fvar);

  // Jackknife the whole fit over the sample blocks with the frequency window
  // frozen, so replicate scatter reflects sampling noise alone.
  Eigen::ArrayXd kappa_reps(kJackknifeBlocks), delta_reps(kJackknifeBlocks);
  for (int b = 0; b < kJackknifeBlocks; ++b) {
    Eigen::ArrayXd ry(w);
    for (Eigen::Index k = 0; k < w; ++k) {
      const Eigen::Index j = window[static_cast<std::size_t>(k)];
      const std::complex<double> rest = sums.total[j] - sums.block(j, b);
      const double mag = std::abs(rest / (n - sums.block_count[b]));
      const double neglog = -std::log(std::max(mag, 1e-300));
      ry[k] = std::log(std::max(neglog, 1e-12));
    }
    LineFit rep = weighted_line_fit(fx, ry, fvar);
    kappa_reps[b] = std::exp(rep.intercept);
    delta_reps[b] = rep.slope;
  }

  KappaXiFit out;
  out.kappa_xi = std::exp(full.intercept);
  out.delta_hat = full.slope;
  out.kappa_se = jackknife_se(kappa_reps);
  out.delta_se = jackknife_se(delta_reps);
  out.n_lambdas = static_cast<int>(w);
  return out;
}

MomentProbe moment_probe(const Eigen::ArrayXd& samples, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("moment order k must be positive and finite");
  }
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(samples.size()));
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    if (std::isfinite(samples[i])) x.push_back(std::abs(samples[i]));
  }
  if (x.size() < 100) {
    throw NumericError("too few samples for a moment divergence probe");
  }
  std::sort(x.begin(), x.end());
  const double med = x[x.size() / 2];
  if (!(med > 0.0)) throw NumericError("sample median is zero");

  // Truncation rungs climb by half decades while more than 30 samples still
  // lie above; each rung must genuinely clip the tail.
  std::vector<double> rungs;
  for (int r = 0;; ++r) {
    const double cap = med * std::pow(10.0, 0.5 * r);
    const auto above = x.end() - std::upper_bound(x.begin(), x.end(), cap);
    if (above <= 30) break;
    rungs.push_back(cap);
  }
  if (rungs.size() < 4) {
    throw NumericError("not enough tail range for a moment divergence probe");
  }

  const double n = static_cast<double>(x.size());
  std::vector<double> truncated(rungs.size());
  for (std::size_t r = 0; r < rungs.size(); ++r) {
    double acc = 0.0;
    for (double v : x) acc += std::pow(std::min(v, rungs[r]), k);
    truncated[r] = acc / n;
  }

  // Increments of the truncated moment between consecutive rungs scale like
  // M^{k-q} for a tail index q, so their log-log slope separates k < q
  // (steeply negative) from k >= q (flat or rising).
  const std::size_t d = rungs.size() - 1;
  Eigen::ArrayXd lx(static_cast<Eigen::Index>(d)),
      ly(static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < d; ++r) {
    lx[static_cast<Eigen::Index>(r)] =
        0.5 * (std::log(rungs[r]) + std::log(rungs[r + 1]));
    ly[static_cast<Eigen::Index>(r)] = std::log(truncated[r + 1] - truncated[r]);
  }
  const double mx = lx.mean();
  const double my = ly.mean();
  const double sxx = (lx - mx).square().sum();
  const double sxy = ((lx - mx) * (ly - my)).sum();
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (Eigen::Index i = 0; i < lx.size(); ++i) {
    const double resid = ly[i] - my - slope * (lx[i] - mx);
    rss += resid * resid;
  }
  MomentProbe out;
  out.slope = slope;
  out.slope_se = d > 2 ? std::sqrt(rss / (static_cast<double>(d) - 2.0) / sxx)
                       : 0.0;
  out.diverges = slope > -0.05;
  out.n_rungs = static_cast<int>(rungs.size());
  return out;
}

}  // namespace plab
