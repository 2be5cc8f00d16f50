#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>

#include "plab/functionals.hpp"
#include "plab/stable.hpp"

namespace plab {

Eigen::ArrayXd log_spaced_grid(double t_min, double t_max, int n);

// One survival study: paths of Z (or of a homogeneous functional of Z when
// `functional` is set) are run to `horizon` and the first passage above
// `level` is recorded against `t_grid`.
struct MonteCarloConfig {
  StableParams params;
  std::optional<FunctionalParams> functional;
  double level = 1.0;
  long n_paths = 10000;
  Eigen::Index n_steps = 1024;
  double horizon = 100.0;
  std::uint64_t seed = 1;
  Eigen::ArrayXd t_grid;  // empty: 40 log-spaced points across the horizon

  void validate() const;
  Eigen::ArrayXd effective_grid() const;
  double dt() const { return horizon / static_cast<double>(n_steps); }
};

// Raw per-path passage results.  t_upper is +inf for censored paths and NaN
// for numerically failed ones; value_at_cross is the driving process at the
// crossing index.  When requested, t_upper_coarse holds the passage times
// recomputed on the even-index subsample of the same paths, so the two
// resolutions share every random number.
struct PassageBatch {
  Eigen::ArrayXd t_upper;
  Eigen::ArrayXd value_at_cross;
  Eigen::ArrayXd t_upper_coarse;  // empty unless with_coarse was set
  long n_failures = 0;
};

PassageBatch passage_batch(const MonteCarloConfig& cfg, int n_threads = 1,
                           bool with_coarse = false);

// Survival curve with exact integer survivor counts; p_hat = survivors/n and
// the usual binomial half-width sqrt(p(1-p)/n).
struct TailEstimate {
  Eigen::ArrayXd t_grid;
  Eigen::Array<long, Eigen::Dynamic, 1> survivors;
  long n_effective = 0;
  long n_failures = 0;
  Eigen::ArrayXd survival;
  Eigen::ArrayXd se;
  double dt = 0.0;  // grid step of the generating run (fit transient cutoff)
};

TailEstimate estimate_survival(const MonteCarloConfig& cfg, int n_threads = 1);

// Builds the curve for arbitrary per-unit first-passage style samples
// (+inf = survived forever within the study, NaN = discard).
TailEstimate survival_from_samples(const Eigen::ArrayXd& samples,
                                   const Eigen::ArrayXd& t_grid, double dt);

// Weighted log-log fit of the survival tail.  Points enter the fit only if
// t >= 10*dt (grid transient), 30 <= survivors < n_effective; among the
// admissible contiguous windows the widest one whose two-point slopes all
// sit within two pooled standard errors of the window's global slope wins.
struct ExponentFit {
  double theta_hat = 0.0;
  double theta_stderr = 0.0;
  Eigen::Index window_lo = -1;  // inclusive indices into t_grid
  Eigen::Index window_hi = -1;
  int n_points = 0;
};

ExponentFit fit_exponent(const TailEstimate& curve);

// (alpha-1)/(2 alpha) for functionals driven without negative jumps
// (chi = +1, or alpha = 2 where there are no jumps at all); the positivity
// parameter rho for the process itself; nullopt otherwise.
std::optional<double> theoretical_theta(const StableParams& p,
                                        bool functional_kind);

struct ThetaResult {
  TailEstimate curve;
  ExponentFit fit;
  ExponentFit coarse_fit;       // same study at half the grid resolution
  bool resolution_passed = false;
  std::optional<double> theory;
  std::optional<bool> agrees;   // |theta_hat - theory| <= 0.05
};

ThetaResult estimate_theta(const MonteCarloConfig& cfg, int n_threads = 1);

// ---------------------------------------------------------------------------
// Local-time / inverse-local-time pipeline.

struct XiBatchConfig {
  StableParams params;
  double beta = 1.0;
  double level = 1.0;          // local-time level defining tau and xi
  double passage_level = 1.0;  // functional level for T and Theta scans
  long n_paths = 10000;
  Eigen::Index n_steps = 1 << 14;
  double horizon = 16.0;
  std::uint64_t seed = 1;
  double bandwidth = 0.0;    // 0: default_bandwidth of the grid
  double pv_epsilon = -1.0;  // <0: default rule (grid scale iff beta <= -1)
};

// Per-path summaries of one xi study.  Censored paths (local time never
// reached the level) carry +inf in tau and NaN in the xi readouts; failed
// paths are NaN everywhere.
struct XiBatch {
  Eigen::ArrayXd tau, xi, xi_plus, xi_minus;
  Eigen::ArrayXd t_cross;     // first passage of A above passage_level (+inf)
  Eigen::ArrayXd theta_tau;   // first zero-visit time with A > passage_level
  Eigen::ArrayXd tau_before;  // previous zero-visit time at that moment
  Eigen::ArrayXd exc_total, exc_mixed;  // per-path excursion diagnostics
  long n_censored = 0;
  long n_failures = 0;
  double dt = 0.0, horizon = 0.0, bandwidth = 0.0, pv_epsilon = 0.0;
  double beta = 0.0, level = 0.0, passage_level = 0.0;
};

XiBatch sample_xi_batch(const XiBatchConfig& cfg, int n_threads = 1);

// Exact single increments of Z over unit time, one stream per draw.
Eigen::ArrayXd increment_batch(const StableParams& p, long n,
                               std::uint64_t seed, int n_threads = 1);

// Skeleton supremum of Z over [0, horizon] per path.
Eigen::ArrayXd sup_batch(const StableParams& p, double horizon,
                         Eigen::Index n_steps, long n, std::uint64_t seed,
                         int n_threads = 1);

// Functional value A at the horizon per path.
Eigen::ArrayXd terminal_functional_batch(const StableParams& p,
                                         const FunctionalParams& f,
                                         double horizon, Eigen::Index n_steps,
                                         long n, std::uint64_t seed,
                                         int n_threads = 1);

// ---------------------------------------------------------------------------
// Sample statistics.

// Empirical characteristic function with 20-block jackknife standard errors.
struct CharfnEstimate {
  Eigen::ArrayXd lambdas;
  Eigen::ArrayXcd phi;
  Eigen::ArrayXd se_abs, se_re, se_im;
  long n = 0;
};

CharfnEstimate empirical_charfn(const Eigen::ArrayXd& samples,
                                const Eigen::ArrayXd& lambdas);

// Fits -log|phi(lambda)| = kappa_xi * |lambda|^delta on an automatically
// chosen lambda window (where -log|phi| is neither drowned by noise nor
// saturated); jackknife errors over 20 sample blocks.
struct KappaXiFit {
  double kappa_xi = 0.0;
  double kappa_se = 0.0;
  double delta_hat = 0.0;
  double delta_se = 0.0;
  int n_lambdas = 0;
};

KappaXiFit estimate_kappa_xi(const Eigen::ArrayXd& xi_samples);

// Truncated-moment divergence probe: regresses the log increments of
// E[min(X, M)^k] on log M over half-decade truncation rungs.  A tail index
// q gives expected slope k - q, so slope > -0.05 flags divergence (k >= q)
// and anything steeper flags a convergent moment.
struct MomentProbe {
  double slope = 0.0;
  double slope_se = 0.0;
  bool diverges = false;
  int n_rungs = 0;
};

MomentProbe moment_probe(const Eigen::ArrayXd& samples, double k);

}  // namespace plab
