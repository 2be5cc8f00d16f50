#include "plab/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "plab/errors.hpp"
#include "plab/specfun.hpp"
#include "plab/stats.hpp"

namespace plab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> finite_values(const Eigen::ArrayXd& x) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::isfinite(x[i])) v.push_back(x[i]);
  }
  return v;
}

Eigen::ArrayXd to_array(const std::vector<double>& v) {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = v[i];
  }
  return out;
}

// Fraction of censored paths among those that simulated cleanly.
double censored_fraction(const XiBatch& batch) {
  const long attempted = batch.xi.size() - batch.n_failures;
  if (attempted <= 0) return 1.0;
  return static_cast<double>(batch.n_censored) / static_cast<double>(attempted);
}

std::string format_g(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::passed: return "passed";
    case CheckStatus::failed: return "failed";
    case CheckStatus::inconclusive: return "inconclusive";
    case CheckStatus::exploratory: return "exploratory";
  }
  return "unknown";
}

IdentityReport check_fgb(const XiBatch& batch, double tolerance) {
  IdentityReport report;
  report.name = "cauchy_charfn_at_inverse_local_time";
  report.threshold = tolerance;

  std::vector<double> xi = finite_values(batch.xi);
  report.n_effective = static_cast<long>(xi.size());
  if (xi.size() < 200) {
    report.status = CheckStatus::inconclusive;
    report.detail = "fewer than 200 usable paths";
    return report;
  }
  const double censored = censored_fraction(batch);
  if (censored > 0.2) {
    report.status = CheckStatus::inconclusive;
    report.detail = "censored fraction " + format_g(censored) +
                    " exceeds 0.2, horizon too short for this level";
    report.statistic = censored;
    return report;
  }

  Eigen::ArrayXd lambdas(4);
  lambdas << 0.25, 0.5, 1.0, 2.0;
  CharfnEstimate phi = empirical_charfn(to_array(xi), lambdas);

  double worst = 0.0;
  std::ostringstream detail;
  detail.precision(4);
  for (Eigen::Index j = 0; j < lambdas.size(); ++j) {
    const std::complex<double> target = fgb_charfn(batch.level, lambdas[j]);
    const double dev = std::abs(phi.phi[j] - target);
    worst = std::max(worst, dev);
    if (j > 0) detail << "; ";
    detail << "lambda=" << lambdas[j] << " |dphi|=" << dev
           << " im=" << phi.phi[j].imag() << " se_im=" << phi.se_im[j];
  }
  report.statistic = worst;
  report.status = worst <= tolerance ? CheckStatus::passed : CheckStatus::failed;
  report.detail = detail.str();
  return report;
}

IdentityReport check_symmetry_lemma(const XiBatch& batch, bool corrupt) {
  IdentityReport report;
  report.name = corrupt ? "xi_symmetry_corrupted_control" : "xi_symmetry";

  // Disjoint halves by path parity keep the two KS samples independent.
  std::vector<double> even, odd_neg, xs, ts;
  for (Eigen::Index p = 0; p < batch.xi.size(); ++p) {
    double v = batch.xi[p];
    if (!std::isfinite(v)) continue;
    if (corrupt) v += 0.2;
    if (p % 2 == 0) {
      even.push_back(v);
    } else {
      odd_neg.push_back(-v);
    }
    xs.push_back(v);
    ts.push_back(batch.tau[p]);
  }
  report.n_effective = static_cast<long>(xs.size());
  if (even.size() < 200 || odd_neg.size() < 200) {
    report.status = CheckStatus::inconclusive;
    report.detail = "fewer than 200 usable paths per half";
    return report;
  }

  // Joint probe: the pair law is unchanged by flipping the sign of xi, so
  // any bounded functional odd in xi has mean zero.  Both coordinates are
  // capped at their medians (tau is heavy tailed, a raw product would not
  // even be integrable); the caps depend on the sample only through tau and
  // |xi|, which keeps the null mean exactly zero.
  auto median_of = [](std::vector<double> v) {
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
  };
  std::vector<double> abs_xs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) abs_xs[i] = std::abs(xs[i]);
  const double cap_tau = median_of(ts);
  const double cap_xi = std::max(median_of(abs_xs), 1e-300);
  std::vector<double> probe(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double wt = std::min(ts[i] / cap_tau, 1.0);
    const double wx = std::min(std::abs(xs[i]) / cap_xi, 1.0);
    probe[i] = wt * wx * (xs[i] > 0.0 ? 1.0 : (xs[i] < 0.0 ? -1.0 : 0.0));
  }

  const double ks = ks_statistic(to_array(even), to_array(odd_neg));
  const double critical =
      ks_critical(0.01, static_cast<Eigen::Index>(even.size()),
                  static_cast<Eigen::Index>(odd_neg.size()));

  const Eigen::ArrayXd pr = to_array(probe);
  const double mean = pr.mean();
  const double sd = std::sqrt((pr - mean).square().sum() /
                              (static_cast<double>(pr.size()) - 1.0));
  const double se = sd / std::sqrt(static_cast<double>(pr.size()));
  const bool ks_ok = ks <= critical;
  const bool probe_ok = std::abs(mean) <= 3.0 * se;

  report.statistic = ks / critical;
  report.threshold = 1.0;
  report.status =
      ks_ok && probe_ok ? CheckStatus::passed : CheckStatus::failed;
  report.detail = "ks=" + format_g(ks) + " critical=" + format_g(critical) +
                  " probe_mean=" + format_g(mean) + " probe_se=" +
                  format_g(se);
  return report;
}

IdentityReport check_xi_split_symmetry(const XiBatch& batch) {
  IdentityReport report;
  report.name = "xi_one_sided_parts_share_a_law";
  if (batch.beta <= -1.0) {
    report.status = CheckStatus::inconclusive;
    report.detail =
        "one-sided parts diverge without a principal value, the split law "
        "is only defined for beta > -1";
    return report;
  }

  std::vector<double> plus_even, minus_odd;
  for (Eigen::Index p = 0; p < batch.xi_plus.size(); ++p) {
    if (p % 2 == 0) {
      if (std::isfinite(batch.xi_plus[p])) plus_even.push_back(batch.xi_plus[p]);
    } else {
      if (std::isfinite(batch.xi_minus[p])) minus_odd.push_back(batch.xi_minus[p]);
    }
  }
  report.n_effective = static_cast<long>(plus_even.size() + minus_odd.size());
  if (plus_even.size() < 200 || minus_odd.size() < 200) {
    report.status = CheckStatus::inconclusive;
    report.detail = "fewer than 200 usable paths per half";
    return report;
  }

  const double ks = ks_statistic(to_array(plus_even), to_array(minus_odd));
  const double critical =
      ks_critical(0.01, static_cast<Eigen::Index>(plus_even.size()),
                  static_cast<Eigen::Index>(minus_odd.size()));

  double mixed = 0.0, total = 0.0;
  for (Eigen::Index p = 0; p < batch.exc_total.size(); ++p) {
    if (std::isfinite(batch.exc_total[p])) {
      total += batch.exc_total[p];
      mixed += batch.exc_mixed[p];
    }
  }
  const double mixed_fraction = total > 0.0 ? mixed / total : 0.0;

  report.statistic = ks / critical;
  report.threshold = 1.0;
  report.status = ks <= critical ? CheckStatus::passed : CheckStatus::failed;
  report.detail = "ks=" + format_g(ks) + " critical=" + format_g(critical) +
                  " sign_mixed_stretch_fraction=" + format_g(mixed_fraction);
  return report;
}

IdentityReport check_bingham_tail(const Eigen::ArrayXd& sup_samples,
                                  const Eigen::ArrayXd& increment_samples,
                                  const StableParams& p,
                                  const Eigen::ArrayXd& x_values) {
  IdentityReport report;
  report.name = "sup_tail_is_alpha_times_marginal_tail";
  report.threshold = 3.0;
  if (!p.gaussian() && p.chi != -1.0) {
    throw std::invalid_argument(
        "the sup tail identity needs a driver with no positive jumps");
  }

  std::vector<double> sup = finite_values(sup_samples);
  std::vector<double> inc = finite_values(increment_samples);
  report.n_effective = static_cast<long>(std::min(sup.size(), inc.size()));
  if (sup.size() < 1000 || inc.size() < 1000) {
    report.status = CheckStatus::inconclusive;
    report.detail = "fewer than 1000 usable samples per side";
    return report;
  }

  Eigen::ArrayXd xs = x_values;
  if (xs.size() == 0) {
    // Anchor the comparison where the increment tail still holds mass: at
    // levels whose exceedance probabilities are fixed fractions of P[Z > 0].
    std::vector<double> sorted = inc;
    std::sort(sorted.begin(), sorted.end());
    const double rho = positivity_parameter(p);
    const double fractions[3] = {0.6, 0.35, 0.15};
    xs.resize(3);
    for (int i = 0; i < 3; ++i) {
      const double q = rho * fractions[i];
      auto idx = static_cast<std::ptrdiff_t>(
          static_cast<double>(sorted.size()) * (1.0 - q));
      idx = std::clamp<std::ptrdiff_t>(
          idx, 0, static_cast<std::ptrdiff_t>(sorted.size()) - 1);
      xs[i] = sorted[static_cast<std::size_t>(idx)];
    }
  }

  const double ns = static_cast<double>(sup.size());
  const double nz = static_cast<double>(inc.size());
  double worst = 0.0;
  std::ostringstream detail;
  detail.precision(4);
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    double cs = 0.0, cz = 0.0;
    for (double v : sup) cs += v >= x ? 1.0 : 0.0;
    for (double v : inc) cz += v >= x ? 1.0 : 0.0;
    const double ps = cs / ns;
    const double pz = cz / nz;
    const double pooled = std::sqrt(ps * (1.0 - ps) / ns +
                                    p.alpha * p.alpha * pz * (1.0 - pz) / nz);
    const double ratio =
        pooled > 0.0 ? std::abs(ps - p.alpha * pz) / pooled
                     : std::numeric_limits<double>::infinity();
    worst = std::max(worst, ratio);
    if (i > 0) detail << "; ";
    detail << "x=" << x << " p_sup=" << ps << " alpha*p_inc=" << p.alpha * pz
           << " dev/se=" << ratio;
  }
  report.statistic = worst;
  report.status =
      worst <= report.threshold ? CheckStatus::passed : CheckStatus::failed;
  report.detail = detail.str();
  return report;
}

IdentityReport check_kp_inequality(const XiBatch& batch) {
  IdentityReport report;
  report.name = "passage_after_straddling_excursion_start";
  report.threshold = 0.001;

  long eligible = 0, violations = 0;
  const double slack = 2.0 * batch.dt;
  for (Eigen::Index p = 0; p < batch.t_cross.size(); ++p) {
    const double cross = batch.t_cross[p];
    const double theta = batch.theta_tau[p];
    const double before = batch.tau_before[p];
    if (!std::isfinite(cross) || !std::isfinite(theta) ||
        !std::isfinite(before)) {
      continue;
    }
    ++eligible;
    if (cross < before - slack) ++violations;
  }
  report.n_effective = eligible;
  if (eligible < 1000) {
    report.status = CheckStatus::inconclusive;
    report.detail = "fewer than 1000 paths with both passage and zero visit";
    return report;
  }
  const double fraction =
      static_cast<double>(violations) / static_cast<double>(eligible);
  report.statistic = fraction;
  report.status = fraction <= report.threshold ? CheckStatus::passed
                                               : CheckStatus::failed;
  report.detail = format_g(static_cast<double>(violations)) + " violations in " +
                  format_g(static_cast<double>(eligible)) + " crossed paths";
  return report;
}

IdentityReport check_positivity_a1(const Eigen::ArrayXd& terminal_samples,
                                   const StableParams& p) {
  IdentityReport report;
  report.name = "functional_positivity_matches_driver";
  report.threshold = 3.0;

  std::vector<double> a = finite_values(terminal_samples);
  report.n_effective = static_cast<long>(a.size());
  if (a.size() < 1000) {
    report.status = CheckStatus::inconclusive;
    report.detail = "fewer than 1000 usable samples";
    return report;
  }
  double positive = 0.0;
  for (double v : a) positive += v > 0.0 ? 1.0 : 0.0;
  const double n = static_cast<double>(a.size());
  const double phat = positive / n;
  const double rho = positivity_parameter(p);
  const double se = std::sqrt(rho * (1.0 - rho) / n);
  report.statistic = std::abs(phat - rho) / se;
  report.status = report.statistic <= report.threshold ? CheckStatus::passed
                                                       : CheckStatus::failed;
  report.detail = "p_hat=" + format_g(phat) + " rho=" + format_g(rho) +
                  " se=" + format_g(se);
  return report;
}

IdentityReport check_tauberian_tail(const XiBatch& batch,
                                    const StableParams& p) {
  IdentityReport report;
  report.name = "above_level_zero_visit_tail";
  report.threshold = 0.05;

  const double gamma = (p.alpha - 1.0) / p.alpha;
  const double target = 0.5 * gamma;

  TailEstimate curve = survival_from_samples(
      batch.theta_tau, log_spaced_grid(10.0 * batch.dt, batch.horizon, 40),
      batch.dt);
  report.n_effective = curve.n_effective;
  ExponentFit fit;
  try {
    fit = fit_exponent(curve);
  } catch (const NumericError& e) {
    report.status = CheckStatus::inconclusive;
    report.detail = e.what();
    return report;
  }
  const double slope_dev = std::abs(fit.theta_hat - target);
  report.statistic = slope_dev;

  std::ostringstream detail;
  detail.precision(5);
  detail << "theta_hat=" << fit.theta_hat << " target=" << target
         << " stderr=" << fit.theta_stderr;
  if (slope_dev > report.threshold) {
    report.status = CheckStatus::failed;
    report.detail = detail.str();
    return report;
  }

  // Level the curve by t^{gamma/2}; its weighted mean over the fit window
  // estimates the tail constant.
  double wsum = 0.0, vsum = 0.0;
  for (Eigen::Index i = fit.window_lo; i <= fit.window_hi; ++i) {
    const double t = curve.t_grid[i];
    const double scaled = curve.survival[i] * std::pow(t, target);
    const double se = curve.se[i] * std::pow(t, target);
    if (!(se > 0.0)) continue;
    const double w = 1.0 / (se * se);
    wsum += w;
    vsum += w * scaled;
  }
  const double measured = vsum / wsum;
  detail << " measured_prefactor=" << measured;

  ConstantReport constant = composed_prefactor(p, batch.beta, true);
  if (!std::isfinite(constant.value)) {
    report.status = CheckStatus::exploratory;
    detail << " (no closed form for the prefactor at these parameters)";
    report.detail = detail.str();
    return report;
  }
  const double hurst = 1.0 + batch.beta / p.alpha;
  const double expected =
      constant.value * std::pow(batch.passage_level, target / hurst);
  const double rel = std::abs(measured - expected) / expected;
  detail << " expected_prefactor=" << expected << " rel_dev=" << rel;
  report.status = rel <= 0.25 ? CheckStatus::passed : CheckStatus::failed;
  report.detail = detail.str();
  return report;
}

}  // namespace plab
