#include "plab/functionals.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace plab {

namespace {

// |z|^beta sgn(z) with the symmetric truncation; z = 0 contributes nothing
// (sgn 0 = 0), which also dodges 0^beta = inf for negative beta.
inline double signed_power(double z, double beta, double eps) {
  const double az = std::abs(z);
  if (az <= eps || z == 0.0) return 0.0;
  const double mag = std::pow(az, beta);
  return z > 0.0 ? mag : -mag;
}

}  // namespace

FunctionalParams::FunctionalParams(const StableParams& p, double beta_,
                                   double pv_epsilon_)
    : beta(beta_), pv_epsilon(pv_epsilon_), alpha(p.alpha) {
  if (!(beta > -(alpha + 1.0) / 2.0)) {
    throw std::invalid_argument(
        "beta must exceed -(alpha+1)/2 = " +
        std::to_string(-(alpha + 1.0) / 2.0) + ", got " + std::to_string(beta_));
  }
  if (!(pv_epsilon >= 0.0) || !std::isfinite(pv_epsilon)) {
    throw std::invalid_argument("pv_epsilon must be finite and >= 0");
  }
  if (beta <= -1.0 && pv_epsilon == 0.0) {
    throw std::invalid_argument(
        "beta <= -1 needs a principal-value truncation: pv_epsilon > 0");
  }
}

double default_pv_epsilon(const StableParams& p, double horizon,
                          Eigen::Index n_steps) {
  const double dt = horizon / static_cast<double>(n_steps);
  return std::pow(dt, 1.0 / p.alpha) * std::pow(p.kappa, 1.0 / p.alpha);
}

double default_bandwidth(const StableParams& p, double horizon,
                         Eigen::Index n_steps) {
  return 2.0 * default_pv_epsilon(p, horizon, n_steps);
}

FunctionalSeries homogeneous_functional(const PathGrid& grid,
                                        const FunctionalParams& f) {
  const Eigen::Index n = grid.values.size();
  FunctionalSeries out;
  out.times = grid.times;
  out.values.resize(n);
  out.positive.resize(n);
  out.negative.resize(n);
  const double dt = grid.dt();
  double pos = 0.0;
  double neg = 0.0;
  out.values[0] = 0.0;
  out.positive[0] = 0.0;
  out.negative[0] = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    const double g = signed_power(grid.values[j - 1], f.beta, f.pv_epsilon);
    if (g > 0.0) {
      pos += g * dt;
    } else if (g < 0.0) {
      neg -= g * dt;
    }
    out.positive[j] = pos;
    out.negative[j] = neg;
    out.values[j] = pos - neg;
  }
  return out;
}

PassageTime first_passage(const Eigen::ArrayXd& times,
                          const Eigen::ArrayXd& values, double level) {
  if (times.size() != values.size() || times.size() == 0) {
    throw std::invalid_argument("times/values must be nonempty and congruent");
  }
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (values[j] > level) {
      return {true, j > 0 ? times[j - 1] : times[0], times[j], j};
    }
  }
  return {false, std::numeric_limits<double>::quiet_NaN(),
          std::numeric_limits<double>::quiet_NaN(), -1};
}

Eigen::ArrayXd running_sup(const Eigen::ArrayXd& values) {
  Eigen::ArrayXd out(values.size());
  double m = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    m = std::max(m, values[j]);
    out[j] = m;
  }
  return out;
}

LocalTimeCurve local_time_zero(const PathGrid& grid, double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw std::invalid_argument("bandwidth must be positive and finite");
  }
  const Eigen::Index n = grid.values.size();
  LocalTimeCurve out;
  out.times = grid.times;
  out.values.resize(n);
  out.bandwidth = bandwidth;
  const double weight = grid.dt() / (2.0 * bandwidth);
  double acc = 0.0;
  out.values[0] = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    if (std::abs(grid.values[j - 1]) < bandwidth) acc += weight;
    out.values[j] = acc;
  }
  return out;
}

InverseLocalTime inverse_local_time(const LocalTimeCurve& curve, double level) {
  if (!(level >= 0.0)) {
    throw std::invalid_argument("local-time level must be >= 0");
  }
  for (Eigen::Index j = 0; j < curve.values.size(); ++j) {
    if (curve.values[j] > level) {
      return {false, curve.times[j], j};
    }
  }
  return {true, std::numeric_limits<double>::quiet_NaN(), -1};
}

XiValue xi_process(const FunctionalSeries& series, const LocalTimeCurve& curve,
                   double level) {
  if (series.values.size() != curve.values.size()) {
    throw std::invalid_argument(
        "functional series and local-time curve use different grids");
  }
  const InverseLocalTime inv = inverse_local_time(curve, level);
  if (inv.censored) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {true, nan, nan, nan, nan};
  }
  const Eigen::Index j = inv.index;
  return {false, inv.tau, series.positive[j] - series.negative[j],
          series.positive[j], series.negative[j]};
}

}  // namespace plab
