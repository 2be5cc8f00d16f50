#include "plab/stable.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace plab {

namespace {
constexpr double kPi = std::numbers::pi;
}

StableParams::StableParams(double alpha_, double kappa_, double chi_)
    : alpha(alpha_), kappa(kappa_), chi(chi_) {
  if (!(alpha > 1.0) || !(alpha <= 2.0)) {
    throw std::invalid_argument(
        "stability index alpha must lie in (1, 2], got " +
        std::to_string(alpha_));
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("scale kappa must be positive, got " +
                                std::to_string(kappa_));
  }
  if (!(chi >= -1.0) || !(chi <= 1.0)) {
    throw std::invalid_argument(
        "skewness chi must lie in [-1, 1], got " + std::to_string(chi_));
  }
}

double positivity_parameter(const StableParams& p) {
  if (p.gaussian() || p.chi == 0.0) return 0.5;
  // Mirror chi < 0 through rho(-chi) = 1 - rho(chi).  The subtraction
  // 1 - rho is exact here (rho in [1/2, 1)), so the pair sums to 1 exactly.
  if (p.chi < 0.0) return 1.0 - positivity_parameter({p.alpha, p.kappa, -p.chi});
  const double inv = 1.0 / p.alpha;
  if (p.chi == 1.0) return 1.0 - inv;
  // tan(pi alpha/2) < 0 on (1,2), so positive skew pulls rho below 1/2;
  // the arctan never reaches its asymptote and rho stays inside the
  // admissible interval up to rounding, which the clamp absorbs.
  const double rho =
      0.5 + std::atan(p.chi * std::tan(kPi * p.alpha / 2.0)) / (kPi * p.alpha);
  return std::max(1.0 - inv, std::min(inv, rho));
}

std::complex<double> levy_exponent(const StableParams& p, double lambda) {
  const double mag = p.kappa * std::pow(std::abs(lambda), p.alpha);
  if (p.gaussian()) return {mag, 0.0};
  const double sgn = (lambda > 0.0) - (lambda < 0.0);
  return {mag, -mag * p.chi * sgn * std::tan(kPi * p.alpha / 2.0)};
}

StableSampler::StableSampler(const StableParams& p, std::uint64_t seed,
                             std::uint64_t stream)
    : rng_(seed, stream),
      alpha_(p.alpha),
      inv_alpha_(1.0 / p.alpha),
      scale_(std::pow(p.kappa, 1.0 / p.alpha)),
      gaussian_(p.gaussian()) {
  if (gaussian_) {
    cms_b_ = 0.0;
    cms_s_ = 0.0;
    pow_exp_ = 0.0;
    return;
  }
  const double t = std::tan(kPi * p.alpha / 2.0);
  cms_b_ = std::atan(p.chi * t) / p.alpha;
  cms_s_ = std::pow(1.0 + p.chi * p.chi * t * t, 1.0 / (2.0 * p.alpha));
  pow_exp_ = (1.0 - p.alpha) / p.alpha;
}

double StableSampler::next_standard() {
  if (gaussian_) {
    // exp(-lambda^2) is a centered Gaussian with variance 2
    return std::numbers::sqrt2 * rng_.next_normal();
  }
  // Chambers-Mallows-Stuck: V uniform on (-pi/2, pi/2), W standard
  // exponential, both strictly interior because the uniforms are open.
  const double v = kPi * (rng_.next_uniform() - 0.5);
  const double w = -std::log(rng_.next_uniform());
  const double av = alpha_ * (v + cms_b_);
  return cms_s_ * std::sin(av) / std::pow(std::cos(v), inv_alpha_) *
         std::pow(std::cos(v - av) / w, pow_exp_);
}

double StableSampler::next_increment(double dt) {
  return scale_ * std::pow(dt, inv_alpha_) * next_standard();
}

PathGrid simulate_path(const StableParams& p, double horizon,
                       Eigen::Index n_steps, std::uint64_t seed,
                       std::uint64_t stream) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be positive and finite");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("n_steps must be at least 1");
  }
  PathGrid grid;
  grid.times.resize(n_steps + 1);
  grid.values.resize(n_steps + 1);
  const double dt = horizon / static_cast<double>(n_steps);
  const double step_scale =
      std::pow(p.kappa, 1.0 / p.alpha) * std::pow(dt, 1.0 / p.alpha);

  StableSampler sampler(p, seed, stream);
  double z = 0.0;
  grid.times[0] = 0.0;
  grid.values[0] = 0.0;
  for (Eigen::Index j = 1; j <= n_steps; ++j) {
    z += step_scale * sampler.next_standard();
    grid.times[j] = dt * static_cast<double>(j);
    grid.values[j] = z;
  }
  return grid;
}

}  // namespace plab
