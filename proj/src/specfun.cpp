#include "plab/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "plab/errors.hpp"
#include "plab/quadrature.hpp"

namespace plab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}  // namespace

double gamma_fn(double z) {
  if (!std::isfinite(z)) {
    throw std::domain_error("gamma_fn needs a finite argument");
  }
  if (z <= 0.0 && z == std::floor(z)) {
    throw std::domain_error("gamma_fn pole at non-positive integer z = " +
                            std::to_string(z));
  }
  return std::tgamma(z);
}

double kappa_tau_closed(const StableParams& p) {
  const double scale = p.alpha * std::pow(p.kappa, 1.0 / p.alpha);
  if (p.gaussian() || p.chi == 0.0) {
    return scale * std::sin(kPi / p.alpha);
  }
  if (p.chi == 1.0 || p.chi == -1.0) {
    return scale / std::pow(std::sin((p.alpha - 1.0) * kPi / 2.0), 1.0 / p.alpha);
  }
  // Generic skew: mu measures how far the exponent leans into the complex
  // plane; the expression interpolates the symmetric and one-sided branches.
  const double t = std::tan(kPi * p.alpha / 2.0);
  const double mu = 1.0 / std::sqrt(1.0 + p.chi * p.chi * t * t);
  const double d = std::abs(positivity_parameter(p) - 0.5);
  return scale * std::sin(kPi / p.alpha) * std::pow(mu, -1.0 / p.alpha) *
         std::sqrt(1.0 - mu * mu) /
         (std::sin(kPi * (p.alpha - 1.0) * d) + mu * std::sin(kPi * d));
}

double kappa_tau_quadrature(const StableParams& p) {
  const double t = p.gaussian() ? 0.0 : std::tan(kPi * p.alpha / 2.0);
  const double ct = p.chi * t;
  const double wmag = std::sqrt(1.0 + ct * ct);
  const double wphase = std::atan(ct);

  // Re(1/(1+Psi)) on the positive half-line; the integrand is even.
  const auto f = [&](double lam) {
    const double m = p.kappa * std::pow(lam, p.alpha);
    const double re = 1.0 + m;
    const double im = m * ct;
    return re / (re * re + im * im);
  };

  // Finite panel up to a cutoff where |Psi| is comfortably > 1, then the
  // geometric expansion 1/(1+Psi) = sum (-1)^(k-1) Psi^(-k) integrated
  // termwise: Re(Psi^-k) = (kappa wmag)^-k cos(k wphase) lambda^(-k alpha).
  const double lam_scale = std::pow(p.kappa, -1.0 / p.alpha);
  const double cutoff =
      std::max({std::pow(12.0 / (p.kappa * wmag), 1.0 / p.alpha),
                10.0 * lam_scale, 4.0});
  const double finite =
      integrate(f, 0.0, cutoff, 1e-300, 1e-13, 8000).value;

  double tail = 0.0;
  const double base = 1.0 / (p.kappa * wmag);
  double powc = 1.0;  // (kappa wmag)^-k, accumulated
  for (int k = 1; k <= 300; ++k) {
    powc *= base;
    const double envelope = powc * std::pow(cutoff, 1.0 - k * p.alpha) /
                            (k * p.alpha - 1.0);
    tail += ((k % 2 == 1) ? 1.0 : -1.0) * std::cos(k * wphase) * envelope;
    // The cosine can vanish at isolated k, so convergence is judged on the
    // cosine-free envelope, which decreases geometrically.
    if (envelope < 1e-17 * (std::abs(finite) + std::abs(tail))) break;
    if (k == 300) {
      throw NumericError("kappa_tau tail expansion failed to converge");
    }
  }
  return kPi / (finite + tail);
}

double kappa_xi_brownian(double kappa, double delta) {
  if (!(kappa > 0.0)) {
    throw std::domain_error("kappa must be positive");
  }
  if (!(delta > 0.0) || !(delta < 2.0)) {
    throw std::domain_error("delta must lie in (0, 2), got " +
                            std::to_string(delta));
  }
  const double ratio = std::pow(delta, delta) / gamma_fn(delta);
  return kPi * std::pow(2.0 * kappa, 1.0 / delta - 1.0) *
         std::pow(2.0, delta) / (2.0 * delta * std::sin(kPi * delta / 2.0)) *
         ratio * ratio;
}

std::complex<double> fgb_charfn(double t, double lambda) {
  if (!(t >= 0.0)) {
    throw std::domain_error("time must be >= 0");
  }
  return {std::exp(-t * kPi * std::abs(lambda)), 0.0};
}

double oscillating_integral_closed(double delta) {
  if (!(delta > 0.0) || !(delta < 2.0)) {
    throw std::domain_error("delta must lie in (0, 2)");
  }
  return 2.0 / (delta * gamma_fn(delta / 2.0));
}

double oscillating_integral_numeric(double delta) {
  if (!(delta > 0.0) || !(delta < 2.0)) {
    throw std::domain_error("delta must lie in (0, 2)");
  }
  const double j_minus = sin_power_integral(-delta / 2.0);
  const double j_plus = sin_power_integral(1.0 - delta / 2.0);
  return std::cos(delta * kPi / 4.0) / kPi * j_minus +
         2.0 * std::sin(delta * kPi / 4.0) / (kPi * delta) * j_plus;
}

double goldman_constant() {
  return std::pow(3.0, 4.0 / 3.0) * gamma_fn(2.0 / 3.0) /
         (kPi * std::pow(2.0, 13.0 / 12.0) * gamma_fn(3.0 / 4.0));
}

ConstantReport composed_prefactor(const StableParams& p, double beta,
                                  bool cross_check) {
  if (!(beta > -(p.alpha + 1.0) / 2.0)) {
    throw std::domain_error("beta must exceed -(alpha+1)/2");
  }
  ConstantReport rep;
  rep.delta = (p.alpha - 1.0) / (p.alpha + beta);
  rep.gamma = (p.alpha - 1.0) / p.alpha;
  rep.kappa_tau = kappa_tau_closed(p);
  rep.validity = ConstantReport::Validity::closed_form_only;

  if (cross_check) {
    const double twin = kappa_tau_quadrature(p);
    if (std::abs(twin - rep.kappa_tau) >
        1e-8 * std::max(1.0, std::abs(rep.kappa_tau))) {
      throw NumericError(
          "kappa_tau closed form and quadrature disagree: " +
          std::to_string(rep.kappa_tau) + " vs " + std::to_string(twin));
    }
    rep.validity = ConstantReport::Validity::cross_checked;
  }

  if (beta == -1.0) {
    rep.kappa_xi = kPi;  // Cauchy scale of the principal-value functional
  } else if (p.gaussian()) {
    rep.kappa_xi = kappa_xi_brownian(p.kappa, rep.delta);
  } else {
    rep.kappa_xi = kNan;
    rep.value = kNan;
    rep.validity = ConstantReport::Validity::unknown;
    return rep;
  }

  rep.value = std::sqrt(rep.kappa_tau / rep.kappa_xi) * 2.0 /
              (rep.delta * gamma_fn(rep.delta / 2.0) *
               gamma_fn(1.0 - rep.gamma / 2.0));
  return rep;
}

double stable_pdf(const StableParams& p, double x) {
  const double t = p.gaussian() ? 0.0 : std::tan(kPi * p.alpha / 2.0);
  const double ct = p.chi * t;
  // p(x) = 1/pi int_0^inf exp(-kappa lam^alpha) cos(lam x - kappa ct lam^alpha)
  const auto f = [&](double lam) {
    const double m = p.kappa * std::pow(lam, p.alpha);
    return std::exp(-m) * std::cos(lam * x - m * ct);
  };
  const double cutoff = std::pow(41.5 / p.kappa, 1.0 / p.alpha);
  return integrate(f, 0.0, cutoff, 1e-12, 1e-11, 8000).value / kPi;
}

}  // namespace plab
