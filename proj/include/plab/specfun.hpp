#pragma once

#include <complex>

#include "plab/stable.hpp"

namespace plab {

// Gamma function with explicit pole rejection (throws std::domain_error at
// non-positive integers).
double gamma_fn(double z);

// Laplace-exponent scale of the inverse local time at zero:
// E[exp(-q tau_t)] = exp(-t kappa_tau q^gamma) with gamma = (alpha-1)/alpha.
// Closed form; the symmetric, totally-skewed and generic-skew branches all
// reduce to each other in their shared limits.
double kappa_tau_closed(const StableParams& p);

// The same constant from its defining resolvent integral,
//   kappa_tau = 2 pi / int_R Re(1/(1 + Psi(lambda))) dlambda,
// evaluated by adaptive quadrature plus an analytic expansion of the
// O(|lambda|^-alpha) tail.  Independent route used to cross-check the
// closed form.
double kappa_tau_quadrature(const StableParams& p);

// Scale constant of the stable law of A at inverse local time when the
// driver is Brownian (alpha = 2), as a function of kappa and the index
// delta = 1/(2 + beta):
//   pi (2 kappa)^(1/delta - 1) 2^delta / (2 delta sin(pi delta/2))
//     * (delta^delta / Gamma(delta))^2.
double kappa_xi_brownian(double kappa, double delta);

// Characteristic function of the principal-value functional (beta = -1)
// read at inverse local time: a Cauchy law of scale pi*t for every
// admissible (alpha, chi).
std::complex<double> fgb_charfn(double t, double lambda);

// int_0^infinity 2/pi * sin(eta/2) eta^(-1-delta/2) cos(delta pi/4 - eta/2)
// in closed form, 2/(delta Gamma(delta/2)).
double oscillating_integral_closed(double delta);

// Same value assembled from the two sine-power integrals of its
// integration-by-parts decomposition,
//   cos(delta pi/4)/pi * J(-delta/2) + 2 sin(delta pi/4)/(pi delta) * J(1 - delta/2),
// with J evaluated numerically (never through Gamma), so the two routes are
// independent.
double oscillating_integral_numeric(double delta);

// Exact persistence prefactor for the integrated standard Brownian motion
// (alpha = 2, kappa = 1/2, beta = 1, unit level):
//   3^(4/3) Gamma(2/3) / (pi 2^(13/12) Gamma(3/4)).
double goldman_constant();

// Composed upper-bound prefactor sqrt(kappa_tau/kappa_xi) * 2 /
// (delta Gamma(delta/2) Gamma(1 - gamma/2)).  kappa_xi has a closed form
// only for alpha = 2 or beta = -1; elsewhere the value is unknown and the
// report says so instead of guessing.
struct ConstantReport {
  enum class Validity { exact, cross_checked, closed_form_only, unknown };
  double value;  // NaN when validity == unknown
  Validity validity;
  double kappa_tau;
  double kappa_xi;  // NaN when unknown
  double delta;
  double gamma;
};

ConstantReport composed_prefactor(const StableParams& p, double beta,
                                  bool cross_check = true);

// Marginal density of Z_1 by Fourier inversion of exp(-Psi).
double stable_pdf(const StableParams& p, double x);

}  // namespace plab
