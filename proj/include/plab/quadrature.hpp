#pragma once

#include <functional>

namespace plab {

struct QuadratureResult {
  double value;
  double error_estimate;
  int segments;
};

// Globally adaptive Gauss-Kronrod 15(7) integration on a finite interval.
// Segments are bisected worst-error-first until the summed error estimate
// drops below max(abs_tol, rel_tol * |integral|).  Throws NumericError when
// the segment budget is exhausted first.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-12,
                           double rel_tol = 1e-12, int max_segments = 4000);

// int_0^infinity eta^(s-1) sin(eta) deta for s in (-1, 1), s != 0.
// Computed as a power series on [0,1], an adaptive panel on [1, 40*pi]
// and an integration-by-parts asymptotic series for the remainder; the
// closed form Gamma(s) sin(pi s / 2) is deliberately not used so this
// routine can serve as an independent cross-check of Gamma identities.
double sin_power_integral(double s);

}  // namespace plab
