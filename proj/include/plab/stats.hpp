#pragma once

#include <Eigen/Dense>

namespace plab {

// Survival function of the Kolmogorov distribution,
// P[K > z] = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 z^2).
double kolmogorov_sf(double z);

// Two-sample Kolmogorov-Smirnov critical value at the given significance
// level: c(level) * sqrt((n+m)/(n*m)) with c solved from the Kolmogorov
// series.  Asymptotic in n, m; at the sample sizes used here the finite-n
// correction is orders of magnitude below the decision margin.
double ks_critical(double level, Eigen::Index n, Eigen::Index m);

// sup_x |F_a(x) - F_b(x)| over the pooled sample (inputs need not be sorted).
double ks_statistic(Eigen::ArrayXd a, Eigen::ArrayXd b);

// Weighted least squares for y = intercept + slope * x with independent
// per-point variances.  Zero variances (exact inputs) fall back to an
// unweighted fit and report zero standard errors.
struct LineFit {
  double slope;
  double intercept;
  double slope_se;
  double intercept_se;
};

LineFit weighted_line_fit(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                          const Eigen::ArrayXd& var_y);

}  // namespace plab
