#include "plab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plab {

double kolmogorov_sf(double z) {
  if (z <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * z * z);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::min(1.0, 2.0 * sum);
}

double ks_critical(double level, Eigen::Index n, Eigen::Index m) {
  if (!(level > 0.0) || !(level < 1.0)) {
    throw std::invalid_argument("significance level must lie in (0,1)");
  }
  if (n < 1 || m < 1) {
    throw std::invalid_argument("both samples must be nonempty");
  }
  // kolmogorov_sf is strictly decreasing; bisect for its inverse.
  double lo = 0.2, hi = 4.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_sf(mid) > level ? lo : hi) = mid;
  }
  const double c = 0.5 * (lo + hi);
  return c * std::sqrt(static_cast<double>(n + m) /
                       (static_cast<double>(n) * static_cast<double>(m)));
}

double ks_statistic(Eigen::ArrayXd a, Eigen::ArrayXd b) {
  if (a.size() == 0 || b.size() == 0) {
    throw std::invalid_argument("both samples must be nonempty");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  Eigen::Index i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

LineFit weighted_line_fit(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                          const Eigen::ArrayXd& var_y) {
  const Eigen::Index n = x.size();
  if (n < 3 || y.size() != n || var_y.size() != n) {
    throw std::invalid_argument(
        "line fit needs >= 3 points with matching variances");
  }
  const bool exact = (var_y <= 0.0).any();
  Eigen::ArrayXd w =
      exact ? Eigen::ArrayXd::Ones(n) : (1.0 / var_y).eval();

  // Normal equations of the 2-parameter weighted least squares problem.
  Eigen::Matrix2d m;
  const double sw = w.sum();
  const double swx = (w * x).sum();
  const double swxx = (w * x * x).sum();
  m << sw, swx, swx, swxx;
  Eigen::Vector2d rhs;
  rhs << (w * y).sum(), (w * x * y).sum();
  const Eigen::Matrix2d cov = m.inverse();
  const Eigen::Vector2d beta = cov * rhs;

  LineFit fit;
  fit.intercept = beta[0];
  fit.slope = beta[1];
  if (exact) {
    fit.intercept_se = 0.0;
    fit.slope_se = 0.0;
  } else {
    fit.intercept_se = std::sqrt(cov(0, 0));
    fit.slope_se = std::sqrt(cov(1, 1));
  }
  return fit;
}

}  // namespace plab
