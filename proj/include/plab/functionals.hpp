#pragma once

#include <Eigen/Dense>

#include "plab/stable.hpp"

namespace plab {

// Parameters of the homogeneous additive functional
//
//   A_t = int_0^t |Z_s|^beta sgn(Z_s) ds,
//
// which is (1 + beta/alpha)-self-similar.  For beta <= -1 the integrand is
// not locally integrable against the occupation density and the integral
// only exists as a symmetric principal value, so a truncation radius
// pv_epsilon > 0 is mandatory there (the Riemann sum drops |Z| <= epsilon).
struct FunctionalParams {
  double beta;
  double pv_epsilon;  // 0 means no truncation
  double alpha;       // copied from the driving process

  FunctionalParams(const StableParams& p, double beta_,
                   double pv_epsilon_ = 0.0);

  // index of the stable law of A at inverse local time
  double delta() const { return (alpha - 1.0) / (alpha + beta); }
  // self-similarity exponent of A
  double hurst() const { return 1.0 + beta / alpha; }
};

// Left-endpoint Riemann accumulation of A on the path's grid.  values[j]
// integrates over [0, t_j), so values[0] = 0 and values = positive - negative
// holds exactly in floating point (each entry is stored as that difference).
struct FunctionalSeries {
  Eigen::ArrayXd times;
  Eigen::ArrayXd values;
  Eigen::ArrayXd positive;  // contribution of {Z > 0}
  Eigen::ArrayXd negative;  // contribution of {Z < 0}, sign dropped
};

FunctionalSeries homogeneous_functional(const PathGrid& grid,
                                        const FunctionalParams& f);

// Truncation radius matched to the per-step displacement scale of the grid.
double default_pv_epsilon(const StableParams& p, double horizon,
                          Eigen::Index n_steps);

// First grid index where the series strictly exceeds the level.  The true
// crossing lies inside (t_lower, t_upper]; censored means the whole skeleton
// stayed at or below the level.
struct PassageTime {
  bool crossed;
  double t_lower;
  double t_upper;
  Eigen::Index index_upper;
};

PassageTime first_passage(const Eigen::ArrayXd& times,
                          const Eigen::ArrayXd& values, double level);

Eigen::ArrayXd running_sup(const Eigen::ArrayXd& values);

// Box-kernel occupation estimate of the local time at level zero:
//   L(t_j, 0) ~= dt/(2h) * #{k < j : |Z_k| < h}.
// Narrow bandwidths lower the kernel bias but raise counting noise; the
// default h = 2 dt^{1/alpha} kappa^{1/alpha} tracks the one-step displacement.
struct LocalTimeCurve {
  Eigen::ArrayXd times;
  Eigen::ArrayXd values;
  double bandwidth;
};

LocalTimeCurve local_time_zero(const PathGrid& grid, double bandwidth);

double default_bandwidth(const StableParams& p, double horizon,
                         Eigen::Index n_steps);

// Right-continuous inverse of the local time: first grid time with L > level.
struct InverseLocalTime {
  bool censored;
  double tau;
  Eigen::Index index;
};

InverseLocalTime inverse_local_time(const LocalTimeCurve& curve, double level);

// xi_level = A_(tau_level), split into the one-sided accumulations.
// xi = xi_plus - xi_minus exactly, by construction of the series.
struct XiValue {
  bool censored;
  double tau;
  double xi;
  double xi_plus;
  double xi_minus;
};

XiValue xi_process(const FunctionalSeries& series, const LocalTimeCurve& curve,
                   double level);

}  // namespace plab
