#pragma once

#include <Eigen/Dense>
#include <string>

#include "plab/montecarlo.hpp"
#include "plab/stable.hpp"

namespace plab {

// Distributional identities verified against simulation.  Each check returns
// one report; `statistic` is the measured quantity that was compared against
// `threshold`, and `detail` spells out the per-point numbers.
enum class CheckStatus { passed, failed, inconclusive, exploratory };

std::string to_string(CheckStatus status);

struct IdentityReport {
  std::string name;
  CheckStatus status = CheckStatus::inconclusive;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string detail;
  long n_effective = 0;
};

// The principal-value functional (beta = -1) evaluated at inverse local time
// t is Cauchy with characteristic function exp(-t pi |lambda|), whatever the
// driving index and skewness.  Compares the empirical characteristic
// function of xi on lambda in {1/4, 1/2, 1, 2} with that target; the check
// degrades to inconclusive when censoring removed over 20% of the paths.
IdentityReport check_fgb(const XiBatch& batch, double tolerance = 0.05);

// xi at a fixed inverse local time is symmetric even for skewed drivers.
// Two ingredients: a two-sample KS test of xi over even-index paths against
// -xi over odd-index paths at the 1% level, and a mean-zero probe of the
// bounded odd statistic sgn(xi) min(|xi|, 1).  With corrupt set, every xi is
// shifted by +0.2 first; the check must then fail (negative control).
IdentityReport check_symmetry_lemma(const XiBatch& batch, bool corrupt = false);

// The positive and negative accumulations xi_plus, xi_minus at inverse local
// time have the same one-sided law; KS compares xi_plus over even paths with
// xi_minus over odd paths.  The fraction of sign-mixed stretches between
// detected zero visits is reported as a discretization diagnostic.
IdentityReport check_xi_split_symmetry(const XiBatch& batch);

// For a driver with no positive jumps (chi = -1, or the Gaussian case),
//   P[ sup_{s <= 1} Z_s >= x ] = alpha P[ Z_1 >= x ]   for every x > 0.
// Compares both sides empirically at the given x values; when none are
// given, x is placed at empirical increment quantiles so each comparison
// sits in a well-populated region of the tail.
IdentityReport check_bingham_tail(const Eigen::ArrayXd& sup_samples,
                                  const Eigen::ArrayXd& increment_samples,
                                  const StableParams& p,
                                  const Eigen::ArrayXd& x_values = {});

// Pathwise ordering: the first passage of the functional above the level
// cannot precede the start of the zero-excursion in which the first
// above-level zero visit occurs.  Counts discrete violations beyond a 2 dt
// slack; more than 0.1% of crossed paths fails the check.
IdentityReport check_kp_inequality(const XiBatch& batch);

// P[A_t > 0] equals the positivity parameter of the driver for every t.
IdentityReport check_positivity_a1(const Eigen::ArrayXd& terminal_samples,
                                   const StableParams& p);

// Tail of the first above-level zero visit:
//   P[Theta > t] ~ K x^{gamma/(2H)} t^{-gamma/2},  gamma = (alpha-1)/alpha,
// with K the composed prefactor.  The exponent is always tested (within
// 0.05); the prefactor is tested within 25% when it is computable in closed
// form and reported as exploratory otherwise.
IdentityReport check_tauberian_tail(const XiBatch& batch,
                                    const StableParams& p);

}  // namespace plab
