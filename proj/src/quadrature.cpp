#include "plab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "plab/errors.hpp"

namespace plab {

namespace {

// Gauss-Kronrod 15(7) nodes and weights on [-1, 1] (QUADPACK constants).
// Odd-indexed Kronrod nodes are the embedded 7-point Gauss rule.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double integral;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment evaluate(const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double ik = 0.0;
  double ig = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double offset = half * kNodes[i];
    const double fsum =
        (i == 7) ? f(mid) : f(mid - offset) + f(mid + offset);
    ik += kWeightsK[i] * fsum;
    if (i % 2 == 1) ig += kWeightsG[i / 2] * fsum;
  }
  ik *= half;
  ig *= half;
  return {a, b, ik, std::abs(ik - ig)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol, double rel_tol,
                           int max_segments) {
  std::priority_queue<Segment> queue;
  queue.push(evaluate(f, a, b));
  double total = queue.top().integral;
  double total_error = queue.top().error;
  int segments = 1;
  while (total_error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (segments >= max_segments) {
      throw NumericError("adaptive quadrature did not converge: " +
                         std::to_string(segments) + " segments, error " +
                         std::to_string(total_error));
    }
    const Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = evaluate(f, worst.a, mid);
    const Segment right = evaluate(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++segments;
  }
  return {total, total_error, segments};
}

double sin_power_integral(double s) {
  if (!(s > -1.0) || !(s < 1.0) || s == 0.0) {
    throw NumericError("sin_power_integral needs s in (-1,1) \\ {0}");
  }

  // [0,1]: termwise integration of the sine series, eta^(s-1) sin(eta) =
  // sum (-1)^k eta^(s+2k) / (2k+1)!.  Factorial growth kills the terms
  // within a dozen steps.
  double head = 0.0;
  double factorial = 1.0;  // (2k+1)!
  for (int k = 0; k < 24; ++k) {
    if (k > 0) factorial *= (2.0 * k) * (2.0 * k + 1.0);
    const double term = ((k % 2 == 0) ? 1.0 : -1.0) /
                        (factorial * (s + 2.0 * k + 1.0));
    head += term;
    if (std::abs(term) < 1e-18) break;
  }

  const double cutoff = 40.0 * std::numbers::pi;
  const double middle =
      integrate([s](double eta) { return std::pow(eta, s - 1.0) * std::sin(eta); },
                1.0, cutoff, 1e-13, 1e-13)
          .value;

  // Remainder beyond the cutoff A: repeated integration by parts gives
  //   T(p) = A^(p-1) cos A - (p-1) A^(p-2) sin A - (p-1)(p-2) T(p-2),
  // an asymptotic series whose terms shrink by roughly (2k)^2 / A^2.
  const double a = cutoff;
  const double cos_a = std::cos(a);
  const double sin_a = std::sin(a);
  double tail = 0.0;
  double coeff = 1.0;
  double p = s;
  for (int k = 0; k < 14; ++k) {
    const double term = coeff * (std::pow(a, p - 1.0) * cos_a -
                                 (p - 1.0) * std::pow(a, p - 2.0) * sin_a);
    tail += term;
    if (std::abs(coeff * std::pow(a, p - 1.0)) < 1e-18) break;
    coeff *= -(p - 1.0) * (p - 2.0);
    p -= 2.0;
  }

  return head + middle + tail;
}

}  // namespace plab
