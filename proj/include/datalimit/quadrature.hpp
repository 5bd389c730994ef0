#pragma once

// Numerical oracle for D_T = B * integral_0^T ln(1 + SNR(t)) dt.
//
// Finite horizons use global adaptive Gauss-Kronrod (7/15) bisection. The
// semi-infinite horizon is integrated in position up to a cut X* and the
// remainder is certified analytically: with d >= x and ln(1+y) <= y,
//
//   (B/v) integral_X^inf ln(1 + S (d0/d)^alpha) dx <= (B/v) S d0^alpha X^(1-alpha) / (alpha-1).
//
// X* is pushed out until that certificate is below tail_rel_tol of the
// running estimate; the certificate is added to the reported error.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "datalimit/errors.hpp"
#include "datalimit/link_model.hpp"
#include "datalimit/numerics.hpp"

namespace datalimit {

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  long max_subdivisions = 1'000'000;
  double tail_rel_tol = 1e-9;

  void validate() const {
    detail::require(abs_tol > 0.0 && rel_tol > 0.0 && tail_rel_tol > 0.0,
                    "quadrature tolerances must be > 0");
    detail::require(max_subdivisions >= 1, "quadrature max_subdivisions must be >= 1");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  long subdivisions = 0;
  /// Position where the semi-infinite integral was cut (0 for finite horizons).
  double truncation_point = 0.0;
};

inline const QuadratureResult& require_converged(const QuadratureResult& r) {
  if (!r.converged)
    throw ConvergenceError("quadrature did not converge within max_subdivisions (best estimate " +
                           std::to_string(r.value) + " nats, error estimate " +
                           std::to_string(r.error_estimate) + ")");
  return r;
}

namespace detail {

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
};

// Worst error first; ties broken by position so refinement order is fixed.
struct SegmentOrder {
  bool operator()(const Segment& l, const Segment& r) const {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;
  }
};

template <class F>
Segment gauss_kronrod_15(const F& f, double a, double b) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  // Gauss weights for xk[1], xk[3], xk[5], xk[7].
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = wk[7] * fc;
  double gauss = wg[3] * fc;
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * xk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += wk[j] * pair;
    if (j % 2 == 1) gauss += wg[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

/// Global adaptive integration of f over consecutive breakpoints.
/// The error estimate is the raw |K15 - G7| difference, which for smooth
/// integrands overstates the Kronrod error by many orders of magnitude.
template <class F>
QuadratureResult integrate_adaptive(const F& f, const std::vector<double>& breakpoints,
                                    const QuadratureSpec& spec) {
  spec.validate();
  QuadratureResult out;
  if (breakpoints.size() < 2) return out;

  std::priority_queue<Segment, std::vector<Segment>, SegmentOrder> queue;
  std::vector<Segment> frozen;  // segments too narrow to split
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    Segment s = gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]);
    total += s.value;
    total_err += s.error;
    queue.push(s);
  }

  auto target = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
  long splits = 0;
  while (!queue.empty() && total_err > target()) {
    if (splits >= spec.max_subdivisions) {
      out.converged = false;
      break;
    }
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      frozen.push_back(worst);
      continue;
    }
    const Segment left = gauss_kronrod_15(f, worst.a, mid);
    const Segment right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++splits;
  }

  // Re-sum in position order so the result does not depend on refinement order.
  while (!queue.empty()) {
    frozen.push_back(queue.top());
    queue.pop();
  }
  std::sort(frozen.begin(), frozen.end(),
            [](const Segment& l, const Segment& r) { return l.a < r.a; });
  CompensatedSum<double> value;
  CompensatedSum<double> error;
  for (const Segment& s : frozen) {
    value += s.value;
    error += s.error;
  }
  out.value = value.value();
  out.error_estimate = error.value();
  out.subdivisions = splits;
  if (out.error_estimate > std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value)))
    out.converged = false;
  return out;
}

// Breakpoints a, then origin + scale * 2^k inside (a, b), then b. The
// integrand decays as a power of position, so doubling intervals keep each
// Kronrod panel on a comparable scale.
inline std::vector<double> geometric_breakpoints(double a, double b, double origin, double scale) {
  std::vector<double> pts{a};
  if (scale > 0.0) {
    for (double step = scale; origin + step < b; step *= 2.0)
      if (origin + step > a) pts.push_back(origin + step);
  }
  pts.push_back(b);
  return pts;
}

inline double position_scale(const Scenario& sc) {
  return std::max({sc.profile().x0_m, sc.profile().z0_m, sc.budget().ref_distance_m});
}

}  // namespace detail

/// B * integral_0^T ln(1 + SNR(t)) dt, integrated in time.
inline QuadratureResult integrate_finite(const LinkBudget& budget, const MobilityProfile& profile,
                                         double horizon_s, const QuadratureSpec& spec = {}) {
  const Scenario sc(budget, profile);
  detail::require(std::isfinite(horizon_s) && horizon_s >= 0.0, "horizon T must be >= 0");
  spec.validate();
  if (horizon_s == 0.0) return {};

  const double bw = budget.bandwidth_hz;
  const double x0 = profile.x0_m;
  const double v = profile.speed_mps;
  auto integrand = [&](double t) { return bw * sc.log_gain_at_position(x0 + v * t); };
  // Time breakpoints where the position has moved by scale * 2^k.
  const auto pts = detail::geometric_breakpoints(0.0, horizon_s, 0.0, detail::position_scale(sc) / v);
  return detail::integrate_adaptive(integrand, pts, spec);
}

/// (B/v) * integral_{xa}^{xb} ln(1 + SNR(x)) dx, integrated in position.
inline QuadratureResult integrate_over_position(const Scenario& sc, double xa, double xb,
                                                const QuadratureSpec& spec = {}) {
  detail::require(xa >= sc.profile().x0_m && xb >= xa,
                  "position range must satisfy x0 <= xa <= xb");
  const double scale = sc.budget().bandwidth_hz / sc.profile().speed_mps;
  auto integrand = [&](double x) { return scale * sc.log_gain_at_position(x); };
  const auto pts = detail::geometric_breakpoints(xa, xb, 0.0, detail::position_scale(sc));
  return detail::integrate_adaptive(integrand, pts, spec);
}

/// Upper bound on (B/v) * integral_X^inf ln(1 + SNR) dx.
inline double tail_bound(const LinkBudget& budget, const MobilityProfile& profile, double x) {
  budget.validate();
  profile.validate();
  const double alpha = budget.path_loss_exp;
  detail::require(alpha > 1.0, "tail bound requires alpha > 1 (the tail diverges otherwise)");
  detail::require(x >= std::max(profile.x0_m, budget.ref_distance_m),
                  "tail bound requires X >= max(x0, d0)");
  const double d0 = budget.ref_distance_m;
  return budget.bandwidth_hz / profile.speed_mps * budget.transmit_snr() *
         std::pow(d0 / x, alpha) * x / (alpha - 1.0);
}

/// lim_{T->inf} D_T with a certified truncation error.
inline QuadratureResult integrate_infinite(const LinkBudget& budget, const MobilityProfile& profile,
                                           const QuadratureSpec& spec = {}) {
  const Scenario sc(budget, profile);
  spec.validate();
  const double alpha = budget.path_loss_exp;
  const double d0 = budget.ref_distance_m;
  // tail_bound(X) = k * X^(1 - alpha)
  const double k = budget.bandwidth_hz / profile.speed_mps * budget.transmit_snr() *
                   std::pow(d0, alpha) / (alpha - 1.0);

  QuadratureResult out;
  double lo = profile.x0_m;
  double hi = 2.0 * detail::position_scale(sc);
  CompensatedSum<double> value;
  CompensatedSum<double> error;
  for (int round = 0; round < 64; ++round) {
    const QuadratureResult piece = integrate_over_position(sc, lo, hi, spec);
    value += piece.value;
    error += piece.error_estimate;
    out.subdivisions += piece.subdivisions;
    out.converged = out.converged && piece.converged;

    const double estimate = value.value();
    const double tail = tail_bound(budget, profile, hi);
    if (tail <= spec.tail_rel_tol * estimate) {
      out.value = estimate;
      out.error_estimate = error.value() + tail;
      out.truncation_point = hi;
      return out;
    }
    // Aim for half the allowed tail so the next round normally finishes.
    double next = estimate > 0.0
                      ? std::pow(k / (0.5 * spec.tail_rel_tol * estimate), 1.0 / (alpha - 1.0))
                      : 2.0 * hi;
    if (!(next >= 2.0 * hi) || !std::isfinite(next)) next = 2.0 * hi;
    lo = hi;
    hi = next;
  }
  out.value = value.value();
  out.error_estimate = error.value() + tail_bound(budget, profile, hi);
  out.truncation_point = hi;
  out.converged = false;
  return out;
}

}  // namespace datalimit
