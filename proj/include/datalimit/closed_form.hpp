#pragma once

// Closed-form limits on total transmittable data  D = B * integral ln(1 + SNR(t)) dt
// for a terminal receding at constant speed.
//
//   d_inf_1            general alpha, z0 = 0, x0 = d0 (series form, needs S > 1)
//   d_inf_1_lower      same with the series dropped; a lower bound on d_inf_1
//   approx_error       d_inf_1 - d_inf_1_lower
//   error_envelope     upper bounds on approx_error
//   d_inf_2            alpha = 2, arbitrary z0 >= 0, x0 >= d0
//   d_t_closed_alpha2  alpha = 2, finite horizon T
//   d_inf_3            alpha = 2, z0 = 0, x0 = d0
//
// Every result is in nats.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "datalimit/errors.hpp"
#include "datalimit/link_model.hpp"
#include "datalimit/numerics.hpp"
#include "datalimit/units.hpp"

namespace datalimit {

struct SeriesOptions {
  int max_terms = 100;
  double target_abs_error = 1e-15;

  void validate() const {
    detail::require(max_terms >= 1, "series max_terms must be >= 1");
    detail::require(target_abs_error > 0.0, "series target_abs_error must be > 0");
  }
};

enum class FormulaTag { Thm1, Cor1Lower, Thm2, Cor2, ClosedFiniteAlpha2, Quadrature };

inline constexpr std::string_view formula_name(FormulaTag tag) {
  switch (tag) {
    case FormulaTag::Thm1: return "Thm1";
    case FormulaTag::Cor1Lower: return "Cor1Lower";
    case FormulaTag::Thm2: return "Thm2";
    case FormulaTag::Cor2: return "Cor2";
    case FormulaTag::ClosedFiniteAlpha2: return "ClosedFiniteAlpha2";
    case FormulaTag::Quadrature: return "Quadrature";
  }
  return "Thm1";
}

struct BoundResult {
  InfoQuantity amount;
  FormulaTag formula_tag = FormulaTag::Thm1;
  int series_terms_used = 0;
  /// Bound on |amount - exact| caused by truncating a series (or, for
  /// quadrature results, the certified error estimate).
  double truncation_error_nats = 0.0;

  double nats() const { return amount.value_nats(); }
};

struct SeriesValue {
  double value = 0.0;
  double remainder_bound = 0.0;
  int terms_used = 0;
};

/// sum_{n>=1} (-1)^{n+1} / (S^n (alpha n + 1)) for S > 1.
///
/// Terms alternate and shrink, so the first omitted term bounds the
/// remainder. Summation stops once the next term is <= target_abs_error or
/// after max_terms terms.
inline SeriesValue series_sum(double s, double alpha, const SeriesOptions& opts = {}) {
  opts.validate();
  detail::require(std::isfinite(s) && s > 1.0,
                  "series requires S > 1 (it diverges or is not alternating-decreasing otherwise)");
  detail::require(std::isfinite(alpha) && alpha > 0.0, "alpha must be finite and > 0");

  const double inv_s = 1.0 / s;
  CompensatedSum<double> acc;
  double power = inv_s;  // S^-n
  int n = 1;
  double next = power / (alpha + 1.0);
  for (;;) {
    acc += (n % 2 == 1) ? next : -next;
    power *= inv_s;
    next = power / (alpha * (n + 1) + 1.0);
    if (n >= opts.max_terms || next <= opts.target_abs_error) break;
    ++n;
  }
  return {acc.value(), next, n};
}

namespace detail {

inline void require_speed(double v) {
  require(std::isfinite(v) && v > 0.0, "speed must be finite and > 0");
}

inline void require_s_above_one(double s) {
  require(s > 1.0,
          "the series bound requires transmit SNR S = P G / sigma^2 > 1 "
          "(got S = " + std::to_string(s) + "); use the quadrature oracle instead");
}

inline void require_alpha_two(const LinkBudget& b) {
  require(b.path_loss_exp == 2.0, "this closed form requires path loss exponent alpha = 2");
}

inline double csc(double x) { return 1.0 / std::sin(x); }

}  // namespace detail

/// Bracketed factor C(S, alpha) of the general-alpha bound, so that
/// d_inf_1 = (B d0 / v) C. Also returns the series evaluation used.
inline double theorem1_factor(double s, double alpha, const SeriesOptions& opts,
                              SeriesValue* series_out = nullptr) {
  detail::require_s_above_one(s);
  const SeriesValue series = series_sum(s, alpha, opts);
  if (series_out) *series_out = series;
  const double pi = std::numbers::pi;
  return pi * std::pow(s, 1.0 / alpha) * detail::csc(pi / alpha) - std::log1p(s) +
         alpha * series.value - alpha;
}

inline BoundResult d_inf_1(const LinkBudget& budget, double v, const SeriesOptions& opts = {}) {
  budget.validate();
  detail::require_speed(v);
  const double s = budget.transmit_snr();
  const double alpha = budget.path_loss_exp;
  SeriesValue series;
  const double factor = theorem1_factor(s, alpha, opts, &series);
  const double pre = budget.bandwidth_hz * budget.ref_distance_m / v;
  return {InfoQuantity::nats(pre * factor), FormulaTag::Thm1, series.terms_used,
          pre * alpha * series.remainder_bound};
}

inline BoundResult d_inf_1_lower(const LinkBudget& budget, double v) {
  budget.validate();
  detail::require_speed(v);
  const double s = budget.transmit_snr();
  detail::require_s_above_one(s);
  const double alpha = budget.path_loss_exp;
  const double pi = std::numbers::pi;
  const double pre = budget.bandwidth_hz * budget.ref_distance_m / v;
  const double factor =
      pi * std::pow(s, 1.0 / alpha) * detail::csc(pi / alpha) - std::log1p(s) - alpha;
  // For large alpha and S close to 1 the expression dips below zero (e.g.
  // 2 pi - ln 2 - 6 at alpha = 6, S -> 1); zero is then the sharper lower bound.
  return {InfoQuantity::nats(std::max(0.0, pre * factor)), FormulaTag::Cor1Lower, 0, 0.0};
}

/// d_inf_1 - d_inf_1_lower, evaluated directly as (B d0 alpha / v) * series.
inline double approx_error(const LinkBudget& budget, double v, const SeriesOptions& opts = {}) {
  budget.validate();
  detail::require_speed(v);
  const double s = budget.transmit_snr();
  detail::require_s_above_one(s);
  const double alpha = budget.path_loss_exp;
  return budget.bandwidth_hz * budget.ref_distance_m * alpha / v *
         series_sum(s, alpha, opts).value;
}

struct ErrorEnvelope {
  double tight = 0.0;
  double loose = 0.0;
};

/// (B d0 alpha / v)(1 - pi/4); independent of S. At S = 1 it coincides
/// with the tight envelope, which is why it is accepted without an S check.
inline double loose_error_envelope(const LinkBudget& budget, double v) {
  budget.validate();
  detail::require_speed(v);
  return budget.bandwidth_hz * budget.ref_distance_m * budget.path_loss_exp / v *
         (1.0 - std::numbers::pi / 4.0);
}

inline ErrorEnvelope error_envelope(const LinkBudget& budget, double v) {
  budget.validate();
  detail::require_speed(v);
  const double s = budget.transmit_snr();
  detail::require_s_above_one(s);
  const double pre =
      budget.bandwidth_hz * budget.ref_distance_m * budget.path_loss_exp / v;
  // 1 - sqrt(S) atan(1/sqrt(S)) loses ~log10(S) digits to cancellation in
  // double; quad precision keeps full double accuracy up to S ~ 1e18.
  using Quad = boost::multiprecision::cpp_bin_float_quad;
  const Quad root_s = boost::multiprecision::sqrt(Quad(s));
  const Quad gap = Quad(1) - root_s * boost::multiprecision::atan(Quad(1) / root_s);
  return {pre * static_cast<double>(gap), loose_error_envelope(budget, v)};
}

/// x (ln(x^2 + a) - 2) + 2 sqrt(a) atan(x / sqrt(a)); d/dx = ln(x^2 + a).
inline double log_antiderivative(double x, double a) {
  detail::require(a > 0.0, "log_antiderivative requires a > 0");
  const double root_a = std::sqrt(a);
  return x * (std::log(x * x + a) - 2.0) + 2.0 * root_a * std::atan(x / root_a);
}

namespace detail {

// Antiderivative of ln((x^2 + eps) / (x^2 + z0^2)) with eps = z0^2 + S d0^2,
// i.e. log_antiderivative(x, eps) - log_antiderivative(x, z0^2) with the
// -2x terms cancelled and the logs merged so large x does not lose digits.
// z0 = 0 takes the limit z0 atan(x/z0) -> 0.
inline double alpha2_antiderivative(double x, double z0, double s_d0_sq) {
  const double eps = z0 * z0 + s_d0_sq;
  const double root_eps = std::sqrt(eps);
  double g = x * std::log1p(s_d0_sq / (x * x + z0 * z0)) + 2.0 * root_eps * std::atan(x / root_eps);
  if (z0 != 0.0) g -= 2.0 * z0 * std::atan(x / z0);
  return g;
}

}  // namespace detail

inline BoundResult d_inf_2(const LinkBudget& budget, const MobilityProfile& profile) {
  budget.validate();
  profile.validate();
  detail::require_alpha_two(budget);
  detail::require(profile.x0_m >= budget.ref_distance_m,
                  "the alpha = 2 infinite-horizon bound requires x0 >= d0");
  const double d0 = budget.ref_distance_m;
  const double s_d0_sq = budget.transmit_snr() * d0 * d0;
  const double z0 = profile.z0_m;
  const double x0 = profile.x0_m;
  const double eps = z0 * z0 + s_d0_sq;
  const double root_eps = std::sqrt(eps);
  const double pi = std::numbers::pi;

  double bracket = pi * (root_eps - z0) - x0 * std::log1p(s_d0_sq / (x0 * x0 + z0 * z0)) -
                   2.0 * root_eps * std::atan(x0 / root_eps);
  if (z0 != 0.0) bracket += 2.0 * z0 * std::atan(x0 / z0);
  return {InfoQuantity::nats(budget.bandwidth_hz / profile.speed_mps * bracket),
          FormulaTag::Thm2, 0, 0.0};
}

inline BoundResult d_t_closed_alpha2(const LinkBudget& budget, const MobilityProfile& profile,
                                     double horizon_s) {
  const Scenario scenario(budget, profile);
  detail::require_alpha_two(budget);
  detail::require(std::isfinite(horizon_s) && horizon_s >= 0.0, "horizon T must be >= 0");
  if (horizon_s == 0.0) return {InfoQuantity::nats(0.0), FormulaTag::ClosedFiniteAlpha2, 0, 0.0};

  const double d0 = budget.ref_distance_m;
  const double s_d0_sq = budget.transmit_snr() * d0 * d0;
  const double x0 = profile.x0_m;
  const double x_end = x0 + profile.speed_mps * horizon_s;
  const double diff = detail::alpha2_antiderivative(x_end, profile.z0_m, s_d0_sq) -
                      detail::alpha2_antiderivative(x0, profile.z0_m, s_d0_sq);
  // Rounding in the difference can dip a hair below zero for tiny T.
  const double nats = std::max(0.0, budget.bandwidth_hz / profile.speed_mps * diff);
  return {InfoQuantity::nats(nats), FormulaTag::ClosedFiniteAlpha2, 0, 0.0};
}

inline BoundResult d_inf_3(const LinkBudget& budget, double v) {
  budget.validate();
  detail::require_speed(v);
  detail::require_alpha_two(budget);
  const double s = budget.transmit_snr();
  const double root_s = std::sqrt(s);
  // pi/2 - atan(1/sqrt(S)) == atan(sqrt(S)) for S > 0, without the cancellation.
  const double bracket = 2.0 * root_s * std::atan(root_s) - std::log1p(s);
  return {InfoQuantity::nats(budget.bandwidth_hz * budget.ref_distance_m / v * bracket),
          FormulaTag::Cor2, 0, 0.0};
}

}  // namespace datalimit
