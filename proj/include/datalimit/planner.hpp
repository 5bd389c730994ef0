#pragma once

// Design questions on top of the bounds: which (P, v) pairs deliver a data
// target M, how quickly a finite mission approaches the infinite-horizon
// limit, and grid sweeps over the model parameters.

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "datalimit/closed_form.hpp"
#include "datalimit/errors.hpp"
#include "datalimit/link_model.hpp"
#include "datalimit/quadrature.hpp"
#include "datalimit/units.hpp"

namespace datalimit {

// ---------------------------------------------------------------------------
// Admissible (P, v) pairs for the z0 = 0, x0 = d0 bound

struct PlanQuery {
  InfoQuantity target;
  std::optional<double> fixed_power_w;
  std::optional<double> fixed_speed_mps;
  /// B, sigma^2, d0, G and alpha are taken from here; its tx_power_w is ignored.
  LinkBudget budget;

  void validate() const {
    detail::require(fixed_power_w.has_value() != fixed_speed_mps.has_value(),
                    "exactly one of fixed power / fixed speed must be set");
    detail::require(target.value_nats() > 0.0, "data target must be > 0");
  }
};

/// v = B d0 C(S, alpha) / M. Exact, since v only enters the bound as 1/v.
inline double solve_speed(const PlanQuery& query, const SeriesOptions& opts = {}) {
  query.validate();
  detail::require(query.fixed_power_w.has_value(), "solve_speed needs a fixed power");
  LinkBudget b = query.budget;
  b.tx_power_w = *query.fixed_power_w;
  b.validate();
  const double factor = theorem1_factor(b.transmit_snr(), b.path_loss_exp, opts);
  return b.bandwidth_hz * b.ref_distance_m * factor / query.target.value_nats();
}

/// lim_{S->1+} C(S, alpha), evaluated with the quadrature oracle at S = 1
/// (the integrand is continuous in S).
inline double theorem1_factor_infimum(const LinkBudget& budget_template,
                                      const QuadratureSpec& qspec = {}) {
  const LinkBudget b = budget_template.with_transmit_snr(1.0);
  const MobilityProfile p{b.ref_distance_m, 0.0, 1.0};
  const QuadratureResult r = require_converged(integrate_infinite(b, p, qspec));
  return r.value / (b.bandwidth_hz * b.ref_distance_m);
}

/// Root-finds S with d_inf_1(S, alpha, v) = M and returns P = S sigma^2 / G.
/// C(S, alpha) is strictly increasing in S > 1, so a bracket pins the root.
inline double solve_power(const PlanQuery& query, const SeriesOptions& opts = {},
                          const QuadratureSpec& qspec = {}) {
  query.validate();
  detail::require(query.fixed_speed_mps.has_value(), "solve_power needs a fixed speed");
  const double v = *query.fixed_speed_mps;
  detail::require_speed(v);
  const LinkBudget& tmpl = query.budget;
  tmpl.with_transmit_snr(2.0).validate();

  const double alpha = tmpl.path_loss_exp;
  const double wanted = query.target.value_nats() * v / (tmpl.bandwidth_hz * tmpl.ref_distance_m);

  const double infimum = theorem1_factor_infimum(tmpl, qspec);
  if (wanted <= infimum)
    throw InfeasibleError("target " + std::to_string(query.target.value_nats()) +
                          " nats is at or below the S -> 1+ infimum " +
                          std::to_string(infimum * tmpl.bandwidth_hz * tmpl.ref_distance_m / v) +
                          " nats; infeasible under the S > 1 series bound");

  auto f = [&](double s) { return theorem1_factor(s, alpha, opts) - wanted; };

  double lo = 2.0;
  double hi = 2.0;
  double f_lo = f(lo);
  double f_hi = f_lo;
  if (f_lo > 0.0) {
    // Walk down towards S = 1.
    double gap = 1.0;
    for (int i = 0; i < 48 && f_lo > 0.0; ++i) {
      hi = lo;
      f_hi = f_lo;
      gap *= 0.5;
      lo = 1.0 + gap;
      f_lo = f(lo);
    }
    if (f_lo > 0.0)
      throw ConvergenceError("could not bracket the target power near S = 1");
  } else {
    for (int i = 0; i < 400 && f_hi < 0.0; ++i) {
      lo = hi;
      f_lo = f_hi;
      hi *= 10.0;
      if (!std::isfinite(hi)) break;
      f_hi = f(hi);
    }
    if (!(f_hi >= 0.0))
      throw ConvergenceError("could not bracket the target power: required S exceeds double range");
  }

  double s_root = 0.0;
  if (f_lo == 0.0) {
    s_root = lo;
  } else if (f_hi == 0.0) {
    s_root = hi;
  } else {
    std::uintmax_t max_iter = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(44), max_iter);
    if (max_iter >= 200) throw ConvergenceError("power root-finding did not converge");
    s_root = 0.5 * (bracket.first + bracket.second);
  }
  return s_root * tmpl.noise_power_w / tmpl.antenna_gain;
}

// ---------------------------------------------------------------------------
// Bound evaluation by formula

enum class Formula {
  Auto,         // best available closed form, quadrature otherwise
  Thm1,         // d_inf_1
  Thm1Lower,    // d_inf_1_lower
  ApproxError,  // d_inf_1 - d_inf_1_lower
  Thm2,         // d_inf_2
  Cor2,         // d_inf_3
  FiniteAlpha2, // d_t_closed_alpha2 over the horizon
  Quadrature,   // integrate_infinite
  QuadratureFinite,
};

inline std::optional<Formula> parse_formula(std::string_view s) {
  if (s == "auto") return Formula::Auto;
  if (s == "thm1") return Formula::Thm1;
  if (s == "thm1-lower") return Formula::Thm1Lower;
  if (s == "error") return Formula::ApproxError;
  if (s == "thm2") return Formula::Thm2;
  if (s == "cor2") return Formula::Cor2;
  if (s == "finite") return Formula::FiniteAlpha2;
  if (s == "quadrature") return Formula::Quadrature;
  if (s == "quadrature-finite") return Formula::QuadratureFinite;
  return std::nullopt;
}

struct EvalOptions {
  SeriesOptions series;
  QuadratureSpec quadrature;
  double horizon_s = 3600.0;
};

namespace detail {

inline BoundResult from_quadrature(const QuadratureResult& r) {
  require_converged(r);
  return {InfoQuantity::nats(std::max(0.0, r.value)), FormulaTag::Quadrature, 0, r.error_estimate};
}

inline bool is_theorem1_geometry(const LinkBudget& b, const MobilityProfile& p) {
  return p.z0_m == 0.0 && p.x0_m == b.ref_distance_m;
}

}  // namespace detail

/// Closed form for the infinite horizon when one applies, else quadrature.
inline BoundResult infinite_horizon(const LinkBudget& b, const MobilityProfile& p,
                                    const EvalOptions& opts = {}) {
  const Scenario sc(b, p);
  if (b.path_loss_exp == 2.0 && p.x0_m >= b.ref_distance_m) return d_inf_2(b, p);
  if (detail::is_theorem1_geometry(b, p) && b.transmit_snr() > 1.0)
    return d_inf_1(b, p.speed_mps, opts.series);
  return detail::from_quadrature(integrate_infinite(b, p, opts.quadrature));
}

/// D_T: closed form for alpha = 2, quadrature otherwise.
inline BoundResult finite_horizon(const LinkBudget& b, const MobilityProfile& p, double horizon_s,
                                  const EvalOptions& opts = {}) {
  if (b.path_loss_exp == 2.0) return d_t_closed_alpha2(b, p, horizon_s);
  return detail::from_quadrature(integrate_finite(b, p, horizon_s, opts.quadrature));
}

/// Evaluates one formula. Hypotheses the formula needs (S > 1, alpha = 2,
/// z0 = 0 and x0 = d0 for the 1-D bounds) are enforced by the callee;
/// the 1-D bounds take only v from the profile.
inline BoundResult evaluate(Formula formula, const LinkBudget& b, const MobilityProfile& p,
                            const EvalOptions& opts = {}) {
  auto require_1d = [&] {
    detail::require(detail::is_theorem1_geometry(b, p),
                    "this bound assumes z0 = 0 and x0 = d0");
  };
  switch (formula) {
    case Formula::Auto:
      if (detail::is_theorem1_geometry(b, p)) return d_inf_1(b, p.speed_mps, opts.series);
      return infinite_horizon(b, p, opts);
    case Formula::Thm1:
      require_1d();
      return d_inf_1(b, p.speed_mps, opts.series);
    case Formula::Thm1Lower:
      require_1d();
      return d_inf_1_lower(b, p.speed_mps);
    case Formula::ApproxError: {
      require_1d();
      const BoundResult full = d_inf_1(b, p.speed_mps, opts.series);
      return {InfoQuantity::nats(approx_error(b, p.speed_mps, opts.series)), FormulaTag::Thm1,
              full.series_terms_used, full.truncation_error_nats};
    }
    case Formula::Thm2:
      return d_inf_2(b, p);
    case Formula::Cor2:
      require_1d();
      return d_inf_3(b, p.speed_mps);
    case Formula::FiniteAlpha2:
      return d_t_closed_alpha2(b, p, opts.horizon_s);
    case Formula::Quadrature:
      return detail::from_quadrature(integrate_infinite(b, p, opts.quadrature));
    case Formula::QuadratureFinite:
      return detail::from_quadrature(integrate_finite(b, p, opts.horizon_s, opts.quadrature));
  }
  throw DomainError("unknown formula");
}

// ---------------------------------------------------------------------------
// Finite-time fraction of the infinite-horizon bound

struct FiniteTimePoint {
  double horizon_s = 0.0;
  double data_nats = 0.0;
  double ratio = 0.0;
};

inline std::vector<FiniteTimePoint> finite_time_curve(const LinkBudget& b, const MobilityProfile& p,
                                                      const std::vector<double>& times,
                                                      const EvalOptions& opts = {}) {
  const Scenario sc(b, p);
  for (std::size_t i = 0; i < times.size(); ++i) {
    detail::require(times[i] >= 0.0, "times must be >= 0");
    detail::require(i == 0 || times[i] >= times[i - 1], "times must be ascending");
  }
  const double limit = infinite_horizon(b, p, opts).nats();
  std::vector<FiniteTimePoint> out;
  out.reserve(times.size());
  for (double t : times) {
    const double dt = finite_horizon(b, p, t, opts).nats();
    out.push_back({t, dt, std::clamp(dt / limit, 0.0, 1.0)});
  }
  return out;
}

/// Smallest horizon T with D_T >= ratio * D_inf (monotone bisection on T).
inline double time_to_ratio(const LinkBudget& b, const MobilityProfile& p, double ratio,
                            const EvalOptions& opts = {}) {
  detail::require(ratio >= 0.0 && ratio < 1.0, "ratio must lie in [0, 1)");
  if (ratio == 0.0) return 0.0;
  const double limit = infinite_horizon(b, p, opts).nats();
  auto frac = [&](double t) { return finite_horizon(b, p, t, opts).nats() / limit; };

  double lo = 0.0;
  double hi = std::max(b.ref_distance_m, p.x0_m) / p.speed_mps;
  for (int i = 0; frac(hi) < ratio; ++i) {
    if (i > 200) throw ConvergenceError("horizon for the requested ratio is out of range");
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (frac(mid) < ratio ? lo : hi) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class Param { Power, Speed, Alpha, Z0, X0, Snr, Bandwidth, Horizon };

inline constexpr std::string_view param_name(Param p) {
  switch (p) {
    case Param::Power: return "P";
    case Param::Speed: return "v";
    case Param::Alpha: return "alpha";
    case Param::Z0: return "z0";
    case Param::X0: return "x0";
    case Param::Snr: return "S";
    case Param::Bandwidth: return "B";
    case Param::Horizon: return "T";
  }
  return "?";
}

inline std::optional<Param> parse_param(std::string_view s) {
  for (Param p : {Param::Power, Param::Speed, Param::Alpha, Param::Z0, Param::X0, Param::Snr,
                  Param::Bandwidth, Param::Horizon})
    if (s == param_name(p)) return p;
  if (s == "power") return Param::Power;
  if (s == "speed") return Param::Speed;
  return std::nullopt;
}

enum class Spacing { Linear, Log };

struct Axis {
  Param param = Param::Speed;
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  Spacing spacing = Spacing::Linear;

  void validate() const {
    detail::require(count >= 1, "axis point count must be >= 1");
    detail::require(std::isfinite(min) && std::isfinite(max), "axis bounds must be finite");
    // A one-point axis evaluates at min; max is ignored.
    if (count > 1) detail::require(min < max, "axis needs min < max");
    if (spacing == Spacing::Log) detail::require(min > 0.0, "log-spaced axis needs min > 0");
  }

  std::vector<double> points() const {
    validate();
    std::vector<double> pts(static_cast<std::size_t>(count));
    if (count == 1) {
      pts[0] = min;
      return pts;
    }
    for (int i = 0; i < count; ++i) {
      const double f = static_cast<double>(i) / (count - 1);
      if (spacing == Spacing::Log)
        pts[i] = std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
      else
        pts[i] = min + f * (max - min);
    }
    pts.front() = min;
    pts.back() = max;
    return pts;
  }
};

struct SweepSpec {
  std::vector<Axis> axes;
  Formula formula = Formula::Auto;
  InfoUnit unit = InfoUnit::Nats;
  LinkBudget budget;
  MobilityProfile profile;
  EvalOptions eval;

  void validate() const {
    detail::require(!axes.empty(), "sweep needs at least one axis");
    for (const Axis& a : axes) a.validate();
  }
};

enum class RowStatus { Ok, Fallback, Invalid };

inline constexpr std::string_view status_name(RowStatus s) {
  switch (s) {
    case RowStatus::Ok: return "ok";
    case RowStatus::Fallback: return "fallback";
    case RowStatus::Invalid: return "invalid";
  }
  return "ok";
}

struct SweepRow {
  std::vector<double> coords;  // one per axis, in declaration order
  double value = 0.0;          // in the sweep's output unit; NaN when invalid
  std::string formula;         // FormulaTag name, or "Invalid"
  double truncation_error = 0.0;  // same unit as value
  RowStatus status = RowStatus::Ok;
};

namespace detail {

inline void apply(Param p, double x, LinkBudget& b, MobilityProfile& m, EvalOptions& e) {
  switch (p) {
    case Param::Power: b.tx_power_w = x; break;
    case Param::Speed: m.speed_mps = x; break;
    case Param::Alpha: b.path_loss_exp = x; break;
    case Param::Z0: m.z0_m = x; break;
    case Param::X0: m.x0_m = x; break;
    case Param::Snr: b = b.with_transmit_snr(x); break;
    case Param::Bandwidth: b.bandwidth_hz = x; break;
    case Param::Horizon: e.horizon_s = x; break;
  }
}

inline bool wants_series(Formula f) {
  return f == Formula::Auto || f == Formula::Thm1;
}

}  // namespace detail

/// Evaluates one grid point. S <= 1 under a series bound falls back to the
/// quadrature oracle; any other violated hypothesis yields an Invalid row.
inline SweepRow sweep_point(const SweepSpec& spec, const std::vector<double>& coords) {
  LinkBudget b = spec.budget;
  MobilityProfile m = spec.profile;
  EvalOptions e = spec.eval;
  for (std::size_t i = 0; i < spec.axes.size(); ++i) detail::apply(spec.axes[i].param, coords[i], b, m, e);

  SweepRow row;
  row.coords = coords;
  const double per_unit = nats_per(spec.unit);
  auto fill = [&](const BoundResult& r, RowStatus st) {
    row.value = r.amount.in(spec.unit);
    row.truncation_error = r.truncation_error_nats / per_unit;
    row.formula = std::string(formula_name(r.formula_tag));
    row.status = st;
  };
  try {
    if (detail::wants_series(spec.formula) && b.transmit_snr() <= 1.0) {
      fill(detail::from_quadrature(integrate_infinite(b, m, e.quadrature)), RowStatus::Fallback);
    } else {
      fill(evaluate(spec.formula, b, m, e), RowStatus::Ok);
    }
  } catch (const DomainError&) {
    row.value = std::numeric_limits<double>::quiet_NaN();
    row.truncation_error = std::numeric_limits<double>::quiet_NaN();
    row.formula = "Invalid";
    row.status = RowStatus::Invalid;
  } catch (const ConvergenceError&) {
    row.value = std::numeric_limits<double>::quiet_NaN();
    row.truncation_error = std::numeric_limits<double>::quiet_NaN();
    row.formula = "Invalid";
    row.status = RowStatus::Invalid;
  }
  return row;
}

/// Row-major over the axes as declared (first axis outermost).
inline std::vector<SweepRow> sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<std::vector<double>> grids;
  std::size_t total = 1;
  for (const Axis& a : spec.axes) {
    grids.push_back(a.points());
    total *= grids.back().size();
  }
  std::vector<SweepRow> rows;
  rows.reserve(total);
  std::vector<std::size_t> idx(grids.size(), 0);
  std::vector<double> coords(grids.size());
  for (std::size_t n = 0; n < total; ++n) {
    for (std::size_t i = 0; i < grids.size(); ++i) coords[i] = grids[i][idx[i]];
    rows.push_back(sweep_point(spec, coords));
    for (std::size_t i = grids.size(); i-- > 0;) {
      if (++idx[i] < grids[i].size()) break;
      idx[i] = 0;
    }
  }
  return rows;
}

/// The admissible set {(P, v) | d_inf_1 = M} sampled as v(P) over `powers`.
/// Entries with S <= 1 are NaN.
inline std::vector<std::pair<double, double>> admissible_curve(const LinkBudget& budget_template,
                                                               InfoQuantity target,
                                                               const std::vector<double>& powers,
                                                               const SeriesOptions& opts = {}) {
  std::vector<std::pair<double, double>> out;
  out.reserve(powers.size());
  for (double p : powers) {
    PlanQuery q{target, p, std::nullopt, budget_template};
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
      v = solve_speed(q, opts);
    } catch (const DomainError&) {
    }
    out.emplace_back(p, v);
  }
  return out;
}

}  // namespace datalimit
