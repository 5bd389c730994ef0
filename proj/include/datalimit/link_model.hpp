#pragma once

// Line-of-sight channel between a fixed terminal at the origin and a terminal
// receding along x(t) = x0 + v t at constant offset z0:
//
//   d(t)   = sqrt(z0^2 + (x0 + v t)^2)
//   SNR(t) = S (d0 / d(t))^alpha,   S = P G / sigma^2
//
// The model is only meaningful for d >= d0.

#include <cmath>
#include <string>

#include "datalimit/errors.hpp"

namespace datalimit {

/// Static radio parameters. Defaults are the reference scenario
/// (B = 100 kHz, sigma^2 = 1e-8 W, d0 = 1 m, G = 1, P = 1 W, alpha = 2).
struct LinkBudget {
  double bandwidth_hz = 1.0e5;
  double noise_power_w = 1.0e-8;
  double ref_distance_m = 1.0;
  double antenna_gain = 1.0;
  double tx_power_w = 1.0;
  double path_loss_exp = 2.0;

  void validate() const {
    auto positive = [](double x, const char* name) {
      detail::require(std::isfinite(x) && x > 0.0,
                      std::string(name) + " must be finite and > 0");
    };
    positive(bandwidth_hz, "bandwidth");
    positive(noise_power_w, "noise power");
    positive(ref_distance_m, "reference distance");
    positive(antenna_gain, "antenna gain");
    positive(tx_power_w, "transmit power");
    detail::require(std::isfinite(path_loss_exp) && path_loss_exp >= 2.0,
                    "path loss exponent must be finite and >= 2");
    const double s = tx_power_w * antenna_gain / noise_power_w;
    detail::require(std::isfinite(s) && s > 0.0, "transmit SNR must be finite and > 0");
  }

  /// S = P G / sigma^2.
  double transmit_snr() const { return tx_power_w * antenna_gain / noise_power_w; }

  /// Budget with the transmit power chosen so that P G / sigma^2 == s.
  LinkBudget with_transmit_snr(double s) const {
    LinkBudget out = *this;
    out.tx_power_w = s * noise_power_w / antenna_gain;
    return out;
  }
};

inline double transmit_snr(const LinkBudget& budget) {
  budget.validate();
  return budget.transmit_snr();
}

/// Trajectory of the receding terminal.
struct MobilityProfile {
  double x0_m = 1.0;
  double z0_m = 0.0;
  double speed_mps = 5.0;

  void validate() const {
    detail::require(std::isfinite(x0_m) && x0_m >= 0.0, "x0 must be finite and >= 0");
    detail::require(std::isfinite(z0_m) && z0_m >= 0.0, "z0 must be finite and >= 0");
    detail::require(std::isfinite(speed_mps) && speed_mps > 0.0,
                    "speed must be finite and > 0");
  }

  double initial_distance() const { return std::hypot(x0_m, z0_m); }
};

inline double distance(const MobilityProfile& profile, double t) {
  detail::require(t >= 0.0, "time must be >= 0");
  return std::hypot(profile.z0_m, profile.x0_m + profile.speed_mps * t);
}

/// S (d0/d(t))^alpha. Throws if the terminal is inside the reference distance.
inline double snr(const LinkBudget& budget, const MobilityProfile& profile, double t) {
  const double d = distance(profile, t);
  detail::require(d >= budget.ref_distance_m,
                  "distance below reference distance d0; path-loss model invalid");
  return budget.transmit_snr() * std::pow(budget.ref_distance_m / d, budget.path_loss_exp);
}

/// A validated (budget, profile) pair. Since d(t) is non-decreasing for
/// x0 >= 0, checking d(0) >= d0 covers every t >= 0.
class Scenario {
 public:
  Scenario(const LinkBudget& budget, const MobilityProfile& profile)
      : budget_(budget), profile_(profile) {
    budget_.validate();
    profile_.validate();
    detail::require(profile_.initial_distance() >= budget_.ref_distance_m,
                    "initial distance sqrt(x0^2 + z0^2) must be >= d0");
  }

  const LinkBudget& budget() const { return budget_; }
  const MobilityProfile& profile() const { return profile_; }

  double transmit_snr() const { return budget_.transmit_snr(); }
  double distance(double t) const { return datalimit::distance(profile_, t); }
  double snr(double t) const { return datalimit::snr(budget_, profile_, t); }

  /// ln(1 + SNR) at lateral position x (instantaneous rate per unit bandwidth).
  double log_gain_at_position(double x) const {
    const double d2 = profile_.z0_m * profile_.z0_m + x * x;
    const double d0 = budget_.ref_distance_m;
    const double ratio = budget_.path_loss_exp == 2.0
                             ? d0 * d0 / d2
                             : std::pow(d0 * d0 / d2, 0.5 * budget_.path_loss_exp);
    return std::log1p(budget_.transmit_snr() * ratio);
  }

 private:
  LinkBudget budget_;
  MobilityProfile profile_;
};

}  // namespace datalimit
