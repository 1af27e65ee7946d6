#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "accelev/common.hpp"
#include "accelev/scenario.hpp"

namespace accelev {

// Initial condition of the cut-in: leading-vehicle speed v (m/s), range rate
// Rdot (m/s, negative = closing), inverse range Rinv (1/m).
struct LaneChangeState {
  double v = 0.0;
  double r_dot = 0.0;
  double r_inv = 0.0;
};

// Longitudinal controller of the following vehicle: headway-feedback cruise
// control with acceleration clamping, overridden by emergency braking when
// the time-to-collision drops to ttc_aeb.
struct AvControllerParams {
  double time_headway = 1.4;  // s
  double range_offset = 2.0;  // m
  double gain_range = 0.23;   // 1/s^2
  double gain_rate = 0.07;    // 1/s
  double accel_min = -3.0;    // m/s^2
  double accel_max = 3.0;     // m/s^2
  double ttc_aeb = 1.0;       // s
  double brake_decel = -6.0;  // m/s^2
  double dt = 0.05;           // s
  double horizon = 15.0;      // s

  void validate() const {
    require(dt > 0.0, "controller: dt must be positive");
    require(horizon >= dt, "controller: horizon shorter than dt");
    require(accel_min < 0.0 && accel_max > 0.0, "controller: bad accel bounds");
    require(brake_decel < accel_min, "controller: AEB must brake harder than ACC");
    require(ttc_aeb > 0.0, "controller: ttc_aeb must be positive");
  }
};

// Fixed-step simulation of the cut-in. The leading vehicle holds speed v;
// the follower starts at v - Rdot and runs ACC until the AEB threshold
// trips. Returns 1 iff the range reaches zero within the horizon.
inline int simulate_lane_change(const LaneChangeState& x,
                                const AvControllerParams& p) {
  double range = 1.0 / x.r_inv;
  double v_av = x.v - x.r_dot;
  if (range <= 0.0) return 1;
  const int steps = static_cast<int>(std::ceil(p.horizon / p.dt));
  for (int s = 0; s < steps; ++s) {
    const double r_dot = x.v - v_av;
    const double ttc = r_dot < 0.0 ? range / (-r_dot)
                                   : std::numeric_limits<double>::infinity();
    double accel;
    if (ttc <= p.ttc_aeb) {
      accel = p.brake_decel;
    } else {
      const double gap_error = range - p.time_headway * v_av - p.range_offset;
      accel = std::clamp(p.gain_range * gap_error + p.gain_rate * r_dot,
                         p.accel_min, p.accel_max);
    }
    range += r_dot * p.dt;
    v_av = std::max(0.0, v_av + accel * p.dt);
    if (range <= 0.0) return 1;
  }
  return 0;
}

struct LaneChangeConfig {
  GaussianMixture distribution;
  Box domain;
  AvControllerParams controller;
};

inline Scenario lane_change_scenario(const LaneChangeConfig& cfg) {
  require(cfg.distribution.dim() == 3, "lane change: distribution must be 3-D");
  require(cfg.domain.valid() && cfg.domain.dim() == 3,
          "lane change: domain must be a valid 3-D box");
  require(cfg.domain.lower[2] > 0.0,
          "lane change: inverse range must stay positive on the domain");
  cfg.controller.validate();
  AvControllerParams params = cfg.controller;
  return Scenario{"lane_change", cfg.domain, cfg.distribution,
                  [params](const Vector& x) {
                    return simulate_lane_change(
                        LaneChangeState{x[0], x[1], x[2]}, params);
                  }};
}

// Shipped synthetic environment statistics. The component placement was
// calibrated once with long pilot importance-sampling runs so that the
// collision probability under f lands in the 1e-7..1e-5 band; see
// configs/lane_change_default.json for the same values in file form.
inline LaneChangeConfig default_lane_change_config() {
  Vector lo(3), hi(3);
  lo << 5.0, -25.0, 0.02;   // v >= 5 m/s, Rdot >= -25 m/s, R <= 50 m
  hi << 35.0, 5.0, 0.5;     // v <= 35 m/s, Rdot <= 5 m/s, R >= 2 m

  Vector m1(3), m2(3);
  m1 << 17.0, -0.8, 0.045;
  m2 << 26.0, -1.8, 0.030;
  Matrix c1(3, 3), c2(3, 3);
  c1 << 9.0, 0.0, 0.0,
        0.0, 1.44, 0.0,
        0.0, 0.0, 1.6e-4;
  c2 << 6.25, 0.0, 0.0,
        0.0, 2.25, 0.0,
        0.0, 0.0, 9.0e-5;
  GaussianMixture f({0.65, 0.35}, {MultivariateGaussian(m1, c1),
                                   MultivariateGaussian(m2, c2)});
  return LaneChangeConfig{std::move(f), Box{lo, hi}, AvControllerParams{}};
}

}  // namespace accelev
