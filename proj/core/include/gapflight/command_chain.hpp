#pragma once

#include "gapflight/dynamics.hpp"

namespace gapflight {

// Policy action: normalized second derivatives of (roll_d, pitch_d, alt_d),
// each in [-1, 1].
using Action = Vec3;

// Double integrator between the policy and the low-level controller. The
// action is scaled by kappa into accelerations of the desired roll, pitch,
// and altitude setpoints.
struct CmdIntegrator {
  Vec3 des = Vec3::Zero();       // (phi_d, theta_d, z_d)
  Vec3 des_rate = Vec3::Zero();  // their time derivatives
  Vec3 kappa{80.0, 80.0, 24.0};  // action scale: rad/s^2, rad/s^2, m/s^2

  double angle_bound = deg2rad(75.0);  // |phi_d|, |theta_d| limit
  double z_min = 0.2, z_max = 3.5;
  int clamp_events = 0;  // diagnostic: how often a setpoint hit its bound
};

// Exact kinematic update over one control period: the setpoint advances with
// the rate it had at the start of the period plus the 1/2*a*dt^2 term, then
// the rate absorbs the acceleration. A clamped channel has its rate zeroed.
CmdIntegrator integrate_action(const CmdIntegrator& integ, const Action& a, double dt);

struct AttAltGains {
  Vec3 k_rot{144.0, 144.0, 16.0};   // rotation error gains [1/s^2]
  Vec3 k_omega{18.0, 18.0, 6.0};    // body-rate gains [1/s]
  double alt_kp = 6.0, alt_ki = 0.5, alt_kd = 3.0;
  double alt_integral_max = 1.0;    // anti-windup clamp [m s]
  double tilt_cap = deg2rad(85.0);  // thrust compensation limit
};

struct ControlResult {
  WrenchCmd wrench;            // realized wrench after motor allocation limits
  bool tilt_capped = false;
  bool motor_saturated = false;
};

// PD attitude loop on the rotation error plus an altitude PID whose output is
// divided by the world-z component of body-z (capped) to keep the vertical
// force under tilt. Stateful only through the altitude integral.
class AttAltController {
 public:
  AttAltController() = default;
  explicit AttAltController(const AttAltGains& gains) : gains_(gains) {}

  void reset() { alt_integral_ = 0.0; }
  const AttAltGains& gains() const { return gains_; }

  ControlResult compute(const QuadState& s, const CmdIntegrator& integ, const QuadParams& prm,
                        double psi_d, double dt);

 private:
  AttAltGains gains_;
  double alt_integral_ = 0.0;
};

}  // namespace gapflight
