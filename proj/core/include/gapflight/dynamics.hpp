#pragma once

#include "gapflight/common.hpp"

namespace gapflight {

// World frame: x forward (toward the wall), z up. Body frame: x forward,
// z along the collective thrust axis.
struct QuadState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 omega = Vec3::Zero();  // body rates [rad/s]

  bool finite() const {
    return p.allFinite() && v.allFinite() && R.allFinite() && omega.allFinite();
  }
};

struct QuadParams {
  double mass = 1.1;                    // [kg]
  Vec3 inertia{0.12, 0.12, 0.22};       // diagonal body inertia [kg m^2]
  double k_thrust = 6e-6;               // rotor thrust constant [N s^2]
  double k_moment = 0.02;               // drag moment per unit thrust [m]
  double arm_len = 0.34;                // rotor distance from center [m]
  Vec3 drag_lin{0.05, 0.05, 0.05};      // quadratic body-velocity drag coeffs
  Vec3 drag_ang{0.05, 0.05, 0.05};      // quadratic body-rate drag coeffs
  double motor_speed_max = 1254.6;      // [rad/s]
  double gravity = kGravity;

  double motor_thrust_max() const { return k_thrust * motor_speed_max * motor_speed_max; }
  double thrust_max() const { return 4.0 * motor_thrust_max(); }

  // Pick motor_speed_max so that max collective thrust = ratio * m * g.
  void set_thrust_to_weight(double ratio);
  void validate() const;  // throws std::invalid_argument on nonsense values
};

struct WrenchCmd {
  double thrust = 0.0;        // collective thrust along body z [N]
  Vec3 torque = Vec3::Zero(); // body torque [N m]
};

struct StateDerivative {
  Vec3 p_dot, v_dot, omega_dot;
  Mat3 R_dot;
};

// Continuous-time rigid-body model with componentwise quadratic drag.
// Throws std::invalid_argument on non-finite state or command.
StateDerivative derivatives(const QuadState& s, const QuadParams& prm, const WrenchCmd& u);

// Project a near-rotation back onto SO(3) by Gram-Schmidt on the columns.
Mat3 orthonormalize(const Mat3& R);

// One RK4 step of length dt, with re-orthonormalization of R afterwards.
QuadState step_dynamics(const QuadState& s, const QuadParams& prm, const WrenchCmd& u, double dt);

struct MotorSpeeds {
  Vec4 w = Vec4::Zero();  // rotor speeds [rad/s]
  bool saturated = false; // any per-motor thrust clamped to [0, max]
};

// Closed-form allocation for the X configuration (rotors on the diagonals).
// Requested per-motor thrusts are clamped to [0, motor_thrust_max].
MotorSpeeds motor_speeds_from_wrench(const WrenchCmd& u, const QuadParams& prm);
WrenchCmd wrench_from_motor_speeds(const Vec4& w, const QuadParams& prm);

// The wrench actually realized after allocation, clamping, and re-mixing.
WrenchCmd saturate_wrench(const WrenchCmd& u, const QuadParams& prm, bool* saturated = nullptr);

struct EulerZyx {
  double phi = 0.0;    // roll
  double theta = 0.0;  // pitch
  double psi = 0.0;    // yaw
  bool gimbal_lock = false;
};

// Intrinsic Z-Y-X convention: R = Rz(psi) * Ry(theta) * Rx(phi).
Mat3 rotation_from_euler(double phi, double theta, double psi);
EulerZyx euler_from_rotation(const Mat3& R);

struct DivergenceBox {
  double p_max = 50.0;
  double v_max = 20.0;
  double omega_max = 100.0;
};

bool state_diverged(const QuadState& s, const DivergenceBox& box = {});

}  // namespace gapflight
