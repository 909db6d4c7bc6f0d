#include "gapflight/dynamics.hpp"

#include <stdexcept>

namespace gapflight {

void QuadParams::set_thrust_to_weight(double ratio) {
  motor_speed_max = std::sqrt(ratio * mass * gravity / (4.0 * k_thrust));
}

void QuadParams::validate() const {
  if (!(mass > 0.0) || !inertia.allFinite() || inertia.minCoeff() <= 0.0 ||
      !(k_thrust > 0.0) || !(k_moment > 0.0) || !(arm_len > 0.0) ||
      !(motor_speed_max > 0.0) || drag_lin.minCoeff() < 0.0 || drag_ang.minCoeff() < 0.0) {
    throw std::invalid_argument("invalid quad parameters");
  }
}

StateDerivative derivatives(const QuadState& s, const QuadParams& prm, const WrenchCmd& u) {
  if (!s.finite() || !std::isfinite(u.thrust) || !u.torque.allFinite()) {
    throw std::invalid_argument("non-finite dynamics input");
  }
  StateDerivative d;
  d.p_dot = s.v;

  const Vec3 v_body = s.R.transpose() * s.v;
  const Vec3 f_drag = -prm.drag_lin.cwiseProduct(v_body.cwiseProduct(v_body.cwiseAbs()));
  d.v_dot = (s.R * (Vec3(0.0, 0.0, u.thrust) + f_drag)) / prm.mass + Vec3(0.0, 0.0, -prm.gravity);

  d.R_dot = s.R * skew(s.omega);

  const Vec3 tau_drag = -prm.drag_ang.cwiseProduct(s.omega.cwiseProduct(s.omega.cwiseAbs()));
  const Vec3 J_omega = prm.inertia.cwiseProduct(s.omega);
  d.omega_dot = (-s.omega.cross(J_omega) + u.torque + tau_drag).cwiseQuotient(prm.inertia);
  return d;
}

Mat3 orthonormalize(const Mat3& R) {
  Mat3 Q;
  Q.col(0) = R.col(0).normalized();
  Q.col(1) = (R.col(1) - Q.col(0).dot(R.col(1)) * Q.col(0)).normalized();
  Q.col(2) = Q.col(0).cross(Q.col(1));
  return Q;
}

namespace {

QuadState advance(const QuadState& s, const StateDerivative& d, double h) {
  QuadState n;
  n.p = s.p + h * d.p_dot;
  n.v = s.v + h * d.v_dot;
  n.R = s.R + h * d.R_dot;
  n.omega = s.omega + h * d.omega_dot;
  return n;
}

}  // namespace

QuadState step_dynamics(const QuadState& s, const QuadParams& prm, const WrenchCmd& u, double dt) {
  const StateDerivative k1 = derivatives(s, prm, u);
  const StateDerivative k2 = derivatives(advance(s, k1, 0.5 * dt), prm, u);
  const StateDerivative k3 = derivatives(advance(s, k2, 0.5 * dt), prm, u);
  const StateDerivative k4 = derivatives(advance(s, k3, dt), prm, u);

  QuadState n;
  const double w = dt / 6.0;
  n.p = s.p + w * (k1.p_dot + 2.0 * k2.p_dot + 2.0 * k3.p_dot + k4.p_dot);
  n.v = s.v + w * (k1.v_dot + 2.0 * k2.v_dot + 2.0 * k3.v_dot + k4.v_dot);
  n.R = orthonormalize(s.R + w * (k1.R_dot + 2.0 * k2.R_dot + 2.0 * k3.R_dot + k4.R_dot));
  n.omega = s.omega + w * (k1.omega_dot + 2.0 * k2.omega_dot + 2.0 * k3.omega_dot + k4.omega_dot);
  return n;
}

MotorSpeeds motor_speeds_from_wrench(const WrenchCmd& u, const QuadParams& prm) {
  // Rotor layout (top view), d = arm_len / sqrt(2):
  //   m0 (+d,+d)  m3 (-d,+d)
  //   m2 (+d,-d)  m1 (-d,-d)
  // m0, m1 spin so their drag moment is -z; m2, m3 +z.
  const double d = prm.arm_len / std::sqrt(2.0);
  const double q = prm.k_moment;
  const double t4 = u.thrust / 4.0;
  const double rx = u.torque.x() / (4.0 * d);
  const double ry = u.torque.y() / (4.0 * d);
  const double rz = u.torque.z() / (4.0 * q);

  Vec4 f;
  f << t4 + rx - ry - rz,
       t4 - rx + ry - rz,
       t4 - rx - ry + rz,
       t4 + rx + ry + rz;

  MotorSpeeds out;
  const double f_max = prm.motor_thrust_max();
  for (int i = 0; i < 4; ++i) {
    double fi = f[i];
    if (fi < 0.0 || fi > f_max) {
      out.saturated = true;
      fi = std::clamp(fi, 0.0, f_max);
    }
    out.w[i] = std::sqrt(fi / prm.k_thrust);
  }
  return out;
}

WrenchCmd wrench_from_motor_speeds(const Vec4& w, const QuadParams& prm) {
  const double d = prm.arm_len / std::sqrt(2.0);
  const double q = prm.k_moment;
  Vec4 f;
  for (int i = 0; i < 4; ++i) f[i] = prm.k_thrust * w[i] * w[i];

  WrenchCmd u;
  u.thrust = f.sum();
  u.torque.x() = d * (f[0] - f[1] - f[2] + f[3]);
  u.torque.y() = d * (-f[0] + f[1] - f[2] + f[3]);
  u.torque.z() = q * (-f[0] - f[1] + f[2] + f[3]);
  return u;
}

WrenchCmd saturate_wrench(const WrenchCmd& u, const QuadParams& prm, bool* saturated) {
  MotorSpeeds ms = motor_speeds_from_wrench(u, prm);
  if (saturated) *saturated = ms.saturated;
  if (!ms.saturated) return u;
  return wrench_from_motor_speeds(ms.w, prm);
}

Mat3 rotation_from_euler(double phi, double theta, double psi) {
  const double cf = std::cos(phi), sf = std::sin(phi);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(psi), sp = std::sin(psi);
  Mat3 R;
  R << cp * ct, cp * st * sf - sp * cf, cp * st * cf + sp * sf,
       sp * ct, sp * st * sf + cp * cf, sp * st * cf - cp * sf,
       -st,     ct * sf,               ct * cf;
  return R;
}

EulerZyx euler_from_rotation(const Mat3& R) {
  EulerZyx e;
  const double s = std::clamp(-R(2, 0), -1.0, 1.0);
  e.theta = std::asin(s);
  if (std::abs(std::abs(e.theta) - 0.5 * kPi) < 1e-6) {
    // Pitch at +-90 deg: only phi -+ psi is observable, report it as phi.
    e.gimbal_lock = true;
    e.psi = 0.0;
    e.phi = (e.theta > 0.0) ? std::atan2(R(0, 1), R(1, 1)) : std::atan2(-R(0, 1), R(1, 1));
  } else {
    e.phi = std::atan2(R(2, 1), R(2, 2));
    e.psi = std::atan2(R(1, 0), R(0, 0));
  }
  return e;
}

bool state_diverged(const QuadState& s, const DivergenceBox& box) {
  if (!s.finite()) return true;
  return s.p.cwiseAbs().maxCoeff() > box.p_max || s.v.cwiseAbs().maxCoeff() > box.v_max ||
         s.omega.cwiseAbs().maxCoeff() > box.omega_max;
}

}  // namespace gapflight
