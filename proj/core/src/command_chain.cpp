#include "gapflight/command_chain.hpp"

#include <stdexcept>

namespace gapflight {

CmdIntegrator integrate_action(const CmdIntegrator& integ, const Action& a, double dt) {
  CmdIntegrator out = integ;
  const Vec3 accel = out.kappa.cwiseProduct(a.cwiseMax(-1.0).cwiseMin(1.0));

  out.des += integ.des_rate * dt + 0.5 * accel * dt * dt;
  out.des_rate += accel * dt;

  for (int i = 0; i < 2; ++i) {
    if (std::abs(out.des[i]) > out.angle_bound) {
      out.des[i] = std::clamp(out.des[i], -out.angle_bound, out.angle_bound);
      out.des_rate[i] = 0.0;
      ++out.clamp_events;
    }
  }
  if (out.des.z() < out.z_min || out.des.z() > out.z_max) {
    out.des.z() = std::clamp(out.des.z(), out.z_min, out.z_max);
    out.des_rate.z() = 0.0;
    ++out.clamp_events;
  }
  return out;
}

namespace {

Vec3 vee(const Mat3& m) { return Vec3(m(2, 1), m(0, 2), m(1, 0)); }

}  // namespace

ControlResult AttAltController::compute(const QuadState& s, const CmdIntegrator& integ,
                                        const QuadParams& prm, double psi_d, double dt) {
  if (!s.finite() || !integ.des.allFinite() || !integ.des_rate.allFinite()) {
    throw std::invalid_argument("non-finite controller input");
  }
  ControlResult res;

  const Mat3 R_d = rotation_from_euler(integ.des.x(), integ.des.y(), psi_d);
  const Vec3 e_R = 0.5 * vee(R_d.transpose() * s.R - s.R.transpose() * R_d);
  const Vec3 e_W = s.omega;  // desired rates are zero in the attitude loop
  const Vec3 J = prm.inertia;
  Vec3 tau = J.cwiseProduct(-gains_.k_rot.cwiseProduct(e_R) - gains_.k_omega.cwiseProduct(e_W)) +
             s.omega.cross(J.cwiseProduct(s.omega));

  const double z_err = integ.des.z() - s.p.z();
  alt_integral_ = std::clamp(alt_integral_ + z_err * dt, -gains_.alt_integral_max,
                             gains_.alt_integral_max);
  const double a_z = gains_.alt_kp * z_err + gains_.alt_ki * alt_integral_ +
                     gains_.alt_kd * (integ.des_rate.z() - s.v.z());

  // Divide the desired vertical force by body-z's world-z component so the
  // vertical channel stays stiff under tilt, up to the cap.
  const double cos_tilt = s.R(2, 2);
  const double cos_cap = std::cos(gains_.tilt_cap);
  double denom = cos_tilt;
  if (denom < cos_cap) {
    denom = cos_cap;
    res.tilt_capped = true;
  }
  double thrust = prm.mass * (prm.gravity + a_z) / denom;
  thrust = std::clamp(thrust, 0.0, prm.thrust_max());

  WrenchCmd raw{thrust, tau};
  res.wrench = saturate_wrench(raw, prm, &res.motor_saturated);
  return res;
}

}  // namespace gapflight
