#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "gapflight/dynamics.hpp"

using namespace gapflight;

namespace {

QuadParams no_drag_params() {
  QuadParams prm;
  prm.drag_lin.setZero();
  prm.drag_ang.setZero();
  return prm;
}

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace

TEST_CASE("hover thrust cancels gravity at rest") {
  QuadParams prm;
  QuadState s;
  WrenchCmd u;
  u.thrust = prm.mass * prm.gravity;  // 10.791 N
  CHECK(u.thrust == doctest::Approx(10.791).epsilon(1e-12));
  const StateDerivative d = derivatives(s, prm, u);
  CHECK(d.v_dot.norm() == doctest::Approx(0.0).epsilon(0.0));
  CHECK(d.omega_dot.norm() == doctest::Approx(0.0).epsilon(0.0));
  CHECK(d.p_dot.norm() == doctest::Approx(0.0).epsilon(0.0));
}

TEST_CASE("zero thrust at rest gives pure gravitational acceleration") {
  QuadParams prm;  // drag irrelevant at v = 0
  QuadState s;
  const StateDerivative d = derivatives(s, prm, WrenchCmd{});
  CHECK(d.v_dot.x() == doctest::Approx(0.0));
  CHECK(d.v_dot.y() == doctest::Approx(0.0));
  CHECK(d.v_dot.z() == doctest::Approx(-9.81).epsilon(1e-12));
}

TEST_CASE("angular acceleration is inertia-scaled torque at rest") {
  QuadParams prm = no_drag_params();
  QuadState s;
  WrenchCmd u;
  u.torque = Vec3(0.0, 0.0, 0.22);  // equals J_z, so omega_dot_z = 1
  const StateDerivative d = derivatives(s, prm, u);
  CHECK(d.omega_dot.x() == doctest::Approx(0.0));
  CHECK(d.omega_dot.y() == doctest::Approx(0.0));
  CHECK(d.omega_dot.z() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quadratic drag decelerates body-frame velocity componentwise") {
  QuadParams prm;
  QuadState s;
  s.v = Vec3(2.0, 0.0, 0.0);
  WrenchCmd u;
  u.thrust = prm.mass * prm.gravity;
  const StateDerivative d = derivatives(s, prm, u);
  // -c * v|v| / m = -0.05 * 4 / 1.1
  CHECK(d.v_dot.x() == doctest::Approx(-0.05 * 4.0 / 1.1).epsilon(1e-12));
  CHECK(d.v_dot.z() == doctest::Approx(0.0));

  // with the body rotated the drag follows the body axes, not the world ones
  s.R = rotation_from_euler(0.0, 0.0, M_PI / 2.0);
  const StateDerivative dr = derivatives(s, prm, u);
  CHECK(dr.v_dot.x() == doctest::Approx(-0.05 * 4.0 / 1.1).epsilon(1e-12));
}

TEST_CASE("ballistic step from rest matches constant-acceleration kinematics") {
  QuadParams prm = no_drag_params();
  QuadState s;
  s.p = Vec3(0.0, 0.0, 1.5);
  const QuadState s1 = step_dynamics(s, prm, WrenchCmd{}, 0.1);
  // dv = -g dt, dp = -g dt^2 / 2; RK4 integrates a polynomial of this degree exactly
  CHECK(s1.v.z() == doctest::Approx(-0.981).epsilon(1e-12));
  CHECK(s1.p.z() - s.p.z() == doctest::Approx(-0.04905).epsilon(1e-12));
  CHECK(s1.v.head<2>().norm() == doctest::Approx(0.0));

  QuadState st = s;
  for (int i = 0; i < 10; ++i) st = step_dynamics(st, prm, WrenchCmd{}, 0.1);
  CHECK(st.v.z() == doctest::Approx(-9.81).epsilon(1e-9));
  CHECK(st.p.z() - s.p.z() == doctest::Approx(-0.5 * 9.81).epsilon(1e-9));
}

TEST_CASE("constant yaw rate for a full turn returns the attitude to identity") {
  QuadParams prm = no_drag_params();
  QuadState s;
  s.omega = Vec3(0.0, 0.0, 1.0);
  WrenchCmd u;
  u.thrust = prm.mass * prm.gravity;
  // omega is a principal axis, so omega x J omega = 0 and the rate holds itself
  const double dt = 1.0 / 80.0;
  const int steps = int(std::round(2.0 * M_PI / dt));
  const double dt_exact = 2.0 * M_PI / steps;
  QuadState st = s;
  for (int i = 0; i < steps; ++i) st = step_dynamics(st, prm, u, dt_exact);
  CHECK((st.R - Mat3::Identity()).norm() < 1e-6);
  CHECK(st.omega.z() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("integrator is fourth order on torque-free tumbling") {
  QuadParams prm = no_drag_params();
  QuadState s0;
  s0.omega = Vec3(0.7, -0.4, 0.9);  // excites the nonlinear cross term
  const double horizon = 0.5;

  auto endpoint = [&](double dt) {
    QuadState st = s0;
    const int n = int(std::round(horizon / dt));
    for (int i = 0; i < n; ++i) st = step_dynamics(st, prm, WrenchCmd{}, dt);
    return st;
  };

  const QuadState ref = endpoint(horizon / 3200.0);
  auto err = [&](const QuadState& st) {
    return (st.omega - ref.omega).norm() + (st.R - ref.R).norm();
  };
  const double e1 = err(endpoint(horizon / 50.0));
  const double e2 = err(endpoint(horizon / 100.0));
  const double order = std::log2(e1 / e2);
  CHECK(order > 3.9);
}

TEST_CASE("hover wrench maps to four equal motor speeds") {
  QuadParams prm;
  WrenchCmd u;
  u.thrust = prm.mass * prm.gravity;
  const MotorSpeeds m = motor_speeds_from_wrench(u, prm);
  CHECK_FALSE(m.saturated);
  const double w_hover = std::sqrt(prm.mass * prm.gravity / (4.0 * prm.k_thrust));
  for (int i = 0; i < 4; ++i) CHECK(m.w[i] == doctest::Approx(w_hover).epsilon(1e-12));
}

TEST_CASE("yaw torque splits the rotor pairs and keeps collective thrust") {
  QuadParams prm;
  WrenchCmd u;
  u.thrust = prm.mass * prm.gravity;
  u.torque = Vec3(0.0, 0.0, 0.1);
  const MotorSpeeds m = motor_speeds_from_wrench(u, prm);
  CHECK_FALSE(m.saturated);
  // opposite spin directions alternate around the frame: two rotors speed up,
  // the other two slow down by the same per-motor thrust
  Vec4 f;
  for (int i = 0; i < 4; ++i) f[i] = prm.k_thrust * m.w[i] * m.w[i];
  CHECK(f.sum() == doctest::Approx(u.thrust).epsilon(1e-12));
  std::vector<double> fs{f[0], f[1], f[2], f[3]};
  std::sort(fs.begin(), fs.end());
  CHECK(fs[0] == doctest::Approx(fs[1]).epsilon(1e-12));
  CHECK(fs[2] == doctest::Approx(fs[3]).epsilon(1e-12));
  CHECK(fs[2] > fs[1]);
  const WrenchCmd back = wrench_from_motor_speeds(m.w, prm);
  CHECK(back.torque.z() == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("wrench to motor speeds round-trips inside the actuator envelope") {
  QuadParams prm;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  const double fmax = prm.motor_thrust_max();
  for (int trial = 0; trial < 1000; ++trial) {
    Vec4 w;
    for (int i = 0; i < 4; ++i) w[i] = std::sqrt(frac(rng) * fmax / prm.k_thrust);
    const WrenchCmd u = wrench_from_motor_speeds(w, prm);
    const MotorSpeeds m = motor_speeds_from_wrench(u, prm);
    CHECK_FALSE(m.saturated);
    const WrenchCmd back = wrench_from_motor_speeds(m.w, prm);
    CHECK(std::abs(back.thrust - u.thrust) < 1e-9);
    CHECK((back.torque - u.torque).norm() < 1e-9);
  }
}

TEST_CASE("saturating wrench projection clamps per-motor thrust") {
  QuadParams prm;
  WrenchCmd u;
  u.thrust = prm.thrust_max() * 1.5;
  bool sat = false;
  const WrenchCmd r = saturate_wrench(u, prm, &sat);
  CHECK(sat);
  CHECK(r.thrust == doctest::Approx(prm.thrust_max()).epsilon(1e-12));

  WrenchCmd ok;
  ok.thrust = prm.mass * prm.gravity;
  ok.torque = Vec3(0.05, -0.03, 0.02);
  sat = true;
  const WrenchCmd same = saturate_wrench(ok, prm, &sat);
  CHECK_FALSE(sat);
  CHECK(same.thrust == doctest::Approx(ok.thrust).epsilon(1e-12));
  CHECK((same.torque - ok.torque).norm() < 1e-12);
}

TEST_CASE("euler angles follow the yaw-pitch-roll convention") {
  CHECK(euler_from_rotation(Mat3::Identity()).phi == doctest::Approx(0.0));
  CHECK(euler_from_rotation(Mat3::Identity()).theta == doctest::Approx(0.0));
  CHECK(euler_from_rotation(Mat3::Identity()).psi == doctest::Approx(0.0));

  const double phi = 30.0 * M_PI / 180.0;
  const EulerZyx e = euler_from_rotation(rotation_from_euler(phi, 0.0, 0.0));
  CHECK(e.phi == doctest::Approx(phi).epsilon(1e-12));
  CHECK(e.theta == doctest::Approx(0.0));
  CHECK(e.psi == doctest::Approx(0.0));
  CHECK_FALSE(e.gimbal_lock);
}

TEST_CASE("euler round-trip holds away from the pitch singularity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  std::uniform_real_distribution<double> pitch(-85.0 * M_PI / 180.0, 85.0 * M_PI / 180.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double phi = ang(rng) / 2.0;  // keep roll in (-pi/2, pi/2) branch
    const double theta = pitch(rng);
    const double psi = ang(rng);
    const EulerZyx e = euler_from_rotation(rotation_from_euler(phi, theta, psi));
    CHECK(std::abs(e.phi - phi) < 1e-9);
    CHECK(std::abs(e.theta - theta) < 1e-9);
    CHECK(std::abs(e.psi - psi) < 1e-9);
    CHECK_FALSE(e.gimbal_lock);
  }
}

TEST_CASE("vertical pitch sets the gimbal lock flag") {
  const EulerZyx e = euler_from_rotation(rotation_from_euler(0.3, M_PI / 2.0, 0.7));
  CHECK(e.gimbal_lock);
  CHECK(std::abs(e.theta - M_PI / 2.0) < 1e-9);
}

TEST_CASE("orthonormalize repairs a drifted rotation") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1e-3);
  for (int trial = 0; trial < 100; ++trial) {
    Mat3 noisy = random_rotation(rng);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) noisy(i, j) += n(rng);
    const Mat3 R = orthonormalize(noisy);
    CHECK((R.transpose() * R - Mat3::Identity()).norm() < 1e-12);
    CHECK(R.determinant() > 0.0);
  }
}

TEST_CASE("long integrations keep the attitude orthonormal") {
  QuadParams prm;
  QuadState s;
  s.omega = Vec3(2.0, -1.5, 3.0);
  WrenchCmd u;
  u.thrust = prm.mass * prm.gravity;
  u.torque = Vec3(0.01, 0.02, -0.01);
  for (int i = 0; i < 4000; ++i) s = step_dynamics(s, prm, u, 1.0 / 400.0);
  CHECK((s.R.transpose() * s.R - Mat3::Identity()).norm() < 1e-12);
  CHECK(s.finite());
}

TEST_CASE("thrust-to-weight helper rescales the motor speed limit") {
  QuadParams prm;
  prm.set_thrust_to_weight(3.5);
  CHECK(prm.thrust_max() == doctest::Approx(3.5 * prm.mass * prm.gravity).epsilon(1e-12));
}

TEST_CASE("parameter validation rejects nonsense") {
  QuadParams bad;
  bad.mass = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  QuadParams bad2;
  bad2.inertia.y() = 0.0;
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
  QuadParams ok;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("non-finite inputs are rejected instead of propagated") {
  QuadParams prm;
  QuadState s;
  s.v.x() = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(derivatives(s, prm, WrenchCmd{}), std::invalid_argument);
  QuadState ok;
  WrenchCmd u;
  u.thrust = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(derivatives(ok, prm, u), std::invalid_argument);
}

TEST_CASE("divergence box flags runaway states") {
  QuadState s;
  CHECK_FALSE(state_diverged(s));
  s.p.x() = 51.0;
  CHECK(state_diverged(s));
  QuadState fast;
  fast.v.z() = -25.0;
  CHECK(state_diverged(fast));
  QuadState spin;
  spin.omega.x() = 150.0;
  CHECK(state_diverged(spin));
}
