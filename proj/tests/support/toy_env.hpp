#pragma once

#include "gapflight/env_interface.hpp"

namespace gapflight {

// 1-D double integrator, reach the origin. Cheap enough to train in seconds,
// and a hand-tuned PD loop gives a tight reference return, which makes it a
// useful end-to-end probe of the learner before touching the real task.
class DoubleIntegratorEnv : public TrainEnv {
 public:
  static constexpr int kHorizon = 200;
  static constexpr double kDt = 0.05;
  static constexpr double kForceScale = 2.0;

  explicit DoubleIntegratorEnv(std::uint64_t seed) : rng_(seed) {}

  int obs_dim() const override { return 2; }
  int act_dim() const override { return 1; }

  VecX reset() override {
    std::uniform_real_distribution<double> ux(-2.0, 2.0);
    std::uniform_real_distribution<double> uv(-1.0, 1.0);
    x_ = ux(rng_);
    v_ = uv(rng_);
    t_ = 0;
    return obs();
  }

  EnvStep step(const VecX& action) override {
    const double u = kForceScale * std::clamp(action[0], -1.0, 1.0);
    x_ += v_ * kDt;
    v_ += u * kDt;
    ++t_;
    EnvStep out;
    out.obs = obs();
    out.reward = -(x_ * x_ + 0.1 * v_ * v_ + 0.01 * u * u);
    out.done = t_ >= kHorizon || std::abs(x_) > 10.0;
    out.timeout = t_ >= kHorizon && std::abs(x_) <= 10.0;
    out.success = false;
    return out;
  }

  // Reference controller, force clamped like the policy's.
  static double pd_force(double x, double v) {
    return std::clamp(-2.0 * x - 2.8 * v, -kForceScale, kForceScale);
  }

  // Mean PD return over fresh episodes; the convergence bar is 10% of this.
  static double pd_baseline(std::uint64_t seed, int episodes) {
    DoubleIntegratorEnv env(seed);
    double total = 0.0;
    for (int e = 0; e < episodes; ++e) {
      VecX ob = env.reset();
      double ep = 0.0;
      bool done = false;
      while (!done) {
        VecX a(1);
        a[0] = pd_force(ob[0], ob[1]) / kForceScale;
        EnvStep s = env.step(a);
        ep += s.reward;
        ob = s.obs;
        done = s.done;
      }
      total += ep;
    }
    return total / episodes;
  }

 private:
  VecX obs() const {
    VecX o(2);
    o[0] = x_;
    o[1] = v_;
    return o;
  }

  Rng rng_;
  double x_ = 0.0, v_ = 0.0;
  int t_ = 0;
};

}  // namespace gapflight
