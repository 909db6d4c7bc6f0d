#pragma once

#include "gapflight/common.hpp"

namespace gapflight {

struct EnvStep {
  VecX obs;
  double reward = 0.0;
  bool done = false;
  bool success = false;
  // Episode ended on the clock rather than in an absorbing state. Replay
  // keeps bootstrapping through these so the critic's targets don't depend
  // on where in the episode a state was visited.
  bool timeout = false;
  // Unweighted reward components (r_p, r_a, r_u) where the env defines them.
  Vec3 components = Vec3::Zero();
};

// Minimal episodic environment contract for the trainer. Implementations own
// their RNG and are deterministic given (seed, config, action sequence).
class TrainEnv {
 public:
  virtual ~TrainEnv() = default;
  virtual int obs_dim() const = 0;
  virtual int act_dim() const = 0;
  virtual VecX reset() = 0;
  virtual EnvStep step(const VecX& action) = 0;

  // Curriculum hooks; default no-ops for environments without one.
  virtual void set_difficulty(double) {}
  virtual double difficulty() const { return 1.0; }
  virtual void set_aggressive_bias(double) {}
};

}  // namespace gapflight
