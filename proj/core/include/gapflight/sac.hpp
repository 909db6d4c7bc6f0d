#pragma once

#include "gapflight/mlp.hpp"
#include "gapflight/replay_buffer.hpp"

namespace gapflight {

struct SacHyper {
  double lr = 3e-4;
  double gamma = 0.95;
  double tau = 0.01;
  int batch = 512;
  int target_interval = 16;
  long buffer_capacity = 100000;
  int warmup_steps = 5000;
  std::vector<int> hidden{256, 256};
  // NaN = auto (-act_dim), resolved by make().
  double target_entropy = std::numeric_limits<double>::quiet_NaN();
  double logstd_min = -20.0, logstd_max = 2.0;
  double init_log_alpha = 0.0;
  double actor_final_scale = 0.01;  // near-zero initial actions
};

// Actor outputs [mean, log-std] per action channel; critics score (obs, act).
struct SacState {
  SacHyper hp;
  int obs_dim = 0, act_dim = 0;
  Mlp actor, critic1, critic2, target1, target2;
  Adam opt_actor, opt_c1, opt_c2;
  double log_alpha = 0.0;
  double alpha_m = 0.0, alpha_v = 0.0;  // scalar Adam moments for log_alpha
  long alpha_t = 0;
  long update_count = 0;
  long incidents = 0;  // skipped updates due to non-finite losses

  double alpha() const { return std::exp(log_alpha); }

  static SacState make(int obs_dim, int act_dim, SacHyper hp, std::uint64_t seed);
};

struct ActionSample {
  VecX action;      // in (-1, 1)
  double log_prob;  // includes the tanh change-of-variables correction
};

// rng = nullptr selects the deterministic policy tanh(mean).
ActionSample sample_action(const Mlp& actor, const VecX& obs, const SacHyper& hp, Rng* rng);

struct SacLosses {
  double critic1 = 0.0, critic2 = 0.0;
  double actor = 0.0;
  double alpha_loss = 0.0;
  double alpha = 0.0;
  double entropy = 0.0;  // -mean log_prob of fresh actions
  bool skipped = false;
};

SacLosses sac_update(SacState& s, const ReplayBuffer::Batch& batch, Rng& rng);

}  // namespace gapflight
