#pragma once

#include <functional>
#include <string>

#include "gapflight/env_interface.hpp"
#include "gapflight/sac.hpp"

namespace gapflight {

struct TrainerConfig {
  long total_steps = 150000;
  double updates_per_step = 1.0;
  long checkpoint_every = 20000;  // env steps; 0 disables periodic saves
  std::string metrics_path;       // empty disables the CSV
  std::string checkpoint_path;    // empty disables checkpoints

  // Curriculum (episode-level, success-gated).
  bool curriculum = false;
  int curriculum_window = 500;
  double curriculum_delta = 0.05;
  double curriculum_threshold = 0.8;
  bool clear_window_on_advance = true;
  double aggressive_bias = 0.0;  // enabled once difficulty reaches 1

  // Optional early stop once the curriculum is done and the rolling success
  // stays at or above this level (negative disables).
  double early_stop_success = -1.0;
  long min_steps = 0;

  long abort_after_incidents = 100;
  long log_every_episodes = 0;  // stdout progress; 0 = quiet

  // Optional periodic probe (evaluation, best-checkpoint logic). Returning
  // true ends the run early; steps so far are reported as usual.
  long probe_every = 0;
  std::function<bool(long steps, const SacState& sac)> probe;
};

struct TrainResult {
  long steps = 0;
  long episodes = 0;
  double final_difficulty = 0.0;
  double rolling_success = 0.0;
  bool aborted = false;
};

// Single-worker training loop: env steps interleaved with gradient updates
// after the warmup, curriculum advancement on a rolling success window,
// periodic atomic checkpoints, per-episode metrics CSV
// (episode, return, r_p, r_a, r_u, success, d_f).
TrainResult train(TrainEnv& env, SacState& sac, const TrainerConfig& cfg, Rng& rng);

}  // namespace gapflight
