#pragma once

#include "gapflight/csv.hpp"
#include "gapflight/env_interface.hpp"
#include "gapflight/gap_world.hpp"

namespace gapflight {

enum class Verdict { running, success, collision, out_of_bounds, timeout };

const char* verdict_name(Verdict v);

// One full episode owner: dynamics + command chain + gap MDP. Control runs at
// control_hz; each control step advances the physics physics_substeps times.
struct GapEnvConfig {
  EpisodeConfig episode;
  RewardWeights weights;
  QuadParams nominal_params;
  AttAltGains gains;
  Vec3 kappa{80.0, 80.0, 24.0};
  double control_hz = 20.0;
  int physics_substeps = 4;
  bool training_mode = true;  // enables obs noise and attitude augmentation
};

class GapEnv : public TrainEnv {
 public:
  GapEnv(const GapEnvConfig& cfg, std::uint64_t seed);

  int obs_dim() const override { return kObsDim; }
  int act_dim() const override { return 3; }
  VecX reset() override;
  EnvStep step(const VecX& action) override;

  void set_difficulty(double d) override { cfg_.episode.difficulty = d; }
  double difficulty() const override { return cfg_.episode.difficulty; }
  void set_aggressive_bias(double b) override { cfg_.episode.aggressive_bias = b; }

  // Force the next reset's gap roll (evaluation sweeps); NaN disables.
  void override_roll(double roll) { roll_override_ = roll; }

  Verdict verdict() const { return verdict_; }
  const QuadState& state() const { return state_; }
  const GapSpec& gap() const { return gap_; }
  const CmdIntegrator& integrator() const { return integ_; }
  const GapEnvConfig& config() const { return cfg_; }
  double time() const { return t_; }
  bool crossed() const { return crossed_; }
  // Interpolated vehicle state at the instant the center crossed the gap
  // plane; valid once crossed() is true.
  const QuadState& crossing_state() const { return crossing_state_; }

  // Optional per-step trajectory log; writer must outlive the env.
  void set_trajectory_log(CsvWriter* log) { traj_log_ = log; }
  static std::vector<std::string> trajectory_columns();

 private:
  ObsVec make_obs();

  GapEnvConfig cfg_;
  Rng rng_;
  QuadState state_;
  QuadParams params_;
  GapSpec gap_;
  CmdIntegrator integ_;
  AttAltController ctrl_;
  Verdict verdict_ = Verdict::running;
  bool crossed_ = false;
  QuadState crossing_state_;
  double t_ = 0.0;
  double roll_override_ = std::numeric_limits<double>::quiet_NaN();
  CsvWriter* traj_log_ = nullptr;
  long episode_index_ = -1;
};

}  // namespace gapflight
