#pragma once

#include <cstdint>
#include <string>

#include "gapflight/gap_env.hpp"
#include "gapflight/gap_perception.hpp"
#include "gapflight/sac.hpp"
#include "gapflight/trainer.hpp"

namespace gapflight {

// Plant + interface presets. training is the nominal simulation plant;
// transfer swaps mass, motor constant, control rate and command gains to
// check policy robustness; experiment uses the smaller airframe and the
// wider gap of the hardware setup.
enum class Domain { training, transfer, experiment };

const char* domain_name(Domain d);
Domain domain_from_string(const std::string& s);

struct RenderSpec {
  int count = 100;
  double roll_min = deg2rad(-60.0), roll_max = deg2rad(60.0);
  double range_min = 1.0, range_max = 4.0;
  double lateral_std = 0.2;  // gap center offset from the optical axis [m]
  double height_std = 0.2;
  double depth_noise_rel = 0.0;
  int width = 640, height = 480;
  double fx = 600.0, fy = 600.0;
  // Keep resampling (roll, range, offsets) until the outer frame projects
  // fully inside the image with this border; detection needs the whole
  // outline visible.
  double frustum_border_px = 8.0;
  Vec2 gap_dims{0.70, 0.30};
  double frame_margin = 0.15;
};

struct RunConfig {
  Domain domain = Domain::training;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::string checkpoint;  // input for eval / transfer-eval

  GapEnvConfig env;
  SacHyper sac;
  TrainerConfig trainer;

  bool attitude_reward_off = false;
  bool attitude_augment_off = false;

  int trials_per_angle = 100;
  double sweep_max_deg = 60.0;
  double sweep_step_deg = 10.0;
  long eval_episode_cap = 400;  // control steps per eval episode

  DetectorConfig detector;
  std::string detect_dir;  // input directory for the detect command
  RenderSpec render;
};

// Preset for a domain with everything else at defaults.
RunConfig make_run_config(Domain d);

// TOML file on top of the domain preset: the file picks the domain, then
// individual keys override preset fields.
RunConfig load_run_config(const std::string& path);

// Applies ablation flags and bookkeeping (paths under out_dir) before use.
void finalize_run_config(RunConfig& cfg);

}  // namespace gapflight
