#include "run_config.hpp"

#include <stdexcept>

#include "gapflight/toml_lite.hpp"

namespace gapflight {

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::training: return "training";
    case Domain::transfer: return "transfer";
    case Domain::experiment: return "experiment";
  }
  return "?";
}

Domain domain_from_string(const std::string& s) {
  if (s == "training") return Domain::training;
  if (s == "transfer") return Domain::transfer;
  if (s == "experiment") return Domain::experiment;
  throw std::invalid_argument("unknown domain '" + s + "'");
}

RunConfig make_run_config(Domain d) {
  RunConfig cfg;
  cfg.domain = d;

  switch (d) {
    case Domain::training:
      // GapEnvConfig defaults are already the nominal plant.
      break;
    case Domain::transfer:
      cfg.env.nominal_params.mass = 0.9;
      cfg.env.nominal_params.k_thrust = 1.5e-5;
      cfg.env.nominal_params.set_thrust_to_weight(3.5);
      cfg.env.control_hz = 50.0;
      cfg.env.physics_substeps = 2;  // keeps the physics step at <= 1/80 s
      cfg.env.kappa = Vec3(160.0, 160.0, 24.0);
      break;
    case Domain::experiment: {
      // Hardware airframe: same 1.1 kg plant on shorter arms; inertia scaled
      // with the arm length squared.
      const double s = 0.22 / cfg.env.nominal_params.arm_len;
      cfg.env.nominal_params.arm_len = 0.22;
      cfg.env.nominal_params.inertia *= s * s;
      cfg.env.episode.footprint.length = 0.35;
      cfg.env.episode.footprint.width = 0.20;
      cfg.env.episode.goal_dims = Vec2(0.70, 0.40);
      break;
    }
  }
  return cfg;
}

namespace {

Vec3 get_vec3(const TomlLite& t, const std::string& key, const Vec3& fallback) {
  if (!t.has(key)) return fallback;
  const auto a = t.get_array(key, {});
  if (a.size() != 3) throw std::invalid_argument(key + ": expected 3 elements");
  return Vec3(a[0], a[1], a[2]);
}

Vec2 get_vec2(const TomlLite& t, const std::string& key, const Vec2& fallback) {
  if (!t.has(key)) return fallback;
  const auto a = t.get_array(key, {});
  if (a.size() != 2) throw std::invalid_argument(key + ": expected 2 elements");
  return Vec2(a[0], a[1]);
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  const TomlLite t = TomlLite::parse_file(path);
  RunConfig cfg = make_run_config(domain_from_string(t.get_string("run.domain", "training")));

  cfg.seed = std::uint64_t(t.get_long("run.seed", long(cfg.seed)));
  cfg.out_dir = t.get_string("run.out_dir", cfg.out_dir);
  cfg.checkpoint = t.get_string("run.checkpoint", cfg.checkpoint);
  cfg.attitude_reward_off = t.get_bool("run.attitude_reward_off", false);
  cfg.attitude_augment_off = t.get_bool("run.attitude_augment_off", false);

  QuadParams& p = cfg.env.nominal_params;
  p.mass = t.get_double("plant.mass", p.mass);
  p.inertia = get_vec3(t, "plant.inertia", p.inertia);
  p.k_thrust = t.get_double("plant.k_thrust", p.k_thrust);
  p.k_moment = t.get_double("plant.k_moment", p.k_moment);
  p.arm_len = t.get_double("plant.arm_len", p.arm_len);
  if (t.has("plant.thrust_to_weight")) {
    p.set_thrust_to_weight(t.get_double("plant.thrust_to_weight", 3.5));
  }
  p.drag_lin = get_vec3(t, "plant.drag_lin", p.drag_lin);
  p.drag_ang = get_vec3(t, "plant.drag_ang", p.drag_ang);

  cfg.env.control_hz = t.get_double("env.control_hz", cfg.env.control_hz);
  cfg.env.physics_substeps = t.get_int("env.physics_substeps", cfg.env.physics_substeps);
  cfg.env.kappa = get_vec3(t, "env.kappa", cfg.env.kappa);

  EpisodeConfig& ep = cfg.env.episode;
  ep.gap_center = get_vec3(t, "gap.center", ep.gap_center);
  ep.roll_min = deg2rad(t.get_double("gap.roll_min_deg", rad2deg(ep.roll_min)));
  ep.roll_max = deg2rad(t.get_double("gap.roll_max_deg", rad2deg(ep.roll_max)));
  ep.start_dims = get_vec2(t, "gap.start_dims", ep.start_dims);
  ep.goal_dims = get_vec2(t, "gap.goal_dims", ep.goal_dims);
  ep.difficulty = t.get_double("gap.difficulty", ep.difficulty);
  ep.frame_margin = t.get_double("gap.frame_margin", ep.frame_margin);
  ep.footprint.length = t.get_double("gap.footprint_length", ep.footprint.length);
  ep.footprint.width = t.get_double("gap.footprint_width", ep.footprint.width);
  ep.timeout_s = t.get_double("env.timeout_s", ep.timeout_s);
  ep.delta_target = t.get_double("env.delta_target", ep.delta_target);
  ep.success_radius = t.get_double("env.success_radius", ep.success_radius);
  ep.approach_dist = t.get_double("env.approach_dist", ep.approach_dist);
  ep.param_rel_std = t.get_double("env.param_rel_std", ep.param_rel_std);

  RewardWeights& w = cfg.env.weights;
  w.lambda_p = t.get_double("reward.lambda_p", w.lambda_p);
  w.lambda_a = t.get_double("reward.lambda_a", w.lambda_a);
  w.lambda_u = t.get_double("reward.lambda_u", w.lambda_u);
  w.b_a = t.get_double("reward.b_a", w.b_a);
  w.terminal = t.get_double("reward.terminal", w.terminal);

  SacHyper& h = cfg.sac;
  h.lr = t.get_double("sac.lr", h.lr);
  h.gamma = t.get_double("sac.gamma", h.gamma);
  h.tau = t.get_double("sac.tau", h.tau);
  h.batch = t.get_int("sac.batch", h.batch);
  h.target_interval = t.get_int("sac.target_interval", h.target_interval);
  h.buffer_capacity = t.get_long("sac.buffer_capacity", h.buffer_capacity);
  h.warmup_steps = t.get_int("sac.warmup", h.warmup_steps);
  if (t.has("sac.hidden")) {
    h.hidden.clear();
    for (double v : t.get_array("sac.hidden", {})) h.hidden.push_back(int(v));
  }
  if (t.has("sac.target_entropy")) h.target_entropy = t.get_double("sac.target_entropy", 0.0);

  TrainerConfig& tr = cfg.trainer;
  tr.total_steps = t.get_long("train.total_steps", tr.total_steps);
  tr.updates_per_step = t.get_double("train.updates_per_step", tr.updates_per_step);
  tr.checkpoint_every = t.get_long("train.checkpoint_every", tr.checkpoint_every);
  tr.curriculum = t.get_bool("train.curriculum", tr.curriculum);
  tr.curriculum_window = t.get_int("train.curriculum_window", tr.curriculum_window);
  tr.curriculum_delta = t.get_double("train.curriculum_delta", tr.curriculum_delta);
  tr.curriculum_threshold = t.get_double("train.curriculum_threshold", tr.curriculum_threshold);
  tr.aggressive_bias = t.get_double("train.aggressive_bias", tr.aggressive_bias);
  tr.early_stop_success = t.get_double("train.early_stop_success", tr.early_stop_success);
  tr.min_steps = t.get_long("train.min_steps", tr.min_steps);
  tr.log_every_episodes = t.get_long("train.log_every_episodes", tr.log_every_episodes);

  cfg.trials_per_angle = t.get_int("eval.trials_per_angle", cfg.trials_per_angle);
  cfg.sweep_max_deg = t.get_double("eval.sweep_max_deg", cfg.sweep_max_deg);
  cfg.sweep_step_deg = t.get_double("eval.sweep_step_deg", cfg.sweep_step_deg);

  DetectorConfig& det = cfg.detector;
  det.rate_hz = t.get_double("detect.rate_hz", det.rate_hz);
  det.rect.dp_eps = t.get_double("detect.dp_eps", det.rect.dp_eps);
  det.rect.rect_eps1 = t.get_double("detect.rect_eps1", det.rect.rect_eps1);
  det.rect.min_chain = t.get_int("detect.min_chain", det.rect.min_chain);
  det.filter.w1 = t.get_double("detect.lpf_w1", det.filter.w1);
  det.filter.w2 = t.get_double("detect.lpf_w2", det.filter.w2);
  det.filter.zeta = t.get_double("detect.lpf_zeta", det.filter.zeta);
  cfg.detect_dir = t.get_string("detect.dir", cfg.detect_dir);

  RenderSpec& r = cfg.render;
  r.count = t.get_int("render.count", r.count);
  r.roll_min = deg2rad(t.get_double("render.roll_min_deg", rad2deg(r.roll_min)));
  r.roll_max = deg2rad(t.get_double("render.roll_max_deg", rad2deg(r.roll_max)));
  r.range_min = t.get_double("render.range_min", r.range_min);
  r.range_max = t.get_double("render.range_max", r.range_max);
  r.lateral_std = t.get_double("render.lateral_std", r.lateral_std);
  r.height_std = t.get_double("render.height_std", r.height_std);
  r.depth_noise_rel = t.get_double("render.depth_noise_rel", r.depth_noise_rel);
  r.gap_dims = get_vec2(t, "render.gap_dims", r.gap_dims);
  r.frame_margin = t.get_double("render.frame_margin", r.frame_margin);

  return cfg;
}

void finalize_run_config(RunConfig& cfg) {
  if (cfg.attitude_reward_off) cfg.env.weights.lambda_a = 0.0;
  if (cfg.attitude_augment_off) cfg.env.episode.augment_enabled = false;
  if (cfg.trainer.metrics_path.empty()) cfg.trainer.metrics_path = cfg.out_dir + "/metrics.csv";
  if (cfg.trainer.checkpoint_path.empty()) {
    cfg.trainer.checkpoint_path = cfg.out_dir + "/policy.ckpt";
  }
}

}  // namespace gapflight
