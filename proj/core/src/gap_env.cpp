#include "gapflight/gap_env.hpp"

#include <stdexcept>

namespace gapflight {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::running: return "running";
    case Verdict::success: return "success";
    case Verdict::collision: return "collision";
    case Verdict::out_of_bounds: return "out_of_bounds";
    case Verdict::timeout: return "timeout";
  }
  return "?";
}

GapEnv::GapEnv(const GapEnvConfig& cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {
  cfg_.nominal_params.validate();
  ctrl_ = AttAltController(cfg_.gains);
}

VecX GapEnv::reset() {
  ++episode_index_;
  CmdIntegrator proto;
  proto.kappa = cfg_.kappa;
  proto.z_min = cfg_.episode.box_lo.z();
  proto.z_max = cfg_.episode.box_hi.z();

  ResetResult rr = reset_episode(cfg_.episode, cfg_.nominal_params, proto, rng_);
  state_ = rr.state;
  params_ = rr.params;
  gap_ = rr.gap;
  integ_ = rr.integ;
  if (std::isfinite(roll_override_)) {
    gap_ = GapSpec::with_roll(roll_override_, gap_.center, gap_.width, gap_.height);
    gap_.frame_margin = cfg_.episode.frame_margin;
    gap_.wall_halfthick = cfg_.episode.wall_halfthick;
  }
  ctrl_.reset();
  verdict_ = Verdict::running;
  crossed_ = false;
  t_ = 0.0;
  return make_obs();
}

namespace {

QuadState interpolate_states(const QuadState& a, const QuadState& b, double frac) {
  QuadState s;
  s.p = a.p + frac * (b.p - a.p);
  s.v = a.v + frac * (b.v - a.v);
  Eigen::AngleAxisd rel(a.R.transpose() * b.R);
  s.R = a.R * Eigen::AngleAxisd(frac * rel.angle(), rel.axis()).toRotationMatrix();
  s.omega = a.omega + frac * (b.omega - a.omega);
  return s;
}

}  // namespace

EnvStep GapEnv::step(const VecX& action) {
  if (verdict_ != Verdict::running) {
    throw std::logic_error("step() after episode end; call reset()");
  }
  if (action.size() != 3) throw std::invalid_argument("action must be 3-dimensional");

  const double control_dt = 1.0 / cfg_.control_hz;
  const double physics_dt = control_dt / cfg_.physics_substeps;
  const Action a = action.head<3>();

  integ_ = integrate_action(integ_, a, control_dt);

  WrenchCmd wrench_sum;
  int n_sub = 0;
  const Vec3 p_target = target_point(gap_, cfg_.episode.delta_target);

  for (int k = 0; k < cfg_.physics_substeps; ++k) {
    const ControlResult cr = ctrl_.compute(state_, integ_, params_, 0.0, physics_dt);
    const QuadState next = step_dynamics(state_, params_, cr.wrench, physics_dt);
    wrench_sum.thrust += cr.wrench.thrust;
    wrench_sum.torque += cr.wrench.torque;
    ++n_sub;

    const TransitionFlags flags =
        check_transition(state_, next, gap_, cfg_.episode.footprint);
    if (flags.collision) {
      state_ = next;
      verdict_ = Verdict::collision;
      break;
    }
    if (flags.center_crossed && !crossed_) {
      crossed_ = true;
      crossing_state_ = interpolate_states(state_, next, flags.cross_frac);
    }
    state_ = next;

    if (!state_.finite() || state_diverged(state_) ||
        (state_.p.array() < cfg_.episode.box_lo.array()).any() ||
        (state_.p.array() > cfg_.episode.box_hi.array()).any()) {
      verdict_ = Verdict::out_of_bounds;
      break;
    }
    if (crossed_ && (state_.p - p_target).norm() <= cfg_.episode.success_radius) {
      verdict_ = Verdict::success;
      break;
    }
  }

  t_ += control_dt;
  if (verdict_ == Verdict::running && t_ >= cfg_.episode.timeout_s - 0.5 * control_dt) {
    verdict_ = Verdict::timeout;
  }

  const WrenchCmd u_mean{wrench_sum.thrust / n_sub, wrench_sum.torque / n_sub};
  const RewardBreakdown rb =
      reward(state_, gap_, u_mean, cfg_.weights, cfg_.episode.delta_target,
             cfg_.episode.approach_dist, verdict_ == Verdict::success);

  EnvStep out;
  out.obs = make_obs();
  out.reward = rb.total;
  out.done = verdict_ != Verdict::running;
  out.success = verdict_ == Verdict::success;
  out.timeout = verdict_ == Verdict::timeout;
  out.components = Vec3(rb.r_p, rb.r_a, rb.r_u);

  if (traj_log_) {
    const EulerZyx e = euler_from_rotation(state_.R);
    traj_log_->write_raw_row({
        CsvWriter::format_number(double(episode_index_)), CsvWriter::format_number(t_),
        CsvWriter::format_number(state_.p.x()), CsvWriter::format_number(state_.p.y()),
        CsvWriter::format_number(state_.p.z()), CsvWriter::format_number(state_.v.x()),
        CsvWriter::format_number(state_.v.y()), CsvWriter::format_number(state_.v.z()),
        CsvWriter::format_number(e.phi), CsvWriter::format_number(e.theta),
        CsvWriter::format_number(e.psi), CsvWriter::format_number(state_.omega.x()),
        CsvWriter::format_number(state_.omega.y()), CsvWriter::format_number(state_.omega.z()),
        CsvWriter::format_number(a.x()), CsvWriter::format_number(a.y()),
        CsvWriter::format_number(a.z()), CsvWriter::format_number(rb.r_p),
        CsvWriter::format_number(rb.r_a), CsvWriter::format_number(rb.r_u),
        CsvWriter::format_number(rb.total), verdict_name(verdict_)});
  }
  return out;
}

std::vector<std::string> GapEnv::trajectory_columns() {
  return {"episode", "t",  "px",    "py",    "pz",    "vx",  "vy",  "vz",
          "phi",     "theta", "psi", "wx",  "wy",    "wz",  "a1",  "a2",
          "a3",      "r_p",   "r_a", "r_u", "reward", "verdict"};
}

ObsVec GapEnv::make_obs() {
  double aug = 1.0;
  if (cfg_.training_mode && cfg_.episode.augment_enabled) {
    std::uniform_real_distribution<double> u(cfg_.episode.augment_lo, cfg_.episode.augment_hi);
    aug = u(rng_);
  }
  const bool noisy = cfg_.training_mode && cfg_.episode.noise_enabled;
  return observe(state_, integ_, gap_, cfg_.episode.delta_target, aug,
                 noisy ? &cfg_.episode.noise : nullptr, noisy ? &rng_ : nullptr);
}

}  // namespace gapflight
