#include "gapflight/gap_world.hpp"

namespace gapflight {

GapSpec GapSpec::with_roll(double phi, const Vec3& center, double width, double height) {
  GapSpec g;
  g.center = center;
  g.rot = rotation_from_euler(phi, 0.0, 0.0);
  g.width = width;
  g.height = height;
  return g;
}

Vec3 target_point(const GapSpec& gap, double delta_t) {
  return gap.center + delta_t * gap.rot.col(0);
}

ObsVec observe(const QuadState& s, const CmdIntegrator& integ, const GapSpec& gap,
               double delta_target, double aug_scale, const ObsNoiseStd* noise, Rng* rng) {
  ObsVec o;
  const Vec3 d = target_point(gap, delta_target) - s.p;
  for (int i = 0; i < 3; ++i) o[kObsPosErr + i] = signed_sqrt(d[i]);

  o.segment<3>(kObsVel) = s.v;

  const EulerZyx att = euler_from_rotation(s.R);
  o[kObsAtt + 0] = att.phi;
  o[kObsAtt + 1] = att.theta;

  o.segment<3>(kObsOmega) = s.omega;

  const EulerZyx gap_att = euler_from_rotation(gap.rot);
  o[kObsAttErr + 0] = gap_att.phi * aug_scale - att.phi;
  o[kObsAttErr + 1] = gap_att.theta * aug_scale - att.theta;

  o.segment<3>(kObsCmd) = integ.des;
  o.segment<3>(kObsCmd + 3) = integ.des_rate;

  if (noise && rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 3; ++i) o[kObsPosErr + i] += noise->pos_err * n(*rng);
    for (int i = 0; i < 3; ++i) o[kObsVel + i] += noise->vel * n(*rng);
    for (int i = 0; i < 2; ++i) o[kObsAtt + i] += noise->att * n(*rng);
    for (int i = 0; i < 3; ++i) o[kObsOmega + i] += noise->omega * n(*rng);
    for (int i = 0; i < 2; ++i) o[kObsAttErr + i] += noise->att_err * n(*rng);
  }
  return o;
}

bool in_approach_region(const QuadState& s, const GapSpec& gap, double approach_dist) {
  const double gx = gap.rot.col(0).dot(s.p - gap.center);
  return std::abs(gx) <= approach_dist;
}

RewardBreakdown reward(const QuadState& s, const GapSpec& gap, const WrenchCmd& u,
                       const RewardWeights& w, double delta_target, double approach_dist,
                       bool success) {
  RewardBreakdown out;
  out.r_p = -(s.p - target_point(gap, delta_target)).norm();

  if (in_approach_region(s, gap, approach_dist)) {
    const double phi_e = std::abs(wrap_pi(gap.roll() - euler_from_rotation(s.R).phi));
    // tan grows without bound toward 90 deg and flips sign past it; the
    // penalty saturates at the cap either way.
    out.r_a = (phi_e >= 0.5 * kPi) ? -50.0 : -std::min(std::tan(phi_e), 50.0);
  }

  Vec4 uvec;
  uvec << u.thrust, u.torque;
  out.r_u = -uvec.norm();

  out.total = w.lambda_p * out.r_p + w.lambda_a * (out.r_a + w.b_a) + w.lambda_u * out.r_u +
              (success ? w.terminal : 0.0);
  return out;
}

namespace {

struct GapFramePoint {
  double x, y, z;
};

GapFramePoint to_gap_frame(const Vec3& p_world, const GapSpec& gap) {
  const Vec3 q = gap.rot.transpose() * (p_world - gap.center);
  return {q.x(), q.y(), q.z()};
}

}  // namespace

TransitionFlags check_transition(const QuadState& prev, const QuadState& next,
                                 const GapSpec& gap, const Footprint& fp,
                                 int n_len, int n_wid) {
  TransitionFlags flags;

  const double half = gap.wall_halfthick;
  const double wy = 0.5 * gap.width, wz = 0.5 * gap.height;

  for (int i = 0; i < n_len && !flags.collision; ++i) {
    const double bx = -0.5 * fp.length + fp.length * i / (n_len - 1);
    for (int j = 0; j < n_wid; ++j) {
      const double by = -0.5 * fp.width + fp.width * j / (n_wid - 1);
      const Vec3 q_body(bx, by, 0.0);
      const GapFramePoint a = to_gap_frame(prev.p + prev.R * q_body, gap);
      const GapFramePoint b = to_gap_frame(next.p + next.R * q_body, gap);

      // Clip the swept segment to the slab |x| <= half.
      double t0 = 0.0, t1 = 1.0;
      const double dx = b.x - a.x;
      if (std::abs(dx) < 1e-12) {
        if (std::abs(a.x) > half) continue;  // parallel to the wall, outside it
      } else {
        double te = (-half - a.x) / dx;  // crossing of x = -half
        double tl = (half - a.x) / dx;   // crossing of x = +half
        if (te > tl) std::swap(te, tl);
        t0 = std::max(0.0, te);
        t1 = std::min(1.0, tl);
        if (t0 > t1) continue;  // segment never enters the slab
      }
      // y, z are linear in t, so containment on [t0, t1] reduces to the ends.
      for (double t : {t0, t1}) {
        const double y = a.y + t * (b.y - a.y);
        const double z = a.z + t * (b.z - a.z);
        if (std::abs(y) > wy || std::abs(z) > wz) {
          flags.collision = true;
          break;
        }
      }
      if (flags.collision) break;
    }
  }

  const double cx_prev = to_gap_frame(prev.p, gap).x;
  const double cx_next = to_gap_frame(next.p, gap).x;
  if (cx_prev < 0.0 && cx_next >= 0.0) {
    flags.center_crossed = true;
    flags.cross_frac = cx_prev / (cx_prev - cx_next);
  }
  return flags;
}

Vec2 curriculum_dims(double d_f, const Vec2& start_dims, const Vec2& goal_dims) {
  return goal_dims + (1.0 - std::clamp(d_f, 0.0, 1.0)) * (start_dims - goal_dims);
}

double advance_difficulty(double d_f, double rolling_success, double delta, double threshold) {
  if (rolling_success >= threshold) return std::min(1.0, d_f + delta);
  return d_f;
}

ResetResult reset_episode(const EpisodeConfig& cfg, const QuadParams& nominal,
                          const CmdIntegrator& integ_proto, Rng& rng) {
  ResetResult out;
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto clipped_normal = [&](double std_dev) {
    return std::clamp(n01(rng) * std_dev, -3.0 * std_dev, 3.0 * std_dev);
  };

  // Gap: roll uniform on the range, pushed into the aggressive band with
  // probability aggressive_bias (only meaningful when the range reaches it).
  double roll = cfg.roll_min + (cfg.roll_max - cfg.roll_min) * u01(rng);
  if (cfg.aggressive_bias > 0.0 && cfg.roll_max >= cfg.aggressive_min &&
      u01(rng) < cfg.aggressive_bias) {
    const double mag = cfg.aggressive_min + (cfg.roll_max - cfg.aggressive_min) * u01(rng);
    roll = (u01(rng) < 0.5) ? -mag : mag;
  }
  const Vec2 dims = curriculum_dims(cfg.difficulty, cfg.start_dims, cfg.goal_dims);
  out.gap = GapSpec::with_roll(roll, cfg.gap_center, dims.x(), dims.y());
  out.gap.frame_margin = cfg.frame_margin;
  out.gap.wall_halfthick = cfg.wall_halfthick;

  // Start state around hover in front of the wall at gap height.
  Vec3 mean = cfg.start_pos_mean;
  mean.z() = cfg.gap_center.z();
  for (int i = 0; i < 3; ++i) out.state.p[i] = mean[i] + clipped_normal(cfg.pos_std);
  for (int i = 0; i < 3; ++i) out.state.v[i] = clipped_normal(cfg.vel_std);
  out.state.R = rotation_from_euler(clipped_normal(cfg.att_std), clipped_normal(cfg.att_std),
                                    clipped_normal(cfg.att_std));
  out.state.omega.setZero();

  // Parameter randomization: relative scaling, clipped at 3 sigma.
  auto rel = [&]() {
    return std::clamp(1.0 + n01(rng) * cfg.param_rel_std, 1.0 - 3.0 * cfg.param_rel_std,
                      1.0 + 3.0 * cfg.param_rel_std);
  };
  out.params = nominal;
  out.params.mass *= rel();
  out.params.inertia *= rel();
  out.params.k_thrust *= rel();

  out.integ = integ_proto;
  out.integ.des = Vec3(0.0, 0.0, out.state.p.z());
  out.integ.des_rate.setZero();
  out.integ.clamp_events = 0;
  return out;
}

}  // namespace gapflight
