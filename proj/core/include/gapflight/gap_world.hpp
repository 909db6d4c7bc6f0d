#pragma once

#include "gapflight/command_chain.hpp"
#include "gapflight/dynamics.hpp"

namespace gapflight {

// Tilted rectangular aperture in a wall. Column 0 of rot is the wall normal
// pointing along world +x (the traversal direction); the aperture spans
// columns 1 (width) and 2 (height). Roll is rotation about the normal.
struct GapSpec {
  Vec3 center{0.0, 0.0, 1.5};
  Mat3 rot = Mat3::Identity();
  double width = 0.70, height = 0.30;  // aperture [m]
  double frame_margin = 0.15;          // painted border width outside the aperture [m]
  double wall_halfthick = 0.025;       // collision slab half-thickness [m]

  double roll() const { return std::atan2(rot(2, 1), rot(2, 2)); }
  static GapSpec with_roll(double phi, const Vec3& center, double width, double height);
};

// 19-channel observation layout.
inline constexpr int kObsDim = 19;
inline constexpr int kObsPosErr = 0;   // signed-sqrt relative position (3)
inline constexpr int kObsVel = 3;      // world velocity (3)
inline constexpr int kObsAtt = 6;      // own roll, pitch (2)
inline constexpr int kObsOmega = 8;    // body rates (3)
inline constexpr int kObsAttErr = 11;  // relative roll, pitch vs gap (2)
inline constexpr int kObsCmd = 13;     // integrator setpoints + rates (6)
using ObsVec = Eigen::Matrix<double, kObsDim, 1>;

struct ObsNoiseStd {
  double pos_err = 0.01;          // added in signed-sqrt space
  double vel = 0.02;
  double att = deg2rad(0.5);
  double att_err = deg2rad(0.5);
  double omega = 0.0;
};

struct RewardWeights {
  double lambda_p = 1.0;
  double lambda_a = 10.0;
  double lambda_u = 0.05;
  double b_a = 0.2;       // offset inside the attitude term
  double terminal = 500.0;
};

struct RewardBreakdown {
  double total = 0.0;
  double r_p = 0.0, r_a = 0.0, r_u = 0.0;  // unweighted components
};

Vec3 target_point(const GapSpec& gap, double delta_t);

inline double signed_sqrt(double x) { return (x < 0.0 ? -1.0 : 1.0) * std::sqrt(std::abs(x)); }

// Augmentation scale z multiplies the gap attitude before subtraction
// (z = 1 at evaluation). Pass noise = nullptr for noise-free observations.
ObsVec observe(const QuadState& s, const CmdIntegrator& integ, const GapSpec& gap,
               double delta_target, double aug_scale, const ObsNoiseStd* noise, Rng* rng);

// in_approach: gap-frame |x| of the vehicle center within the approach band.
bool in_approach_region(const QuadState& s, const GapSpec& gap, double approach_dist);

RewardBreakdown reward(const QuadState& s, const GapSpec& gap, const WrenchCmd& u,
                       const RewardWeights& w, double delta_target, double approach_dist,
                       bool success);

struct Footprint {
  double length = 0.47;  // body x extent [m]
  double width = 0.17;   // body y extent [m]
};

struct TransitionFlags {
  bool collision = false;
  bool center_crossed = false;  // center moved from gap-frame x < 0 to x >= 0
  double cross_frac = 0.0;      // interpolation fraction of the crossing
};

// Sweep one physics substep. The vehicle is a flat rectangle in the body x-y
// plane sampled on a grid (corners and edge midpoints included); a sample
// whose swept segment enters the wall slab must stay inside the aperture in
// gap-frame (y, z) over the clipped sub-segment. Both clipped endpoints are
// tested; linearity makes that exact for a translating segment.
TransitionFlags check_transition(const QuadState& prev, const QuadState& next,
                                 const GapSpec& gap, const Footprint& fp,
                                 int n_len = 7, int n_wid = 5);

Vec2 curriculum_dims(double d_f, const Vec2& start_dims, const Vec2& goal_dims);
double advance_difficulty(double d_f, double rolling_success, double delta = 0.05,
                          double threshold = 0.8);

struct EpisodeConfig {
  // Gap
  Vec3 gap_center{0.0, 0.0, 1.5};
  double roll_min = deg2rad(-60.0), roll_max = deg2rad(60.0);
  double aggressive_bias = 0.0;        // prob. of forcing |roll| >= aggressive_min
  double aggressive_min = deg2rad(50.0);
  Vec2 start_dims{1.4, 1.0};
  Vec2 goal_dims{0.70, 0.30};
  double difficulty = 0.0;             // d_f in [0, 1]
  double frame_margin = 0.15;
  double wall_halfthick = 0.025;

  // Start state distribution
  Vec3 start_pos_mean{-2.0, 0.0, 1.5};  // z overridden to gap height
  double pos_std = 0.15;
  double vel_std = 0.05;
  double att_std = deg2rad(2.0);
  double param_rel_std = 0.05;          // on mass, inertia, k_thrust

  // Task
  double delta_target = 0.25;
  double success_radius = 0.15;
  double approach_dist = 0.5;
  double timeout_s = 8.0;
  Vec3 box_lo{-3.5, -2.5, 0.2};
  Vec3 box_hi{1.5, 2.5, 3.5};
  Footprint footprint;

  // Observation
  ObsNoiseStd noise;
  bool noise_enabled = true;
  bool augment_enabled = true;
  double augment_lo = 0.9, augment_hi = 1.1;
};

struct ResetResult {
  QuadState state;
  QuadParams params;
  GapSpec gap;
  CmdIntegrator integ;
};

ResetResult reset_episode(const EpisodeConfig& cfg, const QuadParams& nominal,
                          const CmdIntegrator& integ_proto, Rng& rng);

}  // namespace gapflight
