#pragma once

#include "gapflight/rect_detect.hpp"

namespace gapflight {

struct PairConfig {
  double normal_eps = 0.2;     // max angle between rectangle normals [rad]
  double coplanar_tol = 0.06;  // max out-of-plane centroid offset [m]
  double contain_slack = 0.01; // inner vertices at least this far inside [m]
};

// The frame outline pair: outer border rectangle and inner aperture
// rectangle, coplanar and nested. Among multiple valid pairs, the one with
// the largest outer area wins.
std::optional<std::pair<RectCandidate, RectCandidate>> pair_rectangles(
    const std::vector<RectCandidate>& cands, const PairConfig& cfg);

struct GapPose {
  Vec3 p = Vec3::Zero();
  double phi = 0.0, theta = 0.0, psi = 0.0;
  Mat3 R = Mat3::Identity();

  Vec6 as_vec() const {
    Vec6 v;
    v << p, phi, theta, psi;
    return v;
  }
};

// Pose from the paired outlines: center = mean of all 8 vertices; plane
// normal from a least-squares fit (oriented so the gap x-axis points away
// from the camera, the traversal direction); y-axis along the inner
// rectangle's long side, sign chosen to keep the z-axis upward.
GapPose gap_pose(const RectCandidate& outer, const RectCandidate& inner);

struct GapFilterParams {
  double w1 = 10.0, w2 = 10.0;  // [rad/s]
  double zeta = 0.9;
  int min_substeps = 4;
};

struct GapFilterState {
  Vec6 x1 = Vec6::Zero();  // filtered pose
  Vec6 x2 = Vec6::Zero();
  Vec6 x3 = Vec6::Zero();
};

// Third-order low-pass per channel, transfer function
// w1*w2^2 / ((s + w1)(s^2 + 2*zeta*w2*s + w2^2)), integrated with RK4
// substeps. Angle channels are unwrapped toward the current state first.
GapFilterState lpf_step(const GapFilterState& st, const Vec6& meas, double dt,
                        const GapFilterParams& prm);

struct DetectorConfig {
  RectDetectConfig rect;
  PairConfig pair;
  GapFilterParams filter;
  double rate_hz = 30.0;
};

struct DetectResult {
  bool found = false;
  GapPose raw;       // this frame's measurement (valid when found)
  GapPose filtered;  // LPF output (valid once any frame has been found)
  RectDiagnostics diag;
};

// Frame-sequential detector owning the filter state. The first detection
// initializes the filter at the measurement; later frames are smoothed.
// Frames with no detection propagate the filter on the last measurement.
class GapDetector {
 public:
  GapDetector(const DetectorConfig& cfg, const CameraModel& cam) : cfg_(cfg), cam_(cam) {}

  DetectResult process(const BinaryImage& img, const DepthImage& depth);
  void reset();
  const DetectorConfig& config() const { return cfg_; }

 private:
  DetectorConfig cfg_;
  CameraModel cam_;
  GapFilterState filt_;
  Vec6 last_meas_ = Vec6::Zero();
  bool have_meas_ = false;
};

}  // namespace gapflight
