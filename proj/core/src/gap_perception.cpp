#include "gapflight/gap_perception.hpp"

#include <algorithm>

#include "gapflight/dynamics.hpp"

namespace gapflight {

namespace {

// Signed distances of the inner vertices to the outer polygon's edges, in the
// outer rectangle's plane. All must be >= slack for containment.
bool contained_with_slack(const RectCandidate& outer, const RectCandidate& inner,
                          double slack) {
  const Vec3 n = outer.normal;
  const Vec3 u1 = (outer.verts3d[1] - outer.verts3d[0]).normalized();
  const Vec3 u2 = n.cross(u1);

  std::array<Vec2, 4> opoly;
  for (int i = 0; i < 4; ++i) {
    const Vec3 d = outer.verts3d[i] - outer.centroid;
    opoly[i] = Vec2(d.dot(u1), d.dot(u2));
  }
  // Ensure counter-clockwise orientation for a positive interior side.
  double area2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Vec2& a = opoly[i];
    const Vec2& b = opoly[(i + 1) % 4];
    area2 += a.x() * b.y() - b.x() * a.y();
  }
  if (area2 < 0.0) std::reverse(opoly.begin(), opoly.end());

  for (int i = 0; i < 4; ++i) {
    const Vec3 dp = inner.verts3d[i] - outer.centroid;
    const Vec3 in_plane = dp - n * n.dot(dp);
    const Vec2 q(in_plane.dot(u1), in_plane.dot(u2));
    for (int e = 0; e < 4; ++e) {
      const Vec2& a = opoly[e];
      const Vec2& b = opoly[(e + 1) % 4];
      const Vec2 ab = b - a;
      const double dist = (ab.x() * (q.y() - a.y()) - ab.y() * (q.x() - a.x())) / ab.norm();
      if (dist < slack) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<std::pair<RectCandidate, RectCandidate>> pair_rectangles(
    const std::vector<RectCandidate>& cands, const PairConfig& cfg) {
  std::optional<std::pair<RectCandidate, RectCandidate>> best;
  double best_area = 0.0;

  for (size_t i = 0; i < cands.size(); ++i) {
    for (size_t j = i + 1; j < cands.size(); ++j) {
      const RectCandidate& outer = cands[i].area3d >= cands[j].area3d ? cands[i] : cands[j];
      const RectCandidate& inner = cands[i].area3d >= cands[j].area3d ? cands[j] : cands[i];

      const double cosang = std::clamp(outer.normal.dot(inner.normal), -1.0, 1.0);
      if (std::acos(cosang) >= cfg.normal_eps) continue;
      if (std::abs(outer.normal.dot(inner.centroid - outer.centroid)) >= cfg.coplanar_tol) {
        continue;
      }
      if (inner.area3d >= outer.area3d) continue;
      if (!contained_with_slack(outer, inner, cfg.contain_slack)) continue;

      if (!best || outer.area3d > best_area) {
        best = std::make_pair(outer, inner);
        best_area = outer.area3d;
      }
    }
  }
  return best;
}

GapPose gap_pose(const RectCandidate& outer, const RectCandidate& inner) {
  GapPose pose;
  Vec3 mean = Vec3::Zero();
  for (int i = 0; i < 4; ++i) mean += outer.verts3d[i] + inner.verts3d[i];
  mean /= 8.0;
  pose.p = mean;

  // Least-squares plane over all 8 vertices.
  Eigen::Matrix<double, 8, 3> pts;
  for (int i = 0; i < 4; ++i) {
    pts.row(i) = (outer.verts3d[i] - mean).transpose();
    pts.row(4 + i) = (inner.verts3d[i] - mean).transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 8, 3>> svd(pts, Eigen::ComputeFullV);
  Vec3 n = svd.matrixV().col(2);
  // Candidate normals already point toward the camera; align the fit, then
  // flip so the gap x-axis is the traversal direction (away from the camera).
  if (n.dot(outer.normal) < 0.0) n = -n;
  const Vec3 x_axis = -n;

  // In-plane long direction: average every side of both quads, weighted by
  // squared length, after rotating the short sides a quarter turn in the
  // plane so they vote for the same axis. One rasterized edge carries up to
  // a few tenths of a degree of staircase noise at long range, and parallel
  // edges alias the pixel grid the same way; the perpendicular pair samples
  // an independent phase and averages that bias down.
  const Vec3 e01 = inner.verts3d[1] - inner.verts3d[0];
  const Vec3 e12 = inner.verts3d[2] - inner.verts3d[1];
  const Vec3 ref = (e01.norm() >= e12.norm() ? e01 : e12).normalized();
  Vec3 long_dir = Vec3::Zero();
  for (const RectCandidate* rc : {&outer, &inner}) {
    for (int i = 0; i < 4; ++i) {
      Vec3 e = rc->verts3d[(i + 1) % 4] - rc->verts3d[i];
      if (std::abs(e.normalized().dot(ref)) < 0.707) e = x_axis.cross(e);
      const double len = e.norm();
      if (len < 1e-9) continue;
      const double c = e.dot(ref) / len;
      if (std::abs(c) < 0.866) continue;
      long_dir += (c < 0.0 ? -len : len) * e;
    }
  }
  if (long_dir.norm() < 1e-9) long_dir = ref;
  Vec3 y_axis = (long_dir - x_axis * x_axis.dot(long_dir)).normalized();
  if (x_axis.cross(y_axis).z() < 0.0) y_axis = -y_axis;
  const Vec3 z_axis = x_axis.cross(y_axis);

  Mat3 R;
  R.col(0) = x_axis;
  R.col(1) = y_axis;
  R.col(2) = z_axis;
  pose.R = orthonormalize(R);

  const EulerZyx e = euler_from_rotation(pose.R);
  pose.phi = e.phi;
  pose.theta = e.theta;
  pose.psi = e.psi;
  return pose;
}

GapFilterState lpf_step(const GapFilterState& st, const Vec6& meas, double dt,
                        const GapFilterParams& prm) {
  Vec6 u = meas;
  for (int c = 3; c < 6; ++c) {
    u[c] = st.x1[c] + wrap_pi(meas[c] - st.x1[c]);
  }

  const double a0 = prm.w1 * prm.w2 * prm.w2;
  const double a1 = 2.0 * prm.zeta * prm.w1 * prm.w2 + prm.w2 * prm.w2;
  const double a2 = prm.w1 + 2.0 * prm.zeta * prm.w2;

  // Keep RK4 comfortably inside its stability region for any pole spread.
  const double pole_bound = prm.w1 + 2.0 * prm.zeta * prm.w2 + prm.w2;
  const int n_sub = std::max(prm.min_substeps, int(std::ceil(dt * pole_bound / 1.5)));
  const double h = dt / n_sub;

  struct Deriv {
    Vec6 d1, d2, d3;
  };
  auto f = [&](const Vec6& x1, const Vec6& x2, const Vec6& x3) {
    Deriv d;
    d.d1 = x2;
    d.d2 = x3;
    d.d3 = a0 * (u - x1) - a1 * x2 - a2 * x3;
    return d;
  };

  GapFilterState s = st;
  for (int k = 0; k < n_sub; ++k) {
    const Deriv k1 = f(s.x1, s.x2, s.x3);
    const Deriv k2 = f(s.x1 + 0.5 * h * k1.d1, s.x2 + 0.5 * h * k1.d2, s.x3 + 0.5 * h * k1.d3);
    const Deriv k3 = f(s.x1 + 0.5 * h * k2.d1, s.x2 + 0.5 * h * k2.d2, s.x3 + 0.5 * h * k2.d3);
    const Deriv k4 = f(s.x1 + h * k3.d1, s.x2 + h * k3.d2, s.x3 + h * k3.d3);
    s.x1 += h / 6.0 * (k1.d1 + 2.0 * k2.d1 + 2.0 * k3.d1 + k4.d1);
    s.x2 += h / 6.0 * (k1.d2 + 2.0 * k2.d2 + 2.0 * k3.d2 + k4.d2);
    s.x3 += h / 6.0 * (k1.d3 + 2.0 * k2.d3 + 2.0 * k3.d3 + k4.d3);
  }
  return s;
}

DetectResult GapDetector::process(const BinaryImage& img, const DepthImage& depth) {
  DetectResult res;
  const std::vector<RectCandidate> cands =
      detect_rectangles(img, depth, cam_, cfg_.rect, &res.diag);
  const auto pair = pair_rectangles(cands, cfg_.pair);

  const double dt = 1.0 / cfg_.rate_hz;
  if (pair) {
    res.found = true;
    res.raw = gap_pose(pair->first, pair->second);
    if (!have_meas_) {
      // Initialize at the first measurement instead of ringing up from zero.
      filt_.x1 = res.raw.as_vec();
      filt_.x2.setZero();
      filt_.x3.setZero();
      have_meas_ = true;
    } else {
      filt_ = lpf_step(filt_, res.raw.as_vec(), dt, cfg_.filter);
    }
    last_meas_ = res.raw.as_vec();
  } else if (have_meas_) {
    filt_ = lpf_step(filt_, last_meas_, dt, cfg_.filter);
  }

  if (have_meas_) {
    res.filtered.p = filt_.x1.head<3>();
    res.filtered.phi = filt_.x1[3];
    res.filtered.theta = filt_.x1[4];
    res.filtered.psi = filt_.x1[5];
    res.filtered.R = rotation_from_euler(res.filtered.phi, res.filtered.theta, res.filtered.psi);
  }
  return res;
}

void GapDetector::reset() {
  filt_ = GapFilterState{};
  last_meas_.setZero();
  have_meas_ = false;
}

}  // namespace gapflight
