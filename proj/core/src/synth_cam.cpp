#include "gapflight/synth_cam.hpp"

#include <stdexcept>

namespace gapflight {

RenderOut render_gap_scene(const SceneSpec& scene, Rng* rng) {
  const GapSpec& gap = scene.gap;
  const Vec3 n = gap.rot.col(0);  // wall normal, traversal direction
  const Vec3 cam_pos = scene.cam.cam_pos();

  if ((cam_pos - gap.center).dot(n) >= 0.0) {
    throw std::invalid_argument("render_gap_scene: camera not on the approach side");
  }

  RenderOut out;
  out.binary = BinaryImage(scene.width, scene.height);
  out.depth = DepthImage(scene.width, scene.height);

  out.truth.p = gap.center;
  out.truth.R = gap.rot;
  const EulerZyx e = euler_from_rotation(gap.rot);
  out.truth.phi = e.phi;
  out.truth.theta = e.theta;
  out.truth.psi = e.psi;

  const Mat3 Kinv = scene.cam.K.inverse();
  const Mat3 Rcw = scene.cam.R_wc.transpose();
  const double half_w = 0.5 * gap.width;
  const double half_h = 0.5 * gap.height;

  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int v = 0; v < scene.height; ++v) {
    for (int u = 0; u < scene.width; ++u) {
      // Camera-frame ray with z = 1, so the plane parameter t is the
      // camera-frame depth of the hit.
      const Vec3 dir_w = Rcw * (Kinv * Vec3(u, v, 1.0));
      const double denom = dir_w.dot(n);
      if (denom <= 1e-12) continue;  // parallel or looking away from the wall
      const double t = (gap.center - cam_pos).dot(n) / denom;
      if (t <= 0.0) continue;

      const Vec3 hit = cam_pos + t * dir_w;
      const Vec3 q = gap.rot.transpose() * (hit - gap.center);  // q.x() ~ 0
      const bool in_aperture = std::abs(q.y()) <= half_w && std::abs(q.z()) <= half_h;
      if (in_aperture) continue;  // no surface: binary 0, depth 0

      double d = t;
      if (rng && scene.depth_noise_rel > 0.0) {
        d *= 1.0 + scene.depth_noise_rel * gauss(*rng);
      }
      out.depth.at(u, v) = float(d);

      const bool in_band = std::abs(q.y()) <= half_w + gap.frame_margin &&
                           std::abs(q.z()) <= half_h + gap.frame_margin;
      if (in_band) out.binary.at(u, v) = 1;
    }
  }
  return out;
}

}  // namespace gapflight
