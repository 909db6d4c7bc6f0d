#pragma once

#include "gapflight/common.hpp"

namespace gapflight {

// Pinhole camera. Camera frame: z forward, x right (image u), y down (image
// v). Depth is camera-frame z, which is what the depth raster stores.
struct CameraModel {
  Mat3 K = Mat3::Identity();   // intrinsics
  Mat3 R_wc = Mat3::Identity();  // world -> camera rotation
  Vec3 t_wc = Vec3::Zero();      // x_cam = R_wc * x_world + t_wc

  // 3x4 intrinsic matrix [K | 0] and 4x4 rigid world-to-camera transform.
  Eigen::Matrix<double, 3, 4> M1() const;
  Mat4 M2() const;

  Vec3 cam_pos() const { return -R_wc.transpose() * t_wc; }

  static CameraModel make(double fx, double fy, double cx, double cy, const Mat3& R_wc,
                          const Vec3& t_wc);
  // Camera at cam_pos looking along world +x (toward the wall): image u maps
  // to world -y, image v to world -z.
  static CameraModel forward_facing(const Vec3& cam_pos, double fx = 600.0, double fy = 600.0,
                                    double cx = 320.0, double cy = 240.0);
};

struct PixelDepth {
  Vec2 pix = Vec2::Zero();
  double depth = 0.0;   // camera-frame z
  bool in_front = false;
};

PixelDepth project_point(const Vec3& p_world, const CameraModel& cam);

// Solve M1 * M2 * [p; 1] = d * [u, v, 1] for p. Requires d > 0.
Vec3 backproject_pixel(const Vec2& pix, double depth, const CameraModel& cam);

}  // namespace gapflight
