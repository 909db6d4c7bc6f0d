#include "gapflight/camera.hpp"

#include <stdexcept>

namespace gapflight {

Eigen::Matrix<double, 3, 4> CameraModel::M1() const {
  Eigen::Matrix<double, 3, 4> m = Eigen::Matrix<double, 3, 4>::Zero();
  m.leftCols<3>() = K;
  return m;
}

Mat4 CameraModel::M2() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = R_wc;
  m.topRightCorner<3, 1>() = t_wc;
  return m;
}

CameraModel CameraModel::make(double fx, double fy, double cx, double cy, const Mat3& R_wc,
                              const Vec3& t_wc) {
  CameraModel c;
  c.K << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
  c.R_wc = R_wc;
  c.t_wc = t_wc;
  return c;
}

CameraModel CameraModel::forward_facing(const Vec3& cam_pos, double fx, double fy, double cx,
                                        double cy) {
  Mat3 R_wc;
  // Rows are the camera axes in world coordinates.
  R_wc << 0.0, -1.0, 0.0,   // x_cam = -y_world
          0.0, 0.0, -1.0,   // y_cam = -z_world
          1.0, 0.0, 0.0;    // z_cam = +x_world
  return make(fx, fy, cx, cy, R_wc, -R_wc * cam_pos);
}

PixelDepth project_point(const Vec3& p_world, const CameraModel& cam) {
  const Vec3 pc = cam.R_wc * p_world + cam.t_wc;
  PixelDepth out;
  out.depth = pc.z();
  out.in_front = pc.z() > 0.0;
  if (out.in_front) {
    const Vec3 h = cam.K * pc;
    out.pix = Vec2(h.x() / h.z(), h.y() / h.z());
  }
  return out;
}

Vec3 backproject_pixel(const Vec2& pix, double depth, const CameraModel& cam) {
  if (!(depth > 0.0)) throw std::invalid_argument("backprojection needs positive depth");
  const Vec3 ray(depth * (pix.x() - cam.K(0, 2)) / cam.K(0, 0),
                 depth * (pix.y() - cam.K(1, 2)) / cam.K(1, 1), depth);
  return cam.R_wc.transpose() * (ray - cam.t_wc);
}

}  // namespace gapflight
