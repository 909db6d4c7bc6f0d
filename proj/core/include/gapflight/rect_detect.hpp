#pragma once

#include <array>
#include <optional>

#include "gapflight/camera.hpp"
#include "gapflight/edge_ops.hpp"

namespace gapflight {

struct RectCandidate {
  std::array<Vec2, 4> corners_px;  // subpixel corners, counter-clockwise
  std::array<Vec3, 4> verts3d;
  Vec3 centroid = Vec3::Zero();
  Vec3 normal = Vec3::Zero();  // unit, oriented toward the camera
  double area3d = 0.0;
};

struct RectDetectConfig {
  int close_radius = 1;
  double canny_lo = 1.0, canny_hi = 2.0;  // binary-step Sobel magnitudes are ~4
  int min_chain = 20;
  double dp_eps = 2.0;
  double rect_eps1 = 0.03;
  RectTest rect_mode = RectTest::perpendicular;
  bool refine_corners = true;
  double corner_exclusion_px = 3.0;  // chain pixels this close to a corner are not fit
  int depth_patch_radius = 1;        // 3x3 median
  double min_side_px = 8.0;
};

struct RectDiagnostics {
  int n_chains = 0;
  int n_polygons = 0;   // chains surviving simplification with >= 4 vertices
  int n_rectangles = 0;
};

// Median of the valid (> 0) depths in a square patch around the pixel; the
// patch is widened once if everything in it is invalid. Returns 0 when no
// valid depth is found.
double median_patch_depth(const DepthImage& depth, int u, int v, int radius);

// Full single-frame rectangle extraction: closing, Canny, chain grouping,
// Douglas-Peucker, Quickhull, rectangle test, least-squares corner
// refinement, depth lookup, backprojection.
std::vector<RectCandidate> detect_rectangles(const BinaryImage& img, const DepthImage& depth,
                                             const CameraModel& cam,
                                             const RectDetectConfig& cfg,
                                             RectDiagnostics* diag = nullptr);

}  // namespace gapflight
