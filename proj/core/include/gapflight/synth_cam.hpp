#pragma once

#include "gapflight/gap_perception.hpp"
#include "gapflight/gap_world.hpp"

namespace gapflight {

struct SceneSpec {
  GapSpec gap;
  CameraModel cam;
  int width = 640;
  int height = 480;
  double depth_noise_rel = 0.0;  // multiplicative std, 0 = noise-free
};

struct RenderOut {
  BinaryImage binary;  // 1 = frame band (the painted border)
  DepthImage depth;    // camera-frame z of wall hits, 0 in the aperture
  GapPose truth;
};

// Per-pixel ray cast against the wall plane. The wall fills the plane; the
// frame band around the aperture renders as foreground, everything else on
// the wall as background with valid depth, the aperture as background with
// depth 0. Throws if the camera is not on the approach side of the wall.
RenderOut render_gap_scene(const SceneSpec& scene, Rng* rng = nullptr);

}  // namespace gapflight
