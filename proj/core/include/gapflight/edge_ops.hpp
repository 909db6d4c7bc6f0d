#pragma once

#include <vector>

#include "gapflight/common.hpp"
#include "gapflight/image.hpp"

namespace gapflight {

using PixelChain = std::vector<Eigen::Vector2i>;

// Morphological closing (dilate then erode) with a square structuring element
// of half-width radius.
BinaryImage close_binary(const BinaryImage& img, int radius);

// Canny on a binary image: Sobel gradient, non-maximum suppression along the
// signed gradient direction, double-threshold hysteresis. Result is an edge
// mask about one pixel wide on the low side of each step.
BinaryImage canny_edges(const BinaryImage& img, double lo, double hi);

// 8-connected components of the edge mask, each traced into an ordered chain;
// components smaller than min_size are dropped.
std::vector<PixelChain> group_edges(const BinaryImage& edges, int min_size = 20);

// Douglas-Peucker with tolerance eps_px. Closed chains (ends 8-adjacent) are
// split at the point farthest from the start and both halves simplified; the
// returned vertex list has no duplicated closing point.
std::vector<Vec2> simplify_polygon(const PixelChain& chain, double eps_px);

// Quickhull; output in counter-clockwise order (positive shoelace area),
// collinear points removed.
std::vector<Vec2> convex_hull(const std::vector<Vec2>& points);

enum class RectTest {
  perpendicular,    // (e . e_a)^2 < eps1 on unit edge vectors
  printed_arccos,   // (arccos(e . e_a) - 1)^2 < eps1; kept for comparison
};

bool is_rectangle(const std::vector<Vec2>& hull, double eps1 = 0.03,
                  RectTest mode = RectTest::perpendicular);

}  // namespace gapflight
