#include "gapflight/rect_detect.hpp"

#include <algorithm>

namespace gapflight {

double median_patch_depth(const DepthImage& depth, int u, int v, int radius) {
  for (int r = radius; r <= radius + 2; r += 2) {
    std::vector<float> vals;
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        const int x = u + dx, y = v + dy;
        if (x < 0 || x >= depth.width || y < 0 || y >= depth.height) continue;
        const float d = depth.at(x, y);
        if (d > 0.0f) vals.push_back(d);
      }
    }
    if (!vals.empty()) {
      std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
      return double(vals[vals.size() / 2]);
    }
  }
  return 0.0;
}

namespace {

// Reduce a 5..12 vertex hull to the four corners spanning the most area.
// Rasterized rectangle corners often chamfer into short diagonal segments
// that survive simplification; the max-area quad keeps one vertex per true
// corner and drops the chamfer points, with no tuning threshold.
std::vector<Vec2> max_area_quad(const std::vector<Vec2>& hull) {
  const size_t n = hull.size();
  auto tri2 = [&](size_t a, size_t b, size_t c) {
    const Vec2 u = hull[b] - hull[a];
    const Vec2 v = hull[c] - hull[a];
    return std::abs(u.x() * v.y() - u.y() * v.x());
  };
  double best = -1.0;
  std::array<size_t, 4> pick{0, 1, 2, 3};
  for (size_t a = 0; a < n - 3; ++a)
    for (size_t b = a + 1; b < n - 2; ++b)
      for (size_t c = b + 1; c < n - 1; ++c)
        for (size_t d = c + 1; d < n; ++d) {
          const double area2 = tri2(a, b, c) + tri2(a, c, d);
          if (area2 > best) {
            best = area2;
            pick = {a, b, c, d};
          }
        }
  return {hull[pick[0]], hull[pick[1]], hull[pick[2]], hull[pick[3]]};
}

struct LineFit {
  Vec2 point = Vec2::Zero();  // centroid of the fitted pixels
  Vec2 dir = Vec2::Zero();    // unit direction
  bool ok = false;
};

// Total least squares via the 2x2 scatter matrix eigenvector.
LineFit fit_line(const std::vector<Vec2>& pts) {
  LineFit f;
  if (pts.size() < 2) return f;
  Vec2 mean = Vec2::Zero();
  for (auto& p : pts) mean += p;
  mean /= double(pts.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (auto& p : pts) {
    const Vec2 d = p - mean;
    sxx += d.x() * d.x();
    sxy += d.x() * d.y();
    syy += d.y() * d.y();
  }
  // Principal eigenvector of [[sxx, sxy], [sxy, syy]].
  const double tr = sxx + syy;
  const double det = sxx * syy - sxy * sxy;
  const double lam = 0.5 * tr + std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
  Vec2 dir(sxy, lam - sxx);
  if (dir.norm() < 1e-9) dir = Vec2(lam - syy, sxy);
  if (dir.norm() < 1e-9) return f;
  f.point = mean;
  f.dir = dir.normalized();
  f.ok = true;
  return f;
}

std::optional<Vec2> intersect_lines(const LineFit& a, const LineFit& b) {
  const double denom = a.dir.x() * b.dir.y() - a.dir.y() * b.dir.x();
  if (std::abs(denom) < 1e-9) return std::nullopt;
  const Vec2 d = b.point - a.point;
  const double t = (d.x() * b.dir.y() - d.y() * b.dir.x()) / denom;
  return a.point + t * a.dir;
}

// One assignment + fit round: bucket chain pixels to the nearest side
// segment, drop pixels close to either end, and fit a line per side with an
// outlier trim. Corner tips blunt into short flats when rasterized, so the
// initial quad's corners can sit several pixels from the true tip along
// either edge; clamped segment distance still routes each side's pixels to
// it, and the trim discards what remains of the blunted tip cluster.
std::array<LineFit, 4> fit_sides(const std::array<Vec2, 4>& corners, const PixelChain& chain,
                                 double corner_exclusion, double window) {
  std::array<std::vector<Vec2>, 4> side_pts;
  for (auto& p : chain) {
    const Vec2 q(double(p.x()), double(p.y()));
    double best_d = window;
    int best_side = -1;
    for (int s = 0; s < 4; ++s) {
      const Vec2& a = corners[s];
      const Vec2& b = corners[(s + 1) % 4];
      const Vec2 ab = b - a;
      const double len = ab.norm();
      if (len < 1e-9) continue;
      const double t_px = std::clamp((q - a).dot(ab) / len, 0.0, len);
      if (t_px < corner_exclusion || t_px > len - corner_exclusion) continue;
      const double d = (q - (a + (t_px / len) * ab)).norm();
      if (d < best_d) {
        best_d = d;
        best_side = s;
      }
    }
    if (best_side >= 0) side_pts[best_side].push_back(q);
  }
  std::array<LineFit, 4> lines;
  for (int s = 0; s < 4; ++s) {
    std::vector<Vec2>& pts = side_pts[s];
    LineFit f = fit_line(pts);
    // Rasterized edge pixels stay within about a pixel of the true line;
    // anything further is tip spill and would lever the fit around.
    for (int round = 0; round < 2 && f.ok; ++round) {
      const Vec2 n(-f.dir.y(), f.dir.x());
      std::vector<Vec2> kept;
      kept.reserve(pts.size());
      for (auto& q : pts) {
        if (std::abs(n.dot(q - f.point)) < 1.25) kept.push_back(q);
      }
      if (kept.size() == pts.size()) break;
      pts = std::move(kept);
      f = fit_line(pts);
    }
    if (f.ok && pts.size() < 6) f.ok = false;
    lines[s] = f;
  }
  return lines;
}

std::array<Vec2, 4> intersect_corners(const std::array<LineFit, 4>& lines,
                                      const std::array<Vec2, 4>& fallback) {
  std::array<Vec2, 4> out = fallback;
  for (int c = 0; c < 4; ++c) {
    // Corner c joins side (c-1) and side c.
    const LineFit& la = lines[(c + 3) % 4];
    const LineFit& lb = lines[c];
    if (la.ok && lb.ok) {
      if (auto p = intersect_lines(la, lb)) out[c] = *p;
    }
  }
  return out;
}

// Refine integer-pixel corners: fit a line to each side's chain pixels and
// intersect adjacent lines. Two rounds, the second assigning pixels against
// the first round's lines instead of the chamfer-prone hull chords. The
// suppression step keeps the background-side pixel of each two-pixel edge
// response, so the fitted lines sit about half a pixel off the true
// boundary; each line is shifted toward the foreground to compensate before
// intersecting.
std::array<Vec2, 4> refine_corners(const std::array<Vec2, 4>& hull, const PixelChain& chain,
                                   const BinaryImage& closed, double corner_exclusion) {
  std::array<LineFit, 4> lines = fit_sides(hull, chain, corner_exclusion, 6.0);
  const std::array<Vec2, 4> pass1 = intersect_corners(lines, hull);
  lines = fit_sides(pass1, chain, corner_exclusion, 2.0);

  for (int s = 0; s < 4; ++s) {
    if (!lines[s].ok) continue;
    const Vec2 n(-lines[s].dir.y(), lines[s].dir.x());
    // Which side of the line is foreground decides the shift direction.
    auto sample = [&](const Vec2& at) {
      const int x = int(std::lround(at.x()));
      const int y = int(std::lround(at.y()));
      return closed.inside(x, y) ? int(closed.at(x, y)) : 0;
    };
    const int ahead = sample(lines[s].point + 2.0 * n);
    const int behind = sample(lines[s].point - 2.0 * n);
    if (ahead == behind) continue;  // ambiguous, leave the line alone
    // Row/column scan places the kept pixel up to one cell from the step;
    // the expected gap shrinks with obliquity.
    const double shift = 0.5 * std::max(std::abs(n.x()), std::abs(n.y()));
    lines[s].point += (ahead > behind ? shift : -shift) * n;
  }
  return intersect_corners(lines, hull);
}

double polygon_area3d(const std::array<Vec3, 4>& v) {
  Vec3 s = Vec3::Zero();
  for (int i = 0; i < 4; ++i) s += v[i].cross(v[(i + 1) % 4]);
  return 0.5 * s.norm();
}

}  // namespace

std::vector<RectCandidate> detect_rectangles(const BinaryImage& img, const DepthImage& depth,
                                             const CameraModel& cam,
                                             const RectDetectConfig& cfg,
                                             RectDiagnostics* diag) {
  const BinaryImage closed = close_binary(img, cfg.close_radius);
  const BinaryImage edges = canny_edges(closed, cfg.canny_lo, cfg.canny_hi);
  const std::vector<PixelChain> chains = group_edges(edges, cfg.min_chain);
  if (diag) *diag = RectDiagnostics{int(chains.size()), 0, 0};

  std::vector<RectCandidate> out;
  for (const auto& chain : chains) {
    std::vector<Vec2> poly = simplify_polygon(chain, cfg.dp_eps);
    if (poly.size() < 4) continue;
    if (diag) ++diag->n_polygons;

    std::vector<Vec2> hull = convex_hull(poly);
    if (hull.size() > 4 && hull.size() <= 12) hull = max_area_quad(hull);
    if (!is_rectangle(hull, cfg.rect_eps1, cfg.rect_mode)) continue;

    std::array<Vec2, 4> corners{hull[0], hull[1], hull[2], hull[3]};
    double min_side = std::numeric_limits<double>::max();
    for (int i = 0; i < 4; ++i) {
      min_side = std::min(min_side, (corners[(i + 1) % 4] - corners[i]).norm());
    }
    if (min_side < cfg.min_side_px) continue;
    if (diag) ++diag->n_rectangles;

    if (cfg.refine_corners) {
      corners = refine_corners(corners, chain, closed, cfg.corner_exclusion_px);
    }

    RectCandidate cand;
    cand.corners_px = corners;
    bool depths_ok = true;
    for (int i = 0; i < 4; ++i) {
      const int u = int(std::lround(corners[i].x()));
      const int v = int(std::lround(corners[i].y()));
      const double d = median_patch_depth(depth, u, v, cfg.depth_patch_radius);
      if (d <= 0.0) {
        depths_ok = false;
        break;
      }
      cand.verts3d[i] = backproject_pixel(corners[i], d, cam);
    }
    if (!depths_ok) continue;

    cand.centroid = 0.25 * (cand.verts3d[0] + cand.verts3d[1] + cand.verts3d[2] +
                            cand.verts3d[3]);
    Vec3 n = (cand.verts3d[2] - cand.verts3d[0]).cross(cand.verts3d[3] - cand.verts3d[1]);
    if (n.norm() < 1e-12) continue;
    n.normalize();
    if (n.dot(cam.cam_pos() - cand.centroid) < 0.0) n = -n;
    cand.normal = n;
    cand.area3d = polygon_area3d(cand.verts3d);
    out.push_back(std::move(cand));
  }
  return out;
}

}  // namespace gapflight
