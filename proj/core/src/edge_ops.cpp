#include "gapflight/edge_ops.hpp"

#include <stdexcept>

namespace gapflight {

namespace {

BinaryImage morph_pass(const BinaryImage& img, int radius, bool dilate) {
  // Separable square element: horizontal sweep then vertical sweep.
  BinaryImage tmp(img.width, img.height), out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      std::uint8_t v = dilate ? 0 : 1;
      for (int dx = -radius; dx <= radius; ++dx) {
        const int xx = x + dx;
        // Outside the image counts as background for both operations.
        const std::uint8_t s = img.inside(xx, y) ? img.at(xx, y) : 0;
        if (dilate) v |= s;
        else v &= s;
      }
      tmp.at(x, y) = v;
    }
  }
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      std::uint8_t v = dilate ? 0 : 1;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = y + dy;
        const std::uint8_t s = tmp.inside(x, yy) ? tmp.at(x, yy) : 0;
        if (dilate) v |= s;
        else v &= s;
      }
      out.at(x, y) = v;
    }
  }
  return out;
}

}  // namespace

BinaryImage close_binary(const BinaryImage& img, int radius) {
  if (radius < 1) throw std::invalid_argument("closing radius must be >= 1");
  return morph_pass(morph_pass(img, radius, true), radius, false);
}

BinaryImage canny_edges(const BinaryImage& img, double lo, double hi) {
  if (lo < 0.0 || hi < lo) throw std::invalid_argument("bad canny thresholds");
  const int w = img.width, h = img.height;
  std::vector<double> gx(size_t(w) * h, 0.0), gy(size_t(w) * h, 0.0), mag(size_t(w) * h, 0.0);

  auto px = [&](int x, int y) -> double {
    return img.inside(x, y) ? double(img.at(x, y)) : 0.0;
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double sx = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1));
      const double sy = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1));
      gx[size_t(y) * w + x] = sx;
      gy[size_t(y) * w + x] = sy;
      mag[size_t(y) * w + x] = std::hypot(sx, sy);
    }
  }

  // Non-maximum suppression along the signed gradient. The tie-break (strict
  // against the backward neighbor, non-strict forward) picks exactly one pixel
  // of the two-pixel-wide response a binary step produces.
  BinaryImage nms(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mag[size_t(y) * w + x];
      if (m < lo) continue;
      const double inv = 1.0 / m;
      const int dx = int(std::lround(gx[size_t(y) * w + x] * inv));
      const int dy = int(std::lround(gy[size_t(y) * w + x] * inv));
      auto mat = [&](int xx, int yy) -> double {
        return (xx >= 0 && xx < w && yy >= 0 && yy < h) ? mag[size_t(yy) * w + xx] : 0.0;
      };
      const double fwd = mat(x + dx, y + dy);
      const double bwd = mat(x - dx, y - dy);
      if (m > bwd && m >= fwd) nms.at(x, y) = 1;
    }
  }

  // Hysteresis: grow strong edges through weak ones, 8-connected.
  BinaryImage out(w, h);
  std::vector<Eigen::Vector2i> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (nms.at(x, y) && mag[size_t(y) * w + x] >= hi && !out.at(x, y)) {
        out.at(x, y) = 1;
        stack.push_back({x, y});
        while (!stack.empty()) {
          const auto p = stack.back();
          stack.pop_back();
          for (int ddy = -1; ddy <= 1; ++ddy) {
            for (int ddx = -1; ddx <= 1; ++ddx) {
              const int nx = p.x() + ddx, ny = p.y() + ddy;
              if (out.inside(nx, ny) && nms.at(nx, ny) && !out.at(nx, ny) &&
                  mag[size_t(ny) * w + nx] >= lo) {
                out.at(nx, ny) = 1;
                stack.push_back({nx, ny});
              }
            }
          }
        }
      }
    }
  }
  return out;
}

namespace {

// Neighbor scan order for tracing: 4-neighbors first keeps chains tight.
constexpr int kNbr[8][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1},
                            {1, 1}, {-1, 1}, {-1, -1}, {1, -1}};

}  // namespace

std::vector<PixelChain> group_edges(const BinaryImage& edges, int min_size) {
  const int w = edges.width, h = edges.height;
  std::vector<int> label(size_t(w) * h, -1);
  std::vector<PixelChain> components;

  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      if (!edges.at(x0, y0) || label[size_t(y0) * w + x0] >= 0) continue;
      const int id = int(components.size());
      PixelChain comp;
      std::vector<Eigen::Vector2i> stack{{x0, y0}};
      label[size_t(y0) * w + x0] = id;
      while (!stack.empty()) {
        const auto p = stack.back();
        stack.pop_back();
        comp.push_back(p);
        for (auto& d : kNbr) {
          const int nx = p.x() + d[0], ny = p.y() + d[1];
          if (edges.inside(nx, ny) && edges.at(nx, ny) && label[size_t(ny) * w + nx] < 0) {
            label[size_t(ny) * w + nx] = id;
            stack.push_back({nx, ny});
          }
        }
      }
      components.push_back(std::move(comp));
    }
  }

  // Trace each component into an ordered chain: start at a degree-1 pixel if
  // one exists (open chain), walk greedily to an unvisited neighbor, and jump
  // to the nearest unvisited pixel if the walk dead-ends.
  std::vector<PixelChain> chains;
  for (auto& comp : components) {
    if (int(comp.size()) < min_size) continue;
    std::sort(comp.begin(), comp.end(), [](const auto& a, const auto& b) {
      return a.y() != b.y() ? a.y() < b.y() : a.x() < b.x();
    });
    auto degree = [&](const Eigen::Vector2i& p) {
      int n = 0;
      for (auto& d : kNbr) {
        const int nx = p.x() + d[0], ny = p.y() + d[1];
        if (edges.inside(nx, ny) && edges.at(nx, ny)) ++n;
      }
      return n;
    };
    Eigen::Vector2i start = comp.front();
    for (auto& p : comp) {
      if (degree(p) == 1) {
        start = p;
        break;
      }
    }

    std::vector<std::uint8_t> seen(comp.size(), 0);
    auto index_of = [&](const Eigen::Vector2i& p) {
      auto it = std::lower_bound(comp.begin(), comp.end(), p, [](const auto& a, const auto& b) {
        return a.y() != b.y() ? a.y() < b.y() : a.x() < b.x();
      });
      return size_t(it - comp.begin());
    };

    PixelChain chain;
    chain.reserve(comp.size());
    Eigen::Vector2i cur = start;
    seen[index_of(cur)] = 1;
    chain.push_back(cur);
    while (chain.size() < comp.size()) {
      bool advanced = false;
      for (auto& d : kNbr) {
        const Eigen::Vector2i n(cur.x() + d[0], cur.y() + d[1]);
        if (!edges.inside(n.x(), n.y()) || !edges.at(n.x(), n.y())) continue;
        const size_t idx = index_of(n);
        if (idx < comp.size() && comp[idx] == n && !seen[idx]) {
          seen[idx] = 1;
          chain.push_back(n);
          cur = n;
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        // Dead end with pixels left (spur or noise): jump to the first
        // unvisited pixel in scan order and keep tracing.
        for (size_t i = 0; i < comp.size(); ++i) {
          if (!seen[i]) {
            seen[i] = 1;
            chain.push_back(comp[i]);
            cur = comp[i];
            break;
          }
        }
      }
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

namespace {

double point_segment_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 < 1e-12) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - a - t * ab).norm();
}

void dp_recurse(const std::vector<Vec2>& pts, size_t i0, size_t i1, double eps,
                std::vector<std::uint8_t>& keep) {
  if (i1 <= i0 + 1) return;
  double dmax = -1.0;
  size_t imax = i0;
  for (size_t i = i0 + 1; i < i1; ++i) {
    const double d = point_segment_dist(pts[i], pts[i0], pts[i1]);
    if (d > dmax) {
      dmax = d;
      imax = i;
    }
  }
  if (dmax > eps) {
    keep[imax] = 1;
    dp_recurse(pts, i0, imax, eps, keep);
    dp_recurse(pts, imax, i1, eps, keep);
  }
}

std::vector<Vec2> dp_open(const std::vector<Vec2>& pts, double eps) {
  if (pts.size() <= 2) return pts;
  std::vector<std::uint8_t> keep(pts.size(), 0);
  keep.front() = keep.back() = 1;
  dp_recurse(pts, 0, pts.size() - 1, eps, keep);
  std::vector<Vec2> out;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (keep[i]) out.push_back(pts[i]);
  }
  return out;
}

}  // namespace

std::vector<Vec2> simplify_polygon(const PixelChain& chain, double eps_px) {
  std::vector<Vec2> pts;
  pts.reserve(chain.size());
  for (auto& p : chain) pts.emplace_back(double(p.x()), double(p.y()));
  if (pts.size() <= 2) return pts;

  const bool closed = (chain.front() - chain.back()).cwiseAbs().maxCoeff() <= 1;
  if (!closed) return dp_open(pts, eps_px);

  // Split the loop at the point farthest from the start, simplify each half.
  size_t far_idx = 0;
  double far_d = -1.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double d = (pts[i] - pts[0]).squaredNorm();
    if (d > far_d) {
      far_d = d;
      far_idx = i;
    }
  }
  std::vector<Vec2> half1(pts.begin(), pts.begin() + far_idx + 1);
  std::vector<Vec2> half2(pts.begin() + far_idx, pts.end());
  half2.push_back(pts.front());  // close the loop

  const std::vector<Vec2> s1 = dp_open(half1, eps_px);
  const std::vector<Vec2> s2 = dp_open(half2, eps_px);
  std::vector<Vec2> out(s1.begin(), s1.end());
  out.insert(out.end(), s2.begin() + 1, s2.end() - 1);  // drop shared endpoints
  return out;
}

namespace {

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

void quickhull_side(const std::vector<Vec2>& pts, const Vec2& a, const Vec2& b,
                    std::vector<Vec2>& out) {
  // Points strictly left of a->b; emit in hull order between a and b.
  double dmax = 1e-12;
  ptrdiff_t imax = -1;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double d = cross2(a, b, pts[i]);
    if (d > dmax) {
      dmax = d;
      imax = ptrdiff_t(i);
    }
  }
  if (imax < 0) return;
  const Vec2 c = pts[imax];
  std::vector<Vec2> left_ac, left_cb;
  for (auto& p : pts) {
    if (cross2(a, c, p) > 1e-12) left_ac.push_back(p);
    else if (cross2(c, b, p) > 1e-12) left_cb.push_back(p);
  }
  quickhull_side(left_ac, a, c, out);
  out.push_back(c);
  quickhull_side(left_cb, c, b, out);
}

}  // namespace

std::vector<Vec2> convex_hull(const std::vector<Vec2>& points) {
  std::vector<Vec2> pts = points;
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return a == b; }),
            pts.end());
  if (pts.size() <= 2) return pts;

  const Vec2 a = pts.front(), b = pts.back();
  std::vector<Vec2> upper, lower;  // left and right of a->b respectively
  for (auto& p : pts) {
    const double s = cross2(a, b, p);
    if (s > 1e-12) upper.push_back(p);
    else if (s < -1e-12) lower.push_back(p);
  }
  // quickhull_side(S, u, v) walks u->v through points left of u->v, which is
  // a clockwise arc; reversing each arc assembles the hull counter-clockwise.
  std::vector<Vec2> out{a};
  std::vector<Vec2> chain;
  quickhull_side(lower, b, a, chain);
  std::reverse(chain.begin(), chain.end());
  out.insert(out.end(), chain.begin(), chain.end());
  out.push_back(b);
  chain.clear();
  quickhull_side(upper, a, b, chain);
  std::reverse(chain.begin(), chain.end());
  out.insert(out.end(), chain.begin(), chain.end());
  return out;
}

bool is_rectangle(const std::vector<Vec2>& hull, double eps1, RectTest mode) {
  if (hull.size() != 4) return false;
  for (int i = 0; i < 4; ++i) {
    const Vec2 e1 = (hull[(i + 1) % 4] - hull[i]).normalized();
    const Vec2 e2 = (hull[(i + 2) % 4] - hull[(i + 1) % 4]).normalized();
    const double dot = e1.dot(e2);
    if (mode == RectTest::perpendicular) {
      if (dot * dot >= eps1) return false;
    } else {
      const double t = std::acos(std::clamp(dot, -1.0, 1.0)) - 1.0;
      if (t * t >= eps1) return false;
    }
  }
  return true;
}

}  // namespace gapflight
