#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gapflight/edge_ops.hpp"

using namespace gapflight;

namespace {

void fill_rect(BinaryImage& img, int x0, int y0, int x1, int y1, std::uint8_t v = 1) {
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (img.inside(x, y)) img.at(x, y) = v;
}

int count_fg(const BinaryImage& img) {
  int n = 0;
  for (auto p : img.px) n += p;
  return n;
}

// Gift wrapping, independent of the production quickhull. Collinear points on
// the boundary are skipped by preferring the farthest most-counterclockwise
// candidate.
std::vector<Vec2> jarvis_hull(const std::vector<Vec2>& pts) {
  if (pts.size() < 3) return pts;
  size_t start = 0;
  for (size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].x() < pts[start].x() ||
        (pts[i].x() == pts[start].x() && pts[i].y() < pts[start].y()))
      start = i;
  }
  std::vector<Vec2> hull;
  size_t cur = start;
  do {
    hull.push_back(pts[cur]);
    size_t best = (cur + 1) % pts.size();
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i == cur) continue;
      const Vec2 a = pts[best] - pts[cur];
      const Vec2 b = pts[i] - pts[cur];
      const double cross = a.x() * b.y() - a.y() * b.x();
      if (cross < -1e-12 || (std::abs(cross) <= 1e-12 && b.norm() > a.norm())) best = i;
    }
    cur = best;
    if (hull.size() > pts.size()) break;  // degenerate input guard
  } while (cur != start);
  return hull;
}

double shoelace(const std::vector<Vec2>& poly) {
  double s = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    s += a.x() * b.y() - a.y() * b.x();
  }
  return 0.5 * s;
}

// Rotate so the lexicographically smallest vertex comes first; hulls from the
// two algorithms then compare element by element.
std::vector<Vec2> canonical(std::vector<Vec2> poly) {
  if (poly.empty()) return poly;
  size_t lo = 0;
  for (size_t i = 1; i < poly.size(); ++i) {
    if (poly[i].x() < poly[lo].x() ||
        (poly[i].x() == poly[lo].x() && poly[i].y() < poly[lo].y()))
      lo = i;
  }
  std::rotate(poly.begin(), poly.begin() + long(lo), poly.end());
  return poly;
}

std::vector<Vec2> rect_corners(const Vec2& c, double w, double h, double angle) {
  const double ca = std::cos(angle), sa = std::sin(angle);
  std::vector<Vec2> out;
  for (const Vec2& q : {Vec2(-w / 2, -h / 2), Vec2(w / 2, -h / 2), Vec2(w / 2, h / 2),
                        Vec2(-w / 2, h / 2)}) {
    out.emplace_back(c.x() + ca * q.x() - sa * q.y(), c.y() + sa * q.x() + ca * q.y());
  }
  return out;
}

}  // namespace

TEST_CASE("closing bridges small holes without growing solid shapes") {
  BinaryImage img(40, 40);
  fill_rect(img, 8, 8, 30, 30);
  fill_rect(img, 18, 8, 19, 30, 0);  // 2-px slit through the block
  const BinaryImage closed = close_binary(img, 2);
  for (int y = 9; y <= 29; ++y) CHECK(closed.at(18, y) == 1);

  BinaryImage solid(40, 40);
  fill_rect(solid, 8, 8, 30, 30);
  const BinaryImage same = close_binary(solid, 2);
  CHECK(count_fg(same) == count_fg(solid));
  CHECK(same.px == solid.px);
}

TEST_CASE("edge detection traces a thin border around a filled block") {
  BinaryImage img(60, 50);
  fill_rect(img, 10, 12, 45, 38);
  const BinaryImage edges = canny_edges(img, 0.5, 2.0);
  // interior and far exterior stay clean
  for (int y = 16; y <= 34; ++y)
    for (int x = 14; x <= 41; ++x) CHECK(edges.at(x, y) == 0);
  CHECK(edges.at(2, 2) == 0);
  // every edge pixel hugs the boundary of the block
  int n_edge = 0;
  for (int y = 0; y < edges.height; ++y) {
    for (int x = 0; x < edges.width; ++x) {
      if (!edges.at(x, y)) continue;
      ++n_edge;
      const double dx = std::max({10 - x, 0, x - 45});
      const double dy = std::max({12 - y, 0, y - 38});
      const double inx = std::max(0, std::min(x - 10, 45 - x));
      const double iny = std::max(0, std::min(y - 12, 38 - y));
      const bool near_border = (dx + dy <= 2) || std::min(inx, iny) <= 2;
      CHECK(near_border);
    }
  }
  const int perimeter = 2 * (36 + 27);
  CHECK(n_edge > int(0.7 * perimeter));
  CHECK(n_edge < int(1.8 * perimeter));
}

TEST_CASE("edge grouping separates components and drops specks") {
  BinaryImage img(80, 60);
  fill_rect(img, 5, 5, 30, 25);
  fill_rect(img, 45, 30, 70, 50);
  const BinaryImage edges = canny_edges(img, 0.5, 2.0);
  BinaryImage with_speck = edges;
  with_speck.at(40, 5) = 1;
  with_speck.at(41, 5) = 1;
  const std::vector<PixelChain> chains = group_edges(with_speck, 20);
  REQUIRE(chains.size() == 2);
  for (const PixelChain& ch : chains) {
    CHECK(ch.size() >= 20);
    for (size_t i = 1; i < ch.size(); ++i) {
      CHECK(std::abs(ch[i].x() - ch[i - 1].x()) <= 1);
      CHECK(std::abs(ch[i].y() - ch[i - 1].y()) <= 1);
    }
  }
}

TEST_CASE("polygon simplification reduces a box outline to its corners") {
  BinaryImage img(60, 60);
  fill_rect(img, 10, 15, 48, 44);
  const BinaryImage edges = canny_edges(img, 0.5, 2.0);
  const std::vector<PixelChain> chains = group_edges(edges, 20);
  REQUIRE(chains.size() == 1);
  const std::vector<Vec2> poly = simplify_polygon(chains[0], 2.0);
  CHECK(poly.size() >= 4);
  CHECK(poly.size() <= 8);  // a couple of spurious vertices near corners are fine

  // the guarantee that matters: no chain pixel strays far from the polygon
  for (const auto& px : chains[0]) {
    const Vec2 q(double(px.x()), double(px.y()));
    double best = 1e18;
    for (size_t i = 0; i < poly.size(); ++i) {
      const Vec2& a = poly[i];
      const Vec2& b = poly[(i + 1) % poly.size()];
      const Vec2 ab = b - a;
      const double t = std::clamp((q - a).dot(ab) / std::max(ab.squaredNorm(), 1e-12), 0.0, 1.0);
      best = std::min(best, (q - (a + t * ab)).norm());
    }
    CHECK(best <= 2.0 + 1e-9);
  }
}

TEST_CASE("straight chains collapse to their endpoints") {
  PixelChain line;
  for (int i = 0; i < 30; ++i) line.emplace_back(5 + i, 7);
  const std::vector<Vec2> poly = simplify_polygon(line, 1.0);
  REQUIRE(poly.size() == 2);
  CHECK(poly.front().x() == doctest::Approx(5.0));
  CHECK(poly.back().x() == doctest::Approx(34.0));
}

TEST_CASE("convex hull matches gift wrapping on mixed point sets") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> grid(0, 40);
  std::uniform_real_distribution<double> real(-20.0, 20.0);
  std::uniform_int_distribution<int> nd(10, 120);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec2> pts;
    const int n = nd(rng);
    for (int i = 0; i < n; ++i) {
      if (trial % 2 == 0) {
        pts.emplace_back(double(grid(rng)), double(grid(rng)));  // collinear-heavy
      } else {
        pts.emplace_back(real(rng), real(rng));
      }
    }
    // duplicates happen on the grid; add a guaranteed one as well
    pts.push_back(pts.front());

    const std::vector<Vec2> ours = canonical(convex_hull(pts));
    const std::vector<Vec2> ref = canonical(jarvis_hull(pts));
    REQUIRE(ours.size() == ref.size());
    for (size_t i = 0; i < ours.size(); ++i) {
      CHECK((ours[i] - ref[i]).norm() < 1e-9);
    }
    if (ours.size() >= 3) CHECK(shoelace(ours) > 0.0);
  }
}

TEST_CASE("rectangle test accepts right angles at any orientation") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> ang(0.0, M_PI);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<Vec2> r =
        rect_corners(Vec2(3.0, -2.0), 4.0, 1.5, ang(rng));
    CHECK(is_rectangle(r));
    std::vector<Vec2> shifted = {r[2], r[3], r[0], r[1]};  // vertex order invariance
    CHECK(is_rectangle(shifted));
  }
}

TEST_CASE("rectangle test rejects skewed and extra-vertex shapes") {
  // rhombus with 60 degree angles: unit edge dot = 0.5, well past the gate
  std::vector<Vec2> rhombus = {Vec2(0, 0), Vec2(2, 0), Vec2(3, std::sqrt(3.0)),
                               Vec2(1, std::sqrt(3.0))};
  CHECK_FALSE(is_rectangle(rhombus));
  std::vector<Vec2> pentagon = {Vec2(0, 0), Vec2(2, 0), Vec2(3, 1), Vec2(1, 2), Vec2(-1, 1)};
  CHECK_FALSE(is_rectangle(pentagon));
  std::vector<Vec2> tri = {Vec2(0, 0), Vec2(2, 0), Vec2(1, 1)};
  CHECK_FALSE(is_rectangle(tri));
}

TEST_CASE("angle-difference variant of the rectangle test is not interchangeable") {
  // right angles give acos(0) = pi/2, and (pi/2 - 1)^2 is far above any
  // reasonable gate, so the variant rejects a true rectangle; measuring
  // perpendicularity through the dot product directly is the form in use.
  const std::vector<Vec2> r = rect_corners(Vec2(0.0, 0.0), 3.0, 1.0, 0.3);
  CHECK(is_rectangle(r, 0.03, RectTest::perpendicular));
  CHECK_FALSE(is_rectangle(r, 0.03, RectTest::printed_arccos));
  // it would instead accept edges meeting at about 57 degrees
  const double c = std::cos(1.0), s = std::sin(1.0);
  std::vector<Vec2> skew = {Vec2(0, 0), Vec2(2, 0), Vec2(2 + 2 * c, 2 * s), Vec2(2 * c, 2 * s)};
  CHECK_FALSE(is_rectangle(skew, 0.03, RectTest::perpendicular));
  CHECK(is_rectangle(skew, 0.03, RectTest::printed_arccos));
}
