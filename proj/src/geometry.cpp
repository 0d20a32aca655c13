#include "streetnet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace streetnet {

Polygon BBox::to_polygon() const {
  return Polygon{{{west, south}, {east, south}, {east, north}, {west, north}, {west, south}}, {}};
}

BBox bounds_of(const Ring& ring) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  BBox b{inf, inf, -inf, -inf};
  for (const auto& p : ring) {
    b.south = std::min(b.south, p.y);
    b.north = std::max(b.north, p.y);
    b.west = std::min(b.west, p.x);
    b.east = std::max(b.east, p.x);
  }
  return b;
}

BBox bounds_of(const MultiPolygon& mp) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  BBox b{inf, inf, -inf, -inf};
  for (const auto& poly : mp) {
    const BBox r = bounds_of(poly.outer);
    b.south = std::min(b.south, r.south);
    b.north = std::max(b.north, r.north);
    b.west = std::min(b.west, r.west);
    b.east = std::max(b.east, r.east);
  }
  return b;
}

void close_ring(Ring& ring) {
  if (!ring.empty() && !(ring.front() == ring.back())) ring.push_back(ring.front());
}

double signed_area(const Ring& ring) {
  if (ring.size() < 3) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    sum += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
  }
  if (!(ring.front() == ring.back())) {
    sum += ring.back().x * ring.front().y - ring.front().x * ring.back().y;
  }
  return 0.5 * sum;
}

double planar_area(const Polygon& p) {
  double a = std::abs(signed_area(p.outer));
  for (const auto& h : p.holes) a -= std::abs(signed_area(h));
  return a;
}

double planar_area(const MultiPolygon& mp) {
  double a = 0.0;
  for (const auto& p : mp) a += planar_area(p);
  return a;
}

Point centroid_of(const MultiPolygon& mp) {
  double cx = 0.0;
  double cy = 0.0;
  double total = 0.0;
  double mx = 0.0;
  double my = 0.0;
  std::size_t count = 0;
  for (const auto& poly : mp) {
    const Ring& r = poly.outer;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      const double cross = r[i].x * r[i + 1].y - r[i + 1].x * r[i].y;
      cx += (r[i].x + r[i + 1].x) * cross;
      cy += (r[i].y + r[i + 1].y) * cross;
      total += cross;
      mx += r[i].x;
      my += r[i].y;
      ++count;
    }
  }
  if (std::abs(total) < 1e-18) {
    if (count == 0) return {};
    return {mx / static_cast<double>(count), my / static_cast<double>(count)};
  }
  return {cx / (3.0 * total), cy / (3.0 * total)};
}

namespace {

bool on_segment(const Point& a, const Point& b, const Point& p) {
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  const double scale = std::max({std::abs(b.x - a.x), std::abs(b.y - a.y), 1e-300});
  if (std::abs(cross) > 1e-12 * scale * scale + 1e-300) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
         p.y <= std::max(a.y, b.y);
}

// even-odd crossing parity; boundary handled separately
bool ring_parity(const Ring& ring, const Point& p, bool& on_edge) {
  bool inside = false;
  const std::size_t n = ring.size();
  if (n < 2) return false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if (on_segment(a, b, p)) {
      on_edge = true;
      return true;
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

int orientation(const Point& a, const Point& b, const Point& c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace

bool contains(const Polygon& poly, const Point& pt) {
  bool on_edge = false;
  bool inside = ring_parity(poly.outer, pt, on_edge);
  if (on_edge) return true;
  for (const auto& h : poly.holes) {
    bool hole_edge = false;
    const bool in_hole = ring_parity(h, pt, hole_edge);
    if (hole_edge) return true;
    if (in_hole) inside = !inside;
  }
  return inside;
}

bool contains(const MultiPolygon& mp, const Point& pt) {
  return std::any_of(mp.begin(), mp.end(), [&](const Polygon& p) { return contains(p, pt); });
}

bool is_simple_ring(const Ring& ring) {
  const std::size_t n = ring.size();
  if (n < 4) return false;
  const std::size_t segs = n - 1;
  for (std::size_t i = 0; i < segs; ++i) {
    for (std::size_t j = i + 1; j < segs; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == segs - 1);
      if (adjacent) continue;
      if (segments_intersect(ring[i], ring[i + 1], ring[j], ring[j + 1])) return false;
    }
  }
  return true;
}

}  // namespace streetnet
