#pragma once

#include <optional>
#include <vector>

namespace streetnet {

/// A planar or geographic coordinate. For WGS84 data x is longitude and y
/// latitude in degrees; for projected data both are meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Closed ring; the first and last vertex are equal.
using Ring = std::vector<Point>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

using MultiPolygon = std::vector<Polygon>;

/// Geographic bounding box in degrees.
struct BBox {
  double south = 0.0;
  double west = 0.0;
  double north = 0.0;
  double east = 0.0;

  bool contains(const Point& p) const {
    return p.y >= south && p.y <= north && p.x >= west && p.x <= east;
  }
  bool has_area() const { return north > south && east > west; }
  Polygon to_polygon() const;

  friend bool operator==(const BBox&, const BBox&) = default;
};

BBox bounds_of(const MultiPolygon& mp);
BBox bounds_of(const Ring& ring);

/// Closes the ring if its last vertex differs from the first.
void close_ring(Ring& ring);

/// Shoelace area, positive for counter-clockwise rings. Same units as input.
double signed_area(const Ring& ring);
double planar_area(const Polygon& p);
double planar_area(const MultiPolygon& mp);

/// Area-weighted centroid of the polygon's outer rings. Falls back to the
/// vertex mean for degenerate rings.
Point centroid_of(const MultiPolygon& mp);

/// Even-odd point-in-polygon test. Points on an edge count as inside.
bool contains(const Polygon& p, const Point& pt);
bool contains(const MultiPolygon& mp, const Point& pt);

/// Returns true when no two non-adjacent edges of the ring intersect.
bool is_simple_ring(const Ring& ring);

}  // namespace streetnet
