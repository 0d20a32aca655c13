#include "streetnet/geo_ops.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <cmath>
#include <numbers>

#include "streetnet/adjacency.hpp"
#include "streetnet/error.hpp"

namespace streetnet::geo {

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint>;
using BgMulti = bg::model::multi_polygon<BgPolygon>;

namespace {

constexpr int kPointsPerCircle = 72;

UtmZone zone_of(const MultiPolygon& mp) { return utm_zone_for(centroid_of(mp)); }

Ring project_ring(const Ring& r, const UtmZone& z) {
  Ring out;
  out.reserve(r.size());
  for (const auto& p : r) out.push_back(to_utm(p, z));
  return out;
}

MultiPolygon project(const MultiPolygon& mp, const UtmZone& z) {
  MultiPolygon out;
  for (const auto& poly : mp) {
    Polygon q;
    q.outer = project_ring(poly.outer, z);
    for (const auto& h : poly.holes) q.holes.push_back(project_ring(h, z));
    out.push_back(std::move(q));
  }
  return out;
}

Ring unproject_ring(const Ring& r, const UtmZone& z) {
  Ring out;
  out.reserve(r.size());
  for (const auto& p : r) out.push_back(from_utm(p, z));
  return out;
}

BgMulti to_boost(const MultiPolygon& mp) {
  BgMulti out;
  for (const auto& poly : mp) {
    BgPolygon q;
    for (const auto& p : poly.outer) q.outer().emplace_back(p.x, p.y);
    for (const auto& h : poly.holes) {
      q.inners().emplace_back();
      for (const auto& p : h) q.inners().back().emplace_back(p.x, p.y);
    }
    out.push_back(std::move(q));
  }
  bg::correct(out);
  return out;
}

MultiPolygon from_boost(const BgMulti& mp) {
  MultiPolygon out;
  for (const auto& q : mp) {
    Polygon poly;
    for (const auto& p : q.outer()) poly.outer.push_back({p.x(), p.y()});
    for (const auto& h : q.inners()) {
      Ring r;
      for (const auto& p : h) r.push_back({p.x(), p.y()});
      poly.holes.push_back(std::move(r));
    }
    out.push_back(std::move(poly));
  }
  return out;
}

void validate_ring(const Ring& r) {
  if (r.size() < 4 || !(r.front() == r.back())) {
    throw Error(ErrorKind::InvalidPolygon, "polygon ring must be closed with at least 3 distinct vertices");
  }
  for (const auto& p : r) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::InvalidPolygon, "polygon has non-finite coordinates");
    }
  }
  if (!is_simple_ring(r)) throw Error(ErrorKind::InvalidPolygon, "polygon ring self-intersects");
}

}  // namespace

void validate_polygon(const MultiPolygon& polygon) {
  if (polygon.empty()) throw Error(ErrorKind::InvalidPolygon, "empty polygon");
  for (const auto& p : polygon) {
    validate_ring(p.outer);
    for (const auto& h : p.holes) validate_ring(h);
  }
}

MultiPolygon buffer_polygon(const MultiPolygon& polygon, double distance_m) {
  if (!(distance_m >= 0.0)) {
    throw Error(ErrorKind::InvalidPolygon, "buffer distance must be non-negative");
  }
  validate_polygon(polygon);
  if (distance_m == 0.0) return polygon;

  const UtmZone z = zone_of(polygon);
  const BgMulti input = to_boost(project(polygon, z));
  // round joins are chords of the offset circle; widen so they circumscribe it
  const double effective = distance_m / std::cos(std::numbers::pi / kPointsPerCircle);
  bg::strategy::buffer::distance_symmetric<double> dist(effective);
  bg::strategy::buffer::join_round join(kPointsPerCircle);
  bg::strategy::buffer::end_round end(kPointsPerCircle);
  bg::strategy::buffer::point_circle circle(kPointsPerCircle);
  bg::strategy::buffer::side_straight side;
  BgMulti result;
  bg::buffer(input, result, dist, side, join, end, circle);
  if (result.empty()) throw Error(ErrorKind::InvalidPolygon, "buffer produced no geometry");

  MultiPolygon out;
  for (const auto& poly : from_boost(result)) {
    Polygon q;
    q.outer = unproject_ring(poly.outer, z);
    for (const auto& h : poly.holes) q.holes.push_back(unproject_ring(h, z));
    out.push_back(std::move(q));
  }
  return out;
}

double area_km2(const MultiPolygon& polygon) {
  return planar_area(project(polygon, zone_of(polygon))) / 1e6;
}

BBox bbox_around(const Point& center, double distance_m) {
  constexpr double deg = 180.0 / std::numbers::pi;
  const double dlat = distance_m / kEarthRadiusM * deg;
  const double dlon = distance_m / (kEarthRadiusM * std::cos(center.y / deg)) * deg;
  return {center.y - dlat, center.x - dlon, center.y + dlat, center.x + dlon};
}

Point to_lonlat(const Crs& crs, const Point& p) {
  if (!crs.projected()) return p;
  return from_utm(p, {crs.zone, crs.south});
}

Point from_lonlat(const Crs& crs, const Point& lonlat) {
  if (!crs.projected()) return lonlat;
  return to_utm(lonlat, {crs.zone, crs.south});
}

StreetGraph truncate_graph(const StreetGraph& g, const Boundary& boundary) {
  const StreetGraph* source = &g;
  StreetGraph counted;
  const bool missing = std::any_of(g.nodes().begin(), g.nodes().end(),
                                   [](const NodeRecord& n) { return !n.street_count.has_value(); });
  if (missing) {
    counted = g;
    for (const auto& [id, count] : streets_per_node(g)) {
      if (!counted.node(id).street_count) counted.node(id).street_count = count;
    }
    source = &counted;
  }

  auto inside = [&](const NodeRecord& n) {
    const Point ll = to_lonlat(g.meta.crs, n.point());
    if (const auto* box = std::get_if<BBox>(&boundary)) return box->contains(ll);
    return contains(std::get<MultiPolygon>(boundary), ll);
  };
  StreetGraph clipped = source->induced_subgraph(inside);
  StreetGraph out = clipped.induced_subgraph([&](const NodeRecord& n) {
    return !clipped.out_edges(n.id).empty() || !clipped.in_edges(n.id).empty();
  });
  if (out.empty()) throw Error(ErrorKind::EmptyResult, "no nodes inside the truncation boundary");
  return out;
}

StreetGraph truncate_by_network_distance(const StreetGraph& g, NodeId center, double radius_m) {
  if (!(radius_m > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  const std::size_t source = g.index_of(center);
  const Adjacency adj(g);
  const auto dist = dijkstra_distances(adj, source, false, radius_m);
  return g.induced_subgraph([&](const NodeRecord& n) { return dist[g.index_of(n.id)] <= radius_m; });
}

StreetGraph project_graph(const StreetGraph& g) {
  if (g.meta.crs.projected()) throw Error(ErrorKind::AlreadyProjected, "graph is already projected");
  if (g.empty()) throw Error(ErrorKind::EmptyGraph, "cannot project an empty graph");
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& n : g.nodes()) {
    sx += n.x;
    sy += n.y;
  }
  const double count = static_cast<double>(g.node_count());
  const UtmZone z = utm_zone_for({sx / count, sy / count});

  StreetGraph out;
  out.meta = g.meta;
  out.meta.crs = Crs{Crs::Kind::Utm, z.zone, z.south};
  for (const auto& n : g.nodes()) {
    NodeRecord r = n;
    const Point p = to_utm(n.point(), z);
    r.x = p.x;
    r.y = p.y;
    out.add_node(std::move(r));
  }
  for (const auto& e : g.edges()) {
    EdgeRecord d = e.data;
    if (d.geometry) {
      for (auto& p : *d.geometry) p = to_utm(p, z);
    }
    out.add_edge(e.u, e.v, std::move(d));
  }
  return out;
}

}  // namespace streetnet::geo
