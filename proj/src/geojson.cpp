#include <cmath>

#include "streetnet/error.hpp"
#include "streetnet/geo_ops.hpp"
#include "streetnet/io.hpp"

namespace streetnet::io {

using nlohmann::json;

namespace {

double round_to(double v, double scale) { return std::round(v * scale) / scale; }

json position(const Crs& crs, const Point& p) {
  const Point ll = geo::to_lonlat(crs, p);
  return json::array({round_to(ll.x, 1e7), round_to(ll.y, 1e7)});
}

json string_or_list(const std::vector<std::string>& values) {
  if (values.empty()) return nullptr;
  if (values.size() == 1) return values.front();
  return values;
}

json ring_coords(const Ring& ring, bool want_ccw) {
  Ring r = ring;
  close_ring(r);
  if ((signed_area(r) > 0.0) != want_ccw) std::reverse(r.begin(), r.end());
  json out = json::array();
  for (const auto& p : r) out.push_back({round_to(p.x, 1e7), round_to(p.y, 1e7)});
  return out;
}

json polygon_coords(const Polygon& p) {
  json out = json::array();
  out.push_back(ring_coords(p.outer, true));
  for (const auto& h : p.holes) out.push_back(ring_coords(h, false));
  return out;
}

}  // namespace

json nodes_geojson(const StreetGraph& g) {
  json features = json::array();
  for (const auto& n : g.nodes()) {
    json props = {{"osmid", n.id}};
    if (n.street_count) props["street_count"] = *n.street_count;
    if (n.elevation) props["elevation"] = *n.elevation;
    for (const auto& [k, v] : n.extra) props[k] = v;
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", position(g.meta.crs, n.point())}}},
                        {"properties", props}});
  }
  return {{"type", "FeatureCollection"}, {"features", features}};
}

json edges_geojson(const StreetGraph& g) {
  const StreetGraph und = undirected_projection(g);
  json features = json::array();
  for (const auto& e : und.edges()) {
    const auto pts = e.data.geometry.value_or(std::vector<Point>{und.node(e.u).point(), und.node(e.v).point()});
    json coords = json::array();
    for (const auto& p : pts) coords.push_back(position(und.meta.crs, p));
    json props = {{"u", e.u},
                  {"v", e.v},
                  {"key", e.key},
                  {"length", round_to(e.data.length, 1e3)},
                  {"oneway", e.data.oneway},
                  {"highway", string_or_list(e.data.highway)},
                  {"name", string_or_list(e.data.name)}};
    props["osmid"] = e.data.osmid.size() == 1 ? json(e.data.osmid.front()) : json(e.data.osmid);
    if (e.data.grade) props["grade"] = *e.data.grade;
    for (const auto& [k, v] : e.data.extra) props[k] = v;
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                        {"properties", props}});
  }
  return {{"type", "FeatureCollection"}, {"features", features}};
}

void export_geojson(const StreetGraph& g, const std::filesystem::path& nodes_path,
                    const std::filesystem::path& edges_path) {
  if (g.empty()) throw Error(ErrorKind::EmptyGraph, "nothing to export: graph has no nodes");
  write_text(nodes_path, nodes_geojson(g).dump());
  write_text(edges_path, edges_geojson(g).dump());
}

json polygons_geojson(const std::vector<PolygonFeature>& features) {
  json out = json::array();
  for (const auto& f : features) {
    json geom;
    if (f.geometry.size() == 1) {
      geom = {{"type", "Polygon"}, {"coordinates", polygon_coords(f.geometry.front())}};
    } else {
      json polys = json::array();
      for (const auto& p : f.geometry) polys.push_back(polygon_coords(p));
      geom = {{"type", "MultiPolygon"}, {"coordinates", polys}};
    }
    out.push_back({{"type", "Feature"}, {"geometry", geom}, {"properties", f.properties}});
  }
  return {{"type", "FeatureCollection"}, {"features", out}};
}

}  // namespace streetnet::io
