#pragma once

#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "streetnet/graph.hpp"

namespace streetnet::routing {

struct EdgeRef {
  NodeId u = 0;
  NodeId v = 0;
  EdgeKey key = 0;

  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

struct Route {
  std::vector<NodeId> nodes;
  std::vector<EdgeRef> edges;
  double total_cost = 0.0;
  /// Coordinates in the graph's CRS, edge geometries concatenated.
  std::vector<Point> geometry;
};

/// Node closest to a lon/lat point by great-circle distance; ties go to the
/// smaller id. Throws Error(EmptyGraph).
NodeId nearest_node(const StreetGraph& g, const Point& lonlat);

/// Per-edge weight. Returns nullopt when the edge lacks the attribute.
using WeightFn = std::function<std::optional<double>(const StreetGraph&, const Edge&)>;

/// Resolves an attribute name: "length", "grade", "abs_grade",
/// "elevation_change" (|dz|), "ascent" (max(dz, 0)), or any numeric extra
/// attribute stored on the edges.
WeightFn weight_by(const std::string& attribute);

/// Minimum-cost directed path. Parallel edges contribute their cheapest
/// member (lowest key on ties). Among equal-cost paths the fewest-hop ones
/// win, then the lexicographically smallest node sequence.
/// Throws Error(UnknownNode), Error(NoPath), Error(NegativeWeight),
/// Error(MissingWeight).
Route shortest_path(const StreetGraph& g, NodeId source, NodeId target,
                    const std::string& weight = "length");
Route shortest_path(const StreetGraph& g, NodeId source, NodeId target, const WeightFn& weight);

/// Sets EdgeRecord::grade = (elev(v) - elev(u)) / length on every edge.
/// Throws Error(MissingElevation).
void add_edge_grades(StreetGraph& g);

/// Route minimizing total |elevation change| instead of distance.
/// Throws Error(MissingElevation) when any node lacks elevation.
Route route_by_grade(const StreetGraph& g, NodeId source, NodeId target);

/// {"nodes": [...], "edges": [[u,v,key],...], "total_cost": c,
///  "geometry": GeoJSON LineString in lon/lat}
nlohmann::json to_json(const StreetGraph& g, const Route& route);

}  // namespace streetnet::routing
