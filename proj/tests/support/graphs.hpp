#pragma once

// Small hand-built graphs for tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "streetnet/graph.hpp"

namespace streetnet::testing {

struct NodeSpec {
  NodeId id;
  double x;
  double y;
};

struct EdgeSpec {
  NodeId u;
  NodeId v;
  double length;
  bool oneway = false;
  osm::OsmId osmid = 1;
};

inline StreetGraph make_graph(const std::vector<NodeSpec>& nodes, const std::vector<EdgeSpec>& edges) {
  StreetGraph g;
  for (const auto& n : nodes) g.add_node({.id = n.id, .x = n.x, .y = n.y});
  for (const auto& e : edges) {
    EdgeRecord r;
    r.osmid = {e.osmid};
    r.length = e.length;
    r.oneway = e.oneway;
    r.highway = {"residential"};
    g.add_edge(e.u, e.v, r);
  }
  return g;
}

/// Points laid out east-west near Portland, `spacing_m` apart.
inline std::vector<NodeSpec> line_nodes(int count, double spacing_m = 100.0, NodeId first_id = 1) {
  std::vector<NodeSpec> out;
  const double lat = 45.5;
  const double dlon = spacing_m / (kEarthRadiusM * std::cos(lat * M_PI / 180.0)) * 180.0 / M_PI;
  for (int i = 0; i < count; ++i) out.push_back({first_id + i, -122.6 + i * dlon, lat});
  return out;
}

struct RandomGraphOptions {
  int min_nodes = 2;
  int max_nodes = 8;
  double arc_probability = 0.35;
  bool integer_weights = true;   // exact ties
  bool allow_parallel = true;
  bool allow_self_loops = true;
};

/// Seeded random multidigraph with positive lengths and node ids that are
/// not in insertion order.
inline StreetGraph random_graph(std::mt19937_64& rng, const RandomGraphOptions& opt = {}) {
  std::uniform_int_distribution<int> nd(opt.min_nodes, opt.max_nodes);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = nd(rng);
  std::vector<NodeId> ids;
  for (int i = 0; i < n; ++i) ids.push_back(100 + ((i * 37) % 97));
  std::shuffle(ids.begin(), ids.end(), rng);
  StreetGraph g;
  for (int i = 0; i < n; ++i) {
    g.add_node({.id = ids[i], .x = -122.6 + 0.001 * unit(rng), .y = 45.5 + 0.001 * unit(rng)});
  }
  auto weight = [&] {
    if (opt.integer_weights) return static_cast<double>(1 + static_cast<int>(unit(rng) * 4));
    return 0.5 + 9.5 * unit(rng);
  };
  osm::OsmId way = 1;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b && !opt.allow_self_loops) continue;
      if (a == b && unit(rng) > 0.08) continue;
      if (unit(rng) >= opt.arc_probability) continue;
      const int copies = opt.allow_parallel && unit(rng) < 0.15 ? 2 : 1;
      for (int c = 0; c < copies; ++c) {
        EdgeRecord r;
        r.osmid = {way++};
        r.length = weight();
        g.add_edge(ids[a], ids[b], r);
      }
    }
  }
  return g;
}

}  // namespace streetnet::testing
