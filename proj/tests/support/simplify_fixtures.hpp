#pragma once

// The small topologies simplification has to get right: a curving chain, an
// elbow between two ways, a loop hanging off a junction, a one-way/two-way
// transition and a node carrying a self-loop.

#include <string>
#include <vector>

#include "graphs.hpp"

namespace streetnet::testing {

struct SimplifyFixture {
  std::string name;
  StreetGraph graph;
  std::vector<NodeId> strict_nodes;      // expected survivors
  std::vector<NodeId> non_strict_nodes;
};

namespace detail {

inline void two_way(std::vector<EdgeSpec>& out, NodeId u, NodeId v, double len, osm::OsmId way) {
  out.push_back({u, v, len, false, way});
  out.push_back({v, u, len, false, way});
}

}  // namespace detail

inline std::vector<SimplifyFixture> simplify_fixtures() {
  std::vector<SimplifyFixture> out;
  using detail::two_way;

  {
    std::vector<EdgeSpec> e;
    for (NodeId i = 1; i < 5; ++i) two_way(e, i, i + 1, 100.0 + i, 10);
    out.push_back({"chain", make_graph(line_nodes(5), e), {1, 5}, {1, 5}});
  }
  {
    std::vector<EdgeSpec> e;
    two_way(e, 1, 2, 80, 10);
    two_way(e, 2, 3, 90, 10);
    two_way(e, 3, 4, 70, 11);
    two_way(e, 4, 5, 60, 11);
    out.push_back({"elbow", make_graph(line_nodes(5), e), {1, 5}, {1, 3, 5}});
  }
  {
    // 5 - 1 spur, loop 1-2-3-4-1
    std::vector<EdgeSpec> e;
    two_way(e, 5, 1, 50, 20);
    two_way(e, 1, 2, 100, 21);
    two_way(e, 2, 3, 110, 21);
    two_way(e, 3, 4, 120, 21);
    two_way(e, 4, 1, 130, 21);
    out.push_back({"ring", make_graph(line_nodes(5), e), {1, 5}, {1, 5}});
  }
  {
    // 1 <-> 2 two-way, then 2 -> 3 -> 4 one-way
    std::vector<EdgeSpec> e;
    two_way(e, 1, 2, 100, 30);
    e.push_back({2, 3, 100, true, 31});
    e.push_back({3, 4, 100, true, 31});
    out.push_back({"oneway_transition", make_graph(line_nodes(4), e), {1, 2, 4}, {1, 2, 4}});
  }
  {
    // 1 - 2 - 3 with a turnaround loop drawn as a self-loop on 2
    std::vector<EdgeSpec> e;
    two_way(e, 1, 2, 100, 40);
    two_way(e, 2, 3, 100, 40);
    e.push_back({2, 2, 250, true, 41});
    out.push_back({"self_loop", make_graph(line_nodes(3), e), {1, 2, 3}, {1, 2, 3}});
  }
  {
    // one-way chain with interstitial nodes
    std::vector<EdgeSpec> e;
    for (NodeId i = 1; i < 6; ++i) e.push_back({i, i + 1, 75, true, 50});
    out.push_back({"oneway_chain", make_graph(line_nodes(6), e), {1, 6}, {1, 6}});
  }
  return out;
}

inline double total_length(const StreetGraph& g) {
  double s = 0.0;
  for (const auto& e : g.edges()) s += e.data.length;
  return s;
}

}  // namespace streetnet::testing
