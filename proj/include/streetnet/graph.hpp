#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "streetnet/geometry.hpp"
#include "streetnet/osm_model.hpp"

namespace streetnet {

using NodeId = std::int64_t;
using EdgeKey = std::uint32_t;
using AttrMap = std::map<std::string, std::string>;

/// Mean Earth radius used for every great-circle length in the library.
inline constexpr double kEarthRadiusM = 6371009.0;

/// Haversine distance in meters between two lon/lat points.
double great_circle(const Point& a, const Point& b);

struct NodeRecord {
  NodeId id = 0;
  double x = 0.0;  // lon or easting
  double y = 0.0;  // lat or northing
  std::optional<int> street_count;
  std::optional<double> elevation;
  AttrMap extra;  // attributes this library does not interpret

  Point point() const { return {x, y}; }
  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct EdgeRecord {
  /// Source way ids. A single entry unless chains of different ways were
  /// merged by simplification.
  std::vector<osm::OsmId> osmid;
  double length = 0.0;
  bool oneway = false;
  /// Distinct values; empty when the tag is absent.
  std::vector<std::string> highway;
  std::vector<std::string> name;
  /// When present, runs from the u node to the v node.
  std::optional<std::vector<Point>> geometry;
  std::optional<double> grade;
  AttrMap extra;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  EdgeKey key = 0;
  EdgeRecord data;

  bool is_self_loop() const { return u == v; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Crs {
  enum class Kind { Wgs84, Utm } kind = Kind::Wgs84;
  int zone = 0;
  bool south = false;

  bool projected() const { return kind == Kind::Utm; }
  std::string to_string() const;
  static Crs parse(const std::string& text);
  friend bool operator==(const Crs&, const Crs&) = default;
};

struct GraphMeta {
  Crs crs;
  osm::NetworkType network_type = osm::NetworkType::Drive;
  bool simplified = false;
  bool directed = true;
  /// Query boundary in lon/lat degrees, when known.
  std::optional<MultiPolygon> boundary;
  AttrMap extra;

  friend bool operator==(const GraphMeta&, const GraphMeta&) = default;
};

/// Primal multidigraph of a street network. Parallel edges between the same
/// ordered node pair are told apart by dense keys assigned in insertion
/// order; self-loops are allowed. Nodes and edges keep insertion order.
class StreetGraph {
 public:
  GraphMeta meta;

  NodeRecord& add_node(NodeRecord record);
  /// Adds u->v with the next free key for that pair and returns the key.
  EdgeKey add_edge(NodeId u, NodeId v, EdgeRecord data);

  bool contains(NodeId id) const { return index_.contains(id); }
  std::size_t index_of(NodeId id) const;
  const NodeRecord& node(NodeId id) const { return nodes_[index_of(id)]; }
  NodeRecord& node(NodeId id) { return nodes_[index_of(id)]; }

  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  std::vector<NodeRecord>& nodes() { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Attribute access only; endpoints and keys are fixed once added.
  EdgeRecord& edge_data(std::size_t edge_index) { return edges_[edge_index].data; }

  /// Edge indices leaving / entering a node, in insertion order.
  const std::vector<std::size_t>& out_edges(NodeId id) const { return out_[index_of(id)]; }
  const std::vector<std::size_t>& in_edges(NodeId id) const { return in_[index_of(id)]; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }

  /// Copy restricted to the given nodes, keeping edges between them.
  template <typename Pred>
  StreetGraph induced_subgraph(Pred keep) const {
    StreetGraph out;
    out.meta = meta;
    for (const auto& n : nodes_) {
      if (keep(n)) out.add_node(n);
    }
    for (const auto& e : edges_) {
      if (out.contains(e.u) && out.contains(e.v)) out.add_edge(e.u, e.v, e.data);
    }
    return out;
  }

  friend bool operator==(const StreetGraph& a, const StreetGraph& b) {
    return a.meta == b.meta && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<NodeRecord> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::map<std::pair<NodeId, NodeId>, EdgeKey> next_key_;
};

/// Keeps ways accepted by the network type's tag filter and the nodes they
/// reference; everything else is dropped.
std::vector<osm::OsmElement> filter_elements(const std::vector<osm::OsmElement>& elements,
                                             osm::NetworkType type);

/// Builds the unsimplified graph: one edge per consecutive node pair of each
/// way, or a reciprocal pair for two-way streets (always for walk networks).
/// Throws Error(DanglingRef) when a way references a missing node.
StreetGraph build_graph(const std::vector<osm::OsmElement>& elements, osm::NetworkType type);

/// Collapses reciprocal edge pairs (same osmid, length within 1e-6 relative)
/// into single undirected edges. The result has meta.directed == false.
StreetGraph undirected_projection(const StreetGraph& g);

/// Physical street ends per node, from the undirected projection. A self-loop
/// contributes 2.
std::map<NodeId, int> streets_per_node(const StreetGraph& g);

/// Stores streets_per_node() into every NodeRecord::street_count.
void assign_street_counts(StreetGraph& g);

/// Length of an edge as the sum of great-circle lengths along its geometry,
/// or of the straight u-v chord when it has none. Expects lon/lat.
double geometric_length(const StreetGraph& g, const Edge& e);

}  // namespace streetnet
