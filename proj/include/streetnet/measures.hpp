#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "json.hpp"
#include "streetnet/graph.hpp"

namespace streetnet::measures {

struct AreaSpec {
  enum class Source { Polygon, BBox, User };

  double km2 = 0.0;
  Source source = Source::User;
};

using NodeValues = std::map<NodeId, double>;

struct EccentricityResult {
  NodeValues eccentricity;
  double diameter = 0.0;
  double radius = 0.0;
  std::set<NodeId> center;
  std::set<NodeId> periphery;
};

struct ConnectivityResult {
  int node_connectivity = 0;
  int edge_connectivity = 0;
  double avg_node_connectivity = 0.0;
  /// False when the graph is not (strongly) connected; the two minimum-cut
  /// values are then 0 and the average still covers every pair.
  bool connected = false;
};

struct ExtendedStats {
  NodeValues avg_neighborhood_degree;
  NodeValues avg_weighted_neighborhood_degree;
  double mean_avg_neighborhood_degree = 0.0;
  double mean_avg_weighted_neighborhood_degree = 0.0;
  NodeValues degree_centrality;
  double avg_degree_centrality = 0.0;
  NodeValues clustering_coefficient;
  NodeValues weighted_clustering_coefficient;
  double avg_clustering_coefficient = 0.0;
  double avg_weighted_clustering_coefficient = 0.0;
  NodeValues pagerank;
  double pagerank_max = 0.0;
  NodeId pagerank_max_node = 0;
  double pagerank_min = 0.0;
  NodeId pagerank_min_node = 0;
  ConnectivityResult connectivity;
  ConnectivityResult connectivity_undirected;
  /// Absent when skipped for a graph that is not strongly connected.
  std::optional<EccentricityResult> eccentricity;
  NodeValues closeness_centrality;
  double avg_closeness_centrality = 0.0;
  NodeValues betweenness_centrality;
  double avg_betweenness_centrality = 0.0;
};

struct NetworkStats {
  std::size_t n = 0;
  std::size_t m = 0;
  double area_km2 = 0.0;
  double avg_node_degree = 0.0;
  std::size_t intersection_count = 0;
  double avg_streets_per_node = 0.0;
  std::map<int, std::size_t> streets_per_node_counts;
  std::map<int, double> streets_per_node_proportions;
  double total_edge_length = 0.0;
  double avg_edge_length = 0.0;
  double total_street_length = 0.0;
  double avg_street_length = 0.0;
  std::size_t street_segment_count = 0;
  double node_density = 0.0;          // per km^2
  double intersection_density = 0.0;  // per km^2
  double edge_density = 0.0;          // km per km^2
  double street_density = 0.0;        // km per km^2
  double avg_circuity = 0.0;
  double self_loop_proportion = 0.0;
  std::optional<ExtendedStats> extended;
};

/// Counts, lengths, densities, circuity and the streets-per-node
/// distribution. Street fields use the undirected projection; nodes
/// without a stored street_count get one computed from g.
/// Throws Error(EmptyGraph) / Error(InvalidArgument) for a non-positive area.
NetworkStats basic_stats(const StreetGraph& g, const AreaSpec& area);

/// Mean degree of each node's neighbors. Directed graphs follow out-edges
/// and use out-degree; undirected ones use incident edges. The weighted
/// variant weights each neighbor by the connecting edge length.
NodeValues avg_neighborhood_degree(const StreetGraph& g, bool weighted);

/// Total (in + out) degree divided by n - 1.
NodeValues degree_centrality(const StreetGraph& g);

/// Clustering coefficient on the simple undirected projection. The
/// weighted variant uses the geometric mean of length weights normalized by
/// the largest one (parallel edges contribute their shortest length).
NodeValues clustering(const StreetGraph& g, bool weighted);

/// Length-weighted Brandes betweenness, normalized by (n-1)(n-2).
NodeValues betweenness(const StreetGraph& g, unsigned workers = 0);

/// (r-1) / sum of distances to the r-1 reachable nodes, scaled by
/// (r-1)/(n-1). Distances follow edge direction outward.
NodeValues closeness(const StreetGraph& g, unsigned workers = 0);

/// Power iteration; parallel edges are separate links and dangling mass is
/// spread uniformly. Throws Error(NonConvergence) after 10n + 100 rounds.
NodeValues pagerank(const StreetGraph& g, double damping = 0.85, double tol = 1e-8);

/// Maximum number of internally node-disjoint s->t paths in the simple
/// digraph (or undirected graph); a direct edge counts as one path.
int local_node_connectivity(const StreetGraph& g, NodeId s, NodeId t, bool undirected = false);
int local_edge_connectivity(const StreetGraph& g, NodeId s, NodeId t, bool undirected = false);

ConnectivityResult connectivity_suite(const StreetGraph& g, bool undirected = false,
                                      unsigned workers = 0);

/// Length-weighted eccentricity family. Throws Error(NotStronglyConnected)
/// unless use_largest_scc is set, in which case it is computed on the
/// largest strongly connected component.
EccentricityResult eccentricity_suite(const StreetGraph& g, bool use_largest_scc = false,
                                      unsigned workers = 0);

/// Strongly connected components, largest first (ties by smallest id).
std::vector<std::vector<NodeId>> strongly_connected_components(const StreetGraph& g);

struct ExtendedOptions {
  bool eccentricity = true;
  /// Skip the eccentricity family instead of failing on graphs that are
  /// not strongly connected.
  bool skip_eccentricity_if_disconnected = false;
  bool use_largest_scc = false;
  unsigned workers = 0;  // 0 = hardware concurrency
};

NetworkStats extended_stats(const StreetGraph& g, const AreaSpec& area,
                            const ExtendedOptions& options = {});

/// Flat snake_case JSON; integer-keyed maps for distributions.
nlohmann::json to_json(const NetworkStats& stats);

}  // namespace streetnet::measures
