#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "streetnet/graph.hpp"

namespace streetnet {

/// Index-based, read-only adjacency over a StreetGraph. Node i is the i-th
/// node in graph order; every edge (parallel ones included) is one arc.
class Adjacency {
 public:
  struct Arc {
    std::uint32_t to = 0;
    double weight = 0.0;
    std::size_t edge = 0;  // index into StreetGraph::edges()
  };

  using WeightFn = std::function<double(const Edge&)>;

  explicit Adjacency(const StreetGraph& g, const WeightFn& weight = length_weight);

  static double length_weight(const Edge& e) { return e.data.length; }

  std::size_t size() const { return ids_.size(); }
  NodeId id(std::size_t i) const { return ids_[i]; }
  std::span<const Arc> out(std::size_t i) const {
    return {out_arcs_.data() + out_begin_[i], out_begin_[i + 1] - out_begin_[i]};
  }
  std::span<const Arc> in(std::size_t i) const {
    return {in_arcs_.data() + in_begin_[i], in_begin_[i + 1] - in_begin_[i]};
  }

 private:
  std::vector<NodeId> ids_;
  std::vector<std::size_t> out_begin_;
  std::vector<Arc> out_arcs_;
  std::vector<std::size_t> in_begin_;
  std::vector<Arc> in_arcs_;  // Arc::to holds the tail node here
};

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Single-source distances over out-arcs (or in-arcs when reverse is set).
/// Nodes farther than limit are left at kUnreachable.
std::vector<double> dijkstra_distances(const Adjacency& adj, std::size_t source,
                                       bool reverse = false, double limit = kUnreachable);

}  // namespace streetnet
