#include "streetnet/adjacency.hpp"

#include <queue>

namespace streetnet {

Adjacency::Adjacency(const StreetGraph& g, const WeightFn& weight) {
  const std::size_t n = g.node_count();
  ids_.reserve(n);
  for (const auto& node : g.nodes()) ids_.push_back(node.id);

  std::vector<std::size_t> out_deg(n, 0);
  std::vector<std::size_t> in_deg(n, 0);
  const auto& edges = g.edges();
  std::vector<std::uint32_t> tail(edges.size());
  std::vector<std::uint32_t> head(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    tail[i] = static_cast<std::uint32_t>(g.index_of(edges[i].u));
    head[i] = static_cast<std::uint32_t>(g.index_of(edges[i].v));
    out_deg[tail[i]]++;
    in_deg[head[i]]++;
  }
  out_begin_.assign(n + 1, 0);
  in_begin_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    out_begin_[i + 1] = out_begin_[i] + out_deg[i];
    in_begin_[i + 1] = in_begin_[i] + in_deg[i];
  }
  out_arcs_.resize(edges.size());
  in_arcs_.resize(edges.size());
  std::vector<std::size_t> out_pos(out_begin_.begin(), out_begin_.end() - 1);
  std::vector<std::size_t> in_pos(in_begin_.begin(), in_begin_.end() - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double w = weight(edges[i]);
    out_arcs_[out_pos[tail[i]]++] = Arc{head[i], w, i};
    in_arcs_[in_pos[head[i]]++] = Arc{tail[i], w, i};
  }
}

std::vector<double> dijkstra_distances(const Adjacency& adj, std::size_t source, bool reverse,
                                       double limit) {
  std::vector<double> dist(adj.size(), kUnreachable);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& arc : reverse ? adj.in(u) : adj.out(u)) {
      const double nd = d + arc.weight;
      if (nd < dist[arc.to] && nd <= limit) {
        dist[arc.to] = nd;
        heap.emplace(nd, arc.to);
      }
    }
  }
  return dist;
}

}  // namespace streetnet
