#include "streetnet/simplify.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"
#include "streetnet/error.hpp"

namespace streetnet {

bool is_endpoint(const StreetGraph& g, NodeId v, SimplifyMode mode) {
  const auto& outs = g.out_edges(v);
  const auto& ins = g.in_edges(v);
  const auto& edges = g.edges();

  std::vector<NodeId> neighbors;
  for (auto i : outs) neighbors.push_back(edges[i].v);
  for (auto i : ins) neighbors.push_back(edges[i].u);
  std::sort(neighbors.begin(), neighbors.end());
  neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());

  if (std::binary_search(neighbors.begin(), neighbors.end(), v)) return true;
  if (neighbors.size() != 2) return true;

  const std::size_t degree = outs.size() + ins.size();
  if (degree != 2 && degree != 4) return true;

  // through traffic must continue cleanly: a->v->b for one-way, or all
  // four arcs exactly once for two-way
  const NodeId a = neighbors[0];
  int in_a = 0, in_b = 0, out_a = 0, out_b = 0;
  for (auto i : ins) (edges[i].u == a ? in_a : in_b)++;
  for (auto i : outs) (edges[i].v == a ? out_a : out_b)++;
  if (degree == 2) {
    const bool through = (in_a == 1 && out_b == 1) || (in_b == 1 && out_a == 1);
    if (!through) return true;
  } else if (!(in_a == 1 && in_b == 1 && out_a == 1 && out_b == 1)) {
    return true;
  }

  if (mode == SimplifyMode::NonStrict) {
    const auto& first = edges[outs.empty() ? ins.front() : outs.front()].data.osmid;
    for (auto i : outs) {
      if (edges[i].data.osmid != first) return true;
    }
    for (auto i : ins) {
      if (edges[i].data.osmid != first) return true;
    }
  }
  return false;
}

std::set<NodeId> endpoints(const StreetGraph& g, SimplifyMode mode) {
  std::set<NodeId> out;
  for (const auto& n : g.nodes()) {
    if (is_endpoint(g, n.id, mode)) out.insert(n.id);
  }
  return out;
}

namespace {

template <typename T>
void append_distinct(std::vector<T>& into, const std::vector<T>& values) {
  for (const auto& v : values) {
    if (std::find(into.begin(), into.end(), v) == into.end()) into.push_back(v);
  }
}

EdgeRecord merge_chain(const StreetGraph& g, const std::vector<std::size_t>& chain) {
  const auto& edges = g.edges();
  const Edge& first = edges[chain.front()];
  const Edge& last = edges[chain.back()];

  EdgeRecord merged;
  merged.oneway = first.data.oneway;
  std::vector<Point> geometry;
  std::map<std::string, std::vector<std::string>> extras;
  for (auto idx : chain) {
    const Edge& e = edges[idx];
    append_distinct(merged.osmid, e.data.osmid);
    append_distinct(merged.highway, e.data.highway);
    append_distinct(merged.name, e.data.name);
    merged.length += e.data.length;
    std::vector<Point> pts = e.data.geometry.value_or(
        std::vector<Point>{g.node(e.u).point(), g.node(e.v).point()});
    const std::size_t skip = geometry.empty() ? 0 : 1;
    geometry.insert(geometry.end(), pts.begin() + static_cast<std::ptrdiff_t>(skip), pts.end());
    for (const auto& [k, v] : e.data.extra) append_distinct(extras[k], {v});
  }
  merged.geometry = std::move(geometry);
  for (auto& [k, values] : extras) {
    merged.extra[k] = values.size() == 1 ? values.front() : nlohmann::json(values).dump();
  }
  const auto& nu = g.node(first.u);
  const auto& nv = g.node(last.v);
  if (nu.elevation && nv.elevation && merged.length > 0.0) {
    merged.grade = (*nv.elevation - *nu.elevation) / merged.length;
  }
  return merged;
}

}  // namespace

StreetGraph simplify_graph(const StreetGraph& g, SimplifyMode mode) {
  if (g.meta.simplified) throw Error(ErrorKind::AlreadySimplified, "graph is already simplified");

  const auto& edges = g.edges();
  std::unordered_set<NodeId> ends;
  for (const auto& n : g.nodes()) {
    if (is_endpoint(g, n.id, mode)) ends.insert(n.id);
  }

  std::vector<bool> visited(edges.size(), false);
  std::vector<std::vector<std::size_t>> chains;

  auto walk = [&](std::size_t start) {
    std::vector<std::size_t> chain{start};
    visited[start] = true;
    NodeId prev = edges[start].u;
    NodeId cur = edges[start].v;
    while (!ends.contains(cur)) {
      std::optional<std::size_t> next;
      for (auto i : g.out_edges(cur)) {
        if (!visited[i] && edges[i].v != prev) {
          next = i;
          break;
        }
      }
      if (!next) throw std::logic_error("chain walk stalled at node " + std::to_string(cur));
      visited[*next] = true;
      chain.push_back(*next);
      prev = cur;
      cur = edges[*next].v;
    }
    chains.push_back(std::move(chain));
  };

  for (const auto& n : g.nodes()) {
    if (!ends.contains(n.id)) continue;
    for (auto i : g.out_edges(n.id)) {
      if (!visited[i]) walk(i);
    }
  }

  // rings made only of interstitial nodes keep their smallest id
  std::vector<NodeId> ids;
  for (const auto& n : g.nodes()) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());
  for (NodeId id : ids) {
    const auto& outs = g.out_edges(id);
    if (std::none_of(outs.begin(), outs.end(), [&](std::size_t i) { return !visited[i]; })) continue;
    ends.insert(id);
    for (auto i : outs) {
      if (!visited[i]) walk(i);
    }
  }

  std::sort(chains.begin(), chains.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  StreetGraph out;
  out.meta = g.meta;
  out.meta.simplified = true;
  for (const auto& n : g.nodes()) {
    if (ends.contains(n.id)) out.add_node(n);
  }
  for (const auto& chain : chains) {
    const Edge& first = edges[chain.front()];
    const Edge& last = edges[chain.back()];
    if (chain.size() == 1) {
      out.add_edge(first.u, first.v, first.data);
    } else {
      out.add_edge(first.u, last.v, merge_chain(g, chain));
    }
  }
  return out;
}

}  // namespace streetnet
