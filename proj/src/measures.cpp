#include "streetnet/measures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <thread>

#include "streetnet/adjacency.hpp"
#include "streetnet/error.hpp"
#include "streetnet/geo_ops.hpp"

namespace streetnet::measures {

namespace {

unsigned resolve_workers(unsigned workers) {
  if (workers != 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, count) spread over workers. Callers write to
// per-index slots so the result does not depend on scheduling.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  if (workers <= 1 || count < 16) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

// Simple weighted digraph: parallel edges collapse to their minimum weight,
// self-loops are dropped. Targets are sorted by index.
struct SimpleDigraph {
  std::vector<NodeId> ids;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> out;

  std::size_t size() const { return ids.size(); }
  bool has_arc(std::size_t u, std::size_t v) const {
    const auto& o = out[u];
    return std::binary_search(o.begin(), o.end(), std::pair<std::uint32_t, double>{static_cast<std::uint32_t>(v), -1.0},
                              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
};

SimpleDigraph simple_digraph(const StreetGraph& g, bool symmetric) {
  symmetric = symmetric || !g.meta.directed;
  SimpleDigraph sd;
  const std::size_t n = g.node_count();
  for (const auto& node : g.nodes()) sd.ids.push_back(node.id);
  std::vector<std::map<std::uint32_t, double>> best(n);
  auto relax = [&](std::size_t u, std::size_t v, double w) {
    if (u == v) return;
    auto [it, inserted] = best[u].emplace(static_cast<std::uint32_t>(v), w);
    if (!inserted) it->second = std::min(it->second, w);
  };
  for (const auto& e : g.edges()) {
    const std::size_t u = g.index_of(e.u);
    const std::size_t v = g.index_of(e.v);
    relax(u, v, e.data.length);
    if (symmetric) relax(v, u, e.data.length);
  }
  sd.out.resize(n);
  for (std::size_t u = 0; u < n; ++u) sd.out[u].assign(best[u].begin(), best[u].end());
  return sd;
}

std::vector<double> sssp(const SimpleDigraph& sd, std::size_t source) {
  std::vector<double> dist(sd.size(), kUnreachable);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, w] : sd.out[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        heap.emplace(dist[v], v);
      }
    }
  }
  return dist;
}

NodeValues to_map(const std::vector<NodeId>& ids, const std::vector<double>& values) {
  NodeValues out;
  for (std::size_t i = 0; i < ids.size(); ++i) out.emplace(ids[i], values[i]);
  return out;
}

double mean_of(const NodeValues& values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [id, v] : values) sum += v;
  return sum / static_cast<double>(values.size());
}

void require_nonempty(const StreetGraph& g) {
  if (g.empty()) throw Error(ErrorKind::EmptyGraph, "graph has no nodes");
}

}  // namespace

NetworkStats basic_stats(const StreetGraph& g, const AreaSpec& area) {
  require_nonempty(g);
  if (!(area.km2 > 0.0)) throw Error(ErrorKind::InvalidArgument, "area must be positive");

  NetworkStats s;
  s.n = g.node_count();
  s.m = g.edge_count();
  s.area_km2 = area.km2;
  s.avg_node_degree = 2.0 * static_cast<double>(s.m) / static_cast<double>(s.n);

  std::map<NodeId, int> computed;
  const bool missing = std::any_of(g.nodes().begin(), g.nodes().end(),
                                   [](const NodeRecord& n) { return !n.street_count; });
  if (missing) computed = streets_per_node(g);
  long total_streets = 0;
  for (const auto& node : g.nodes()) {
    const int count = node.street_count ? *node.street_count : computed.at(node.id);
    s.streets_per_node_counts[count]++;
    total_streets += count;
    if (count > 1) s.intersection_count++;
  }
  s.avg_streets_per_node = static_cast<double>(total_streets) / static_cast<double>(s.n);
  for (const auto& [count, nodes] : s.streets_per_node_counts) {
    s.streets_per_node_proportions[count] = static_cast<double>(nodes) / static_cast<double>(s.n);
  }

  double loop_count = 0.0;
  double chord_sum = 0.0;
  double non_loop_length = 0.0;
  for (const auto& e : g.edges()) {
    s.total_edge_length += e.data.length;
    if (e.is_self_loop()) {
      loop_count += 1.0;
      continue;
    }
    non_loop_length += e.data.length;
    chord_sum += great_circle(geo::to_lonlat(g.meta.crs, g.node(e.u).point()),
                              geo::to_lonlat(g.meta.crs, g.node(e.v).point()));
  }
  s.avg_edge_length = s.m ? s.total_edge_length / static_cast<double>(s.m) : 0.0;
  s.avg_circuity = chord_sum > 0.0 ? non_loop_length / chord_sum : std::numeric_limits<double>::quiet_NaN();
  s.self_loop_proportion = s.m ? loop_count / static_cast<double>(s.m) : 0.0;

  const StreetGraph und = g.meta.directed ? undirected_projection(g) : g;
  s.street_segment_count = und.edge_count();
  for (const auto& e : und.edges()) s.total_street_length += e.data.length;
  s.avg_street_length =
      s.street_segment_count ? s.total_street_length / static_cast<double>(s.street_segment_count) : 0.0;

  s.node_density = static_cast<double>(s.n) / area.km2;
  s.intersection_density = static_cast<double>(s.intersection_count) / area.km2;
  s.edge_density = s.total_edge_length / 1000.0 / area.km2;
  s.street_density = s.total_street_length / 1000.0 / area.km2;
  return s;
}

NodeValues avg_neighborhood_degree(const StreetGraph& g, bool weighted) {
  NodeValues out;
  const auto& edges = g.edges();
  if (g.meta.directed) {
    for (const auto& node : g.nodes()) {
      double num = 0.0;
      double den = 0.0;
      for (auto i : g.out_edges(node.id)) {
        const double w = weighted ? edges[i].data.length : 1.0;
        num += w * static_cast<double>(g.out_edges(edges[i].v).size());
        den += w;
      }
      out[node.id] = den > 0.0 ? num / den : 0.0;
    }
    return out;
  }
  auto degree = [&](NodeId v) {
    return static_cast<double>(g.out_edges(v).size() + g.in_edges(v).size());
  };
  for (const auto& node : g.nodes()) {
    double num = 0.0;
    double den = 0.0;
    auto visit = [&](std::size_t i, NodeId other) {
      const double w = weighted ? edges[i].data.length : 1.0;
      num += w * degree(other);
      den += w;
    };
    for (auto i : g.out_edges(node.id)) visit(i, edges[i].v);
    for (auto i : g.in_edges(node.id)) visit(i, edges[i].u);
    out[node.id] = den > 0.0 ? num / den : 0.0;
  }
  return out;
}

NodeValues degree_centrality(const StreetGraph& g) {
  NodeValues out;
  const double n = static_cast<double>(g.node_count());
  for (const auto& node : g.nodes()) {
    const double deg = static_cast<double>(g.out_edges(node.id).size() + g.in_edges(node.id).size());
    out[node.id] = n > 1.0 ? deg / (n - 1.0) : 1.0;
  }
  return out;
}

NodeValues clustering(const StreetGraph& g, bool weighted) {
  const SimpleDigraph sd = simple_digraph(g, true);
  const std::size_t n = sd.size();
  double max_w = 0.0;
  for (const auto& o : sd.out) {
    for (const auto& [v, w] : o) max_w = std::max(max_w, w);
  }
  auto weight_of = [&](std::size_t u, std::size_t v) {
    const auto& o = sd.out[u];
    auto it = std::lower_bound(o.begin(), o.end(), v, [](const auto& a, std::size_t x) { return a.first < x; });
    return it->second;
  };
  std::vector<double> values(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    const auto& nb = sd.out[u];
    const std::size_t d = nb.size();
    if (d < 2) continue;
    double sum = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a + 1; b < d; ++b) {
        const std::size_t v = nb[a].first;
        const std::size_t w = nb[b].first;
        if (!sd.has_arc(v, w)) continue;
        if (!weighted) {
          sum += 1.0;
        } else if (max_w > 0.0) {
          sum += std::cbrt((nb[a].second / max_w) * (nb[b].second / max_w) * (weight_of(v, w) / max_w));
        }
      }
    }
    values[u] = 2.0 * sum / (static_cast<double>(d) * static_cast<double>(d - 1));
  }
  return to_map(sd.ids, values);
}

NodeValues betweenness(const StreetGraph& g, unsigned workers) {
  const SimpleDigraph sd = simple_digraph(g, false);
  const std::size_t n = sd.size();
  constexpr std::size_t kBlock = 32;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> partial(blocks, std::vector<double>(n, 0.0));

  parallel_for(blocks, workers, [&](std::size_t block) {
    std::vector<double>& acc = partial[block];
    std::vector<double> dist(n);
    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<std::vector<std::uint32_t>> preds(n);
    std::vector<std::size_t> order;
    for (std::size_t s = block * kBlock; s < std::min(n, (block + 1) * kBlock); ++s) {
      std::fill(dist.begin(), dist.end(), kUnreachable);
      std::fill(sigma.begin(), sigma.end(), 0.0);
      std::fill(delta.begin(), delta.end(), 0.0);
      for (auto& p : preds) p.clear();
      order.clear();
      std::vector<bool> settled(n, false);
      using Item = std::pair<double, std::size_t>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      dist[s] = 0.0;
      sigma[s] = 1.0;
      heap.emplace(0.0, s);
      while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (settled[v] || d > dist[v]) continue;
        settled[v] = true;
        order.push_back(v);
        for (const auto& [w, len] : sd.out[v]) {
          const double nd = d + len;
          if (nd < dist[w]) {
            dist[w] = nd;
            sigma[w] = sigma[v];
            preds[w].assign(1, static_cast<std::uint32_t>(v));
            heap.emplace(nd, w);
          } else if (nd == dist[w] && !settled[w]) {
            sigma[w] += sigma[v];
            preds[w].push_back(static_cast<std::uint32_t>(v));
          }
        }
      }
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t w = *it;
        for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        if (w != s) acc[w] += delta[w];
      }
    }
  });

  std::vector<double> total(n, 0.0);
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < n; ++i) total[i] += p[i];
  }
  if (n > 2) {
    const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
    for (auto& v : total) v *= scale;
  }
  return to_map(sd.ids, total);
}

NodeValues closeness(const StreetGraph& g, unsigned workers) {
  const SimpleDigraph sd = simple_digraph(g, false);
  const std::size_t n = sd.size();
  std::vector<double> values(n, 0.0);
  parallel_for(n, workers, [&](std::size_t s) {
    const auto dist = sssp(sd, s);
    double total = 0.0;
    std::size_t reachable = 0;
    for (double d : dist) {
      if (d != kUnreachable) {
        total += d;
        ++reachable;
      }
    }
    if (total > 0.0 && n > 1) {
      const double r = static_cast<double>(reachable - 1);
      values[s] = r / total * (r / static_cast<double>(n - 1));
    }
  });
  return to_map(sd.ids, values);
}

NodeValues pagerank(const StreetGraph& g, double damping, double tol) {
  require_nonempty(g);
  const Adjacency adj(g);
  const std::size_t n = adj.size();
  const double nd = static_cast<double>(n);
  std::vector<double> out_weight(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) out_weight[u] = static_cast<double>(adj.out(u).size());
  std::vector<double> x(n, 1.0 / nd);
  std::vector<double> next(n);
  const std::size_t cap = 10 * n + 100;
  for (std::size_t iter = 0; iter < cap; ++iter) {
    double dangling = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (out_weight[u] == 0.0) dangling += x[u];
    }
    for (std::size_t v = 0; v < n; ++v) {
      double in_sum = 0.0;
      for (const auto& arc : adj.in(v)) in_sum += x[arc.to] / out_weight[arc.to];
      next[v] = (1.0 - damping) / nd + damping * (in_sum + dangling / nd);
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - x[i]);
    x.swap(next);
    if (change < tol) {
      std::vector<NodeId> ids;
      for (std::size_t i = 0; i < n; ++i) ids.push_back(adj.id(i));
      return to_map(ids, x);
    }
  }
  throw Error(ErrorKind::NonConvergence,
              "pagerank did not converge within " + std::to_string(cap) + " iterations");
}

namespace {

// Unit-capacity max flow by BFS augmenting paths.
class UnitFlow {
 public:
  explicit UnitFlow(std::size_t nodes) : adj_(nodes) {}

  void add_arc(std::size_t u, std::size_t v) {
    adj_[u].push_back(arcs_.size());
    arcs_.push_back({v, 1});
    adj_[v].push_back(arcs_.size());
    arcs_.push_back({u, 0});
  }

  int max_flow(std::size_t s, std::size_t t, int cutoff = std::numeric_limits<int>::max()) {
    int flow = 0;
    std::vector<std::size_t> via(adj_.size());
    while (flow < cutoff) {
      std::vector<bool> seen(adj_.size(), false);
      std::queue<std::size_t> q;
      q.push(s);
      seen[s] = true;
      while (!q.empty() && !seen[t]) {
        const std::size_t u = q.front();
        q.pop();
        for (auto a : adj_[u]) {
          if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
            seen[arcs_[a].to] = true;
            via[arcs_[a].to] = a;
            q.push(arcs_[a].to);
          }
        }
      }
      if (!seen[t]) break;
      for (std::size_t v = t; v != s; v = arcs_[via[v] ^ 1].to) {
        arcs_[via[v]].cap -= 1;
        arcs_[via[v] ^ 1].cap += 1;
      }
      ++flow;
    }
    return flow;
  }

 private:
  struct Arc {
    std::size_t to;
    int cap;
  };
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
};

int node_flow(const SimpleDigraph& sd, std::size_t s, std::size_t t) {
  // v_in = 2v, v_out = 2v + 1
  UnitFlow flow(2 * sd.size());
  for (std::size_t v = 0; v < sd.size(); ++v) {
    flow.add_arc(2 * v, 2 * v + 1);
    for (const auto& [w, len] : sd.out[v]) flow.add_arc(2 * v + 1, 2 * w);
  }
  return flow.max_flow(2 * s + 1, 2 * t);
}

int edge_flow(const SimpleDigraph& sd, std::size_t s, std::size_t t) {
  UnitFlow flow(sd.size());
  for (std::size_t v = 0; v < sd.size(); ++v) {
    for (const auto& [w, len] : sd.out[v]) flow.add_arc(v, w);
  }
  return flow.max_flow(s, t);
}

bool strongly_connected(const SimpleDigraph& sd) {
  const std::size_t n = sd.size();
  if (n == 0) return false;
  auto reach_all = [&](bool reverse) {
    std::vector<std::vector<std::uint32_t>> rev;
    if (reverse) {
      rev.resize(n);
      for (std::size_t u = 0; u < n; ++u) {
        for (const auto& [v, w] : sd.out[u]) rev[v].push_back(static_cast<std::uint32_t>(u));
      }
    }
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      auto visit = [&](std::size_t v) {
        if (!seen[v]) {
          seen[v] = true;
          ++count;
          stack.push_back(v);
        }
      };
      if (reverse) {
        for (auto v : rev[u]) visit(v);
      } else {
        for (const auto& [v, w] : sd.out[u]) visit(v);
      }
    }
    return count == n;
  };
  return reach_all(false) && reach_all(true);
}

}  // namespace

int local_node_connectivity(const StreetGraph& g, NodeId s, NodeId t, bool undirected) {
  const SimpleDigraph sd = simple_digraph(g, undirected);
  const std::size_t si = g.index_of(s);
  const std::size_t ti = g.index_of(t);
  if (si == ti) throw Error(ErrorKind::InvalidArgument, "source and target must differ");
  return node_flow(sd, si, ti);
}

int local_edge_connectivity(const StreetGraph& g, NodeId s, NodeId t, bool undirected) {
  const SimpleDigraph sd = simple_digraph(g, undirected);
  const std::size_t si = g.index_of(s);
  const std::size_t ti = g.index_of(t);
  if (si == ti) throw Error(ErrorKind::InvalidArgument, "source and target must differ");
  return edge_flow(sd, si, ti);
}

ConnectivityResult connectivity_suite(const StreetGraph& g, bool undirected, unsigned workers) {
  const SimpleDigraph sd = simple_digraph(g, undirected);
  const std::size_t n = sd.size();
  ConnectivityResult r;
  if (n < 2) return r;

  // local connectivity for every ordered pair, one row per source
  std::vector<std::vector<int>> kappa(n, std::vector<int>(n, 0));
  parallel_for(n, workers, [&](std::size_t s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (t != s) kappa[s][t] = node_flow(sd, s, t);
    }
  });
  long total = 0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (t != s) total += kappa[s][t];
    }
  }
  r.avg_node_connectivity = static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(n - 1));

  r.connected = strongly_connected(sd);
  if (!r.connected) return r;

  int node_min = static_cast<int>(n - 1);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (t != s && !sd.has_arc(s, t)) node_min = std::min(node_min, kappa[s][t]);
    }
  }
  r.node_connectivity = node_min;

  int edge_min = std::numeric_limits<int>::max();
  for (std::size_t t = 1; t < n; ++t) {
    edge_min = std::min(edge_min, edge_flow(sd, 0, t));
    if (g.meta.directed && !undirected) edge_min = std::min(edge_min, edge_flow(sd, t, 0));
  }
  r.edge_connectivity = edge_min;
  return r;
}

std::vector<std::vector<NodeId>> strongly_connected_components(const StreetGraph& g) {
  // iterative Tarjan
  const SimpleDigraph sd = simple_digraph(g, false);
  const std::size_t n = sd.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kNone);
  std::vector<std::size_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<NodeId>> comps;
  std::size_t counter = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < sd.out[v].size()) {
        const std::size_t w = sd.out[v][pos++].first;
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<NodeId> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(sd.ids[w]);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
      const std::size_t finished = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
    }
  }
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return comps;
}

EccentricityResult eccentricity_suite(const StreetGraph& g, bool use_largest_scc, unsigned workers) {
  require_nonempty(g);
  const auto comps = strongly_connected_components(g);
  const StreetGraph* target = &g;
  StreetGraph largest;
  if (comps.size() > 1) {
    if (!use_largest_scc) {
      throw Error(ErrorKind::NotStronglyConnected,
                  "graph has " + std::to_string(comps.size()) + " strongly connected components");
    }
    const std::set<NodeId> keep(comps.front().begin(), comps.front().end());
    largest = g.induced_subgraph([&](const NodeRecord& n) { return keep.contains(n.id); });
    target = &largest;
  }
  const SimpleDigraph sd = simple_digraph(*target, false);
  const std::size_t n = sd.size();
  std::vector<double> ecc(n, 0.0);
  parallel_for(n, workers, [&](std::size_t s) {
    const auto dist = sssp(sd, s);
    ecc[s] = *std::max_element(dist.begin(), dist.end());
  });
  EccentricityResult r;
  r.eccentricity = to_map(sd.ids, ecc);
  r.diameter = *std::max_element(ecc.begin(), ecc.end());
  r.radius = *std::min_element(ecc.begin(), ecc.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (ecc[i] == r.radius) r.center.insert(sd.ids[i]);
    if (ecc[i] == r.diameter) r.periphery.insert(sd.ids[i]);
  }
  return r;
}

NetworkStats extended_stats(const StreetGraph& g, const AreaSpec& area, const ExtendedOptions& options) {
  NetworkStats stats = basic_stats(g, area);
  ExtendedStats x;
  x.avg_neighborhood_degree = avg_neighborhood_degree(g, false);
  x.avg_weighted_neighborhood_degree = avg_neighborhood_degree(g, true);
  x.mean_avg_neighborhood_degree = mean_of(x.avg_neighborhood_degree);
  x.mean_avg_weighted_neighborhood_degree = mean_of(x.avg_weighted_neighborhood_degree);
  x.degree_centrality = degree_centrality(g);
  x.avg_degree_centrality = mean_of(x.degree_centrality);
  x.clustering_coefficient = clustering(g, false);
  x.weighted_clustering_coefficient = clustering(g, true);
  x.avg_clustering_coefficient = mean_of(x.clustering_coefficient);
  x.avg_weighted_clustering_coefficient = mean_of(x.weighted_clustering_coefficient);

  x.pagerank = pagerank(g);
  auto [lo, hi] = std::minmax_element(x.pagerank.begin(), x.pagerank.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
  x.pagerank_min = lo->second;
  x.pagerank_min_node = lo->first;
  x.pagerank_max = hi->second;
  x.pagerank_max_node = hi->first;

  x.connectivity = connectivity_suite(g, false, options.workers);
  x.connectivity_undirected = connectivity_suite(g, true, options.workers);

  if (options.eccentricity) {
    try {
      x.eccentricity = eccentricity_suite(g, options.use_largest_scc, options.workers);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotStronglyConnected || !options.skip_eccentricity_if_disconnected) throw;
    }
  }
  x.closeness_centrality = closeness(g, options.workers);
  x.avg_closeness_centrality = mean_of(x.closeness_centrality);
  x.betweenness_centrality = betweenness(g, options.workers);
  x.avg_betweenness_centrality = mean_of(x.betweenness_centrality);
  stats.extended = std::move(x);
  return stats;
}

namespace {

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json node_map(const NodeValues& values) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [id, v] : values) out[std::to_string(id)] = number(v);
  return out;
}

}  // namespace

nlohmann::json to_json(const NetworkStats& s) {
  nlohmann::json j;
  j["n"] = s.n;
  j["m"] = s.m;
  j["area_km2"] = number(s.area_km2);
  j["avg_node_degree"] = number(s.avg_node_degree);
  j["intersection_count"] = s.intersection_count;
  j["avg_streets_per_node"] = number(s.avg_streets_per_node);
  j["streets_per_node_counts"] = nlohmann::json::object();
  for (const auto& [k, v] : s.streets_per_node_counts) j["streets_per_node_counts"][std::to_string(k)] = v;
  j["streets_per_node_proportions"] = nlohmann::json::object();
  for (const auto& [k, v] : s.streets_per_node_proportions) {
    j["streets_per_node_proportions"][std::to_string(k)] = number(v);
  }
  j["total_edge_length"] = number(s.total_edge_length);
  j["avg_edge_length"] = number(s.avg_edge_length);
  j["total_street_length"] = number(s.total_street_length);
  j["avg_street_length"] = number(s.avg_street_length);
  j["street_segment_count"] = s.street_segment_count;
  j["node_density"] = number(s.node_density);
  j["intersection_density"] = number(s.intersection_density);
  j["edge_density"] = number(s.edge_density);
  j["street_density"] = number(s.street_density);
  j["avg_circuity"] = number(s.avg_circuity);
  j["self_loop_proportion"] = number(s.self_loop_proportion);
  if (!s.extended) return j;

  const ExtendedStats& x = *s.extended;
  j["avg_neighborhood_degree"] = node_map(x.avg_neighborhood_degree);
  j["mean_avg_neighborhood_degree"] = number(x.mean_avg_neighborhood_degree);
  j["avg_weighted_neighborhood_degree"] = node_map(x.avg_weighted_neighborhood_degree);
  j["mean_avg_weighted_neighborhood_degree"] = number(x.mean_avg_weighted_neighborhood_degree);
  j["degree_centrality"] = node_map(x.degree_centrality);
  j["avg_degree_centrality"] = number(x.avg_degree_centrality);
  j["clustering_coefficient"] = node_map(x.clustering_coefficient);
  j["avg_clustering_coefficient"] = number(x.avg_clustering_coefficient);
  j["weighted_clustering_coefficient"] = node_map(x.weighted_clustering_coefficient);
  j["avg_weighted_clustering_coefficient"] = number(x.avg_weighted_clustering_coefficient);
  j["pagerank"] = node_map(x.pagerank);
  j["pagerank_max"] = number(x.pagerank_max);
  j["pagerank_max_node"] = x.pagerank_max_node;
  j["pagerank_min"] = number(x.pagerank_min);
  j["pagerank_min_node"] = x.pagerank_min_node;
  j["node_connectivity"] = x.connectivity.node_connectivity;
  j["avg_node_connectivity"] = number(x.connectivity.avg_node_connectivity);
  j["edge_connectivity"] = x.connectivity.edge_connectivity;
  j["node_connectivity_undirected"] = x.connectivity_undirected.node_connectivity;
  j["avg_node_connectivity_undirected"] = number(x.connectivity_undirected.avg_node_connectivity);
  j["edge_connectivity_undirected"] = x.connectivity_undirected.edge_connectivity;
  if (x.eccentricity) {
    j["eccentricity"] = node_map(x.eccentricity->eccentricity);
    j["diameter"] = number(x.eccentricity->diameter);
    j["radius"] = number(x.eccentricity->radius);
    j["center"] = x.eccentricity->center;
    j["periphery"] = x.eccentricity->periphery;
  }
  j["closeness_centrality"] = node_map(x.closeness_centrality);
  j["avg_closeness_centrality"] = number(x.avg_closeness_centrality);
  j["betweenness_centrality"] = node_map(x.betweenness_centrality);
  j["avg_betweenness_centrality"] = number(x.avg_betweenness_centrality);
  return j;
}

}  // namespace streetnet::measures
