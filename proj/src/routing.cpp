#include "streetnet/routing.hpp"

#include <charconv>
#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "streetnet/error.hpp"
#include "streetnet/geo_ops.hpp"

namespace streetnet::routing {

NodeId nearest_node(const StreetGraph& g, const Point& lonlat) {
  if (g.empty()) throw Error(ErrorKind::EmptyGraph, "graph has no nodes");
  NodeId best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& n : g.nodes()) {
    const double d = great_circle(geo::to_lonlat(g.meta.crs, n.point()), lonlat);
    if (d < best_d || (d == best_d && n.id < best)) {
      best = n.id;
      best_d = d;
    }
  }
  return best;
}

namespace {

std::optional<double> elevation_delta(const StreetGraph& g, const Edge& e) {
  const auto& a = g.node(e.u).elevation;
  const auto& b = g.node(e.v).elevation;
  if (!a || !b) return std::nullopt;
  return *b - *a;
}

}  // namespace

WeightFn weight_by(const std::string& attribute) {
  if (attribute == "length") {
    return [](const StreetGraph&, const Edge& e) -> std::optional<double> { return e.data.length; };
  }
  if (attribute == "grade") {
    return [](const StreetGraph&, const Edge& e) { return e.data.grade; };
  }
  if (attribute == "abs_grade") {
    return [](const StreetGraph&, const Edge& e) -> std::optional<double> {
      if (!e.data.grade) return std::nullopt;
      return std::abs(*e.data.grade);
    };
  }
  if (attribute == "elevation_change") {
    return [](const StreetGraph& g, const Edge& e) -> std::optional<double> {
      auto dz = elevation_delta(g, e);
      if (!dz) return std::nullopt;
      return std::abs(*dz);
    };
  }
  if (attribute == "ascent") {
    return [](const StreetGraph& g, const Edge& e) -> std::optional<double> {
      auto dz = elevation_delta(g, e);
      if (!dz) return std::nullopt;
      return std::max(0.0, *dz);
    };
  }
  return [attribute](const StreetGraph&, const Edge& e) -> std::optional<double> {
    auto it = e.data.extra.find(attribute);
    if (it == e.data.extra.end()) return std::nullopt;
    double value = 0.0;
    const auto& text = it->second;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
  };
}

Route shortest_path(const StreetGraph& g, NodeId source, NodeId target, const std::string& weight) {
  return shortest_path(g, source, target, weight_by(weight));
}

Route shortest_path(const StreetGraph& g, NodeId source, NodeId target, const WeightFn& weight) {
  const std::size_t s = g.index_of(source);
  const std::size_t t = g.index_of(target);
  const auto& edges = g.edges();
  const std::size_t n = g.node_count();

  std::vector<double> w(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto value = weight(g, edges[i]);
    if (!value) {
      throw Error(ErrorKind::MissingWeight, "edge (" + std::to_string(edges[i].u) + ", " +
                                                std::to_string(edges[i].v) + ", " +
                                                std::to_string(edges[i].key) + ") has no weight");
    }
    if (!(*value >= 0.0)) {
      throw Error(ErrorKind::NegativeWeight, "edge (" + std::to_string(edges[i].u) + ", " +
                                                 std::to_string(edges[i].v) + ") has weight " +
                                                 std::to_string(*value));
    }
    w[i] = *value;
  }

  Route route;
  if (s == t) {
    route.nodes = {source};
    route.geometry = {g.node(source).point()};
    return route;
  }

  // cheapest parallel edge per ordered pair, lowest key on ties
  struct Arc {
    std::size_t to;
    std::size_t edge;
  };
  std::vector<std::vector<Arc>> out(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.u == e.v) continue;
    auto& arcs = out[g.index_of(e.u)];
    const std::size_t to = g.index_of(e.v);
    auto it = std::find_if(arcs.begin(), arcs.end(), [&](const Arc& a) { return a.to == to; });
    if (it == arcs.end()) {
      arcs.push_back({to, i});
    } else if (w[i] < w[it->edge] || (w[i] == w[it->edge] && e.key < edges[it->edge].key)) {
      it->edge = i;
    }
  }

  // lexicographic (cost, hops) Dijkstra, stopping once the target settles
  using Label = std::pair<double, std::size_t>;
  constexpr Label kInf{std::numeric_limits<double>::infinity(), 0};
  std::vector<Label> label(n, kInf);
  std::vector<bool> settled(n, false);
  using Item = std::pair<Label, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  label[s] = {0.0, 0};
  heap.push({label[s], s});
  while (!heap.empty()) {
    auto [lab, u] = heap.top();
    heap.pop();
    if (settled[u] || lab > label[u]) continue;
    settled[u] = true;
    if (u == t) break;
    for (const auto& arc : out[u]) {
      const Label cand{lab.first + w[arc.edge], lab.second + 1};
      if (cand < label[arc.to]) {
        label[arc.to] = cand;
        heap.push({cand, arc.to});
      }
    }
  }
  if (!settled[t]) {
    throw Error(ErrorKind::NoPath, "no path from " + std::to_string(source) + " to " + std::to_string(target));
  }

  auto tight = [&](std::size_t u, const Arc& arc) {
    if (!settled[u] || !settled[arc.to]) return false;
    if (label[u].second + 1 != label[arc.to].second) return false;
    const double expect = label[arc.to].first;
    const double got = label[u].first + w[arc.edge];
    return std::abs(got - expect) <= 1e-12 * std::max(1.0, std::abs(expect));
  };

  // nodes from which the target is reachable along tight arcs
  std::vector<std::vector<std::size_t>> tight_in(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& arc : out[u]) {
      if (tight(u, arc)) tight_in[arc.to].push_back(u);
    }
  }
  std::vector<bool> leads(n, false);
  std::vector<std::size_t> stack{t};
  leads[t] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (auto u : tight_in[v]) {
      if (!leads[u]) {
        leads[u] = true;
        stack.push_back(u);
      }
    }
  }

  std::size_t cur = s;
  route.nodes.push_back(source);
  while (cur != t) {
    const Arc* pick = nullptr;
    for (const auto& arc : out[cur]) {
      if (!leads[arc.to] || !tight(cur, arc)) continue;
      if (pick == nullptr || g.nodes()[arc.to].id < g.nodes()[pick->to].id) pick = &arc;
    }
    if (pick == nullptr) throw std::logic_error("shortest path reconstruction failed");
    const Edge& e = edges[pick->edge];
    route.edges.push_back({e.u, e.v, e.key});
    route.nodes.push_back(e.v);
    route.total_cost += w[pick->edge];
    const auto pts = e.data.geometry.value_or(std::vector<Point>{g.node(e.u).point(), g.node(e.v).point()});
    route.geometry.insert(route.geometry.end(), pts.begin() + (route.geometry.empty() ? 0 : 1), pts.end());
    cur = pick->to;
  }
  return route;
}

void add_edge_grades(StreetGraph& g) {
  for (const auto& n : g.nodes()) {
    if (!n.elevation) {
      throw Error(ErrorKind::MissingElevation, "node " + std::to_string(n.id) + " has no elevation");
    }
  }
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    const double dz = *g.node(e.v).elevation - *g.node(e.u).elevation;
    g.edge_data(i).grade = e.data.length > 0.0 ? dz / e.data.length : 0.0;
  }
}

Route route_by_grade(const StreetGraph& g, NodeId source, NodeId target) {
  for (const auto& n : g.nodes()) {
    if (!n.elevation) {
      throw Error(ErrorKind::MissingElevation, "node " + std::to_string(n.id) + " has no elevation");
    }
  }
  return shortest_path(g, source, target, weight_by("elevation_change"));
}

nlohmann::json to_json(const StreetGraph& g, const Route& route) {
  auto round7 = [](double v) { return std::round(v * 1e7) / 1e7; };
  nlohmann::json j;
  j["nodes"] = route.nodes;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : route.edges) j["edges"].push_back({e.u, e.v, e.key});
  j["total_cost"] = route.total_cost;
  nlohmann::json coords = nlohmann::json::array();
  for (const auto& p : route.geometry) {
    const Point ll = geo::to_lonlat(g.meta.crs, p);
    coords.push_back({round7(ll.x), round7(ll.y)});
  }
  // a LineString needs two positions, even for a zero-length route
  if (coords.size() == 1) coords.push_back(coords.front());
  j["geometry"] = {{"type", "LineString"}, {"coordinates", coords}};
  return j;
}

}  // namespace streetnet::routing
