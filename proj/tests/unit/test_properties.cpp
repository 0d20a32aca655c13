// Invariants checked across every recorded payload and on random inputs.
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixture_cache.hpp"
#include "graphs.hpp"
#include "oracles.hpp"
#include "streetnet/geo_ops.hpp"
#include "streetnet/measures.hpp"
#include "streetnet/routing.hpp"
#include "streetnet/simplify.hpp"

using namespace streetnet;

namespace {

struct Payload {
  std::string name;
  osm::NetworkType type;
  std::vector<osm::OsmElement> elements;  // already filtered
  StreetGraph raw;
};

const std::vector<Payload>& payloads() {
  static const auto all = [] {
    std::vector<Payload> out;
    const auto streets = testing::manifest()["streets"];
    for (const auto& e : streets) {
      std::ifstream in(testing::fixture_dir() / e["file"].get<std::string>());
      std::stringstream ss;
      ss << in.rdbuf();
      const auto type = osm::parse_network_type(e["network_type"].get<std::string>());
      auto els = filter_elements(osm::parse_overpass(ss.str(), osm::PayloadFormat::Json).elements, type);
      auto g = build_graph(els, type);
      out.push_back({e["name"].get<std::string>(), type, std::move(els), std::move(g)});
    }
    return out;
  }();
  return all;
}

std::map<NodeId, std::set<NodeId>> reach_sets(const StreetGraph& g, const std::set<NodeId>& among) {
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const auto& e : g.edges()) adj[e.u].push_back(e.v);
  std::map<NodeId, std::set<NodeId>> out;
  for (NodeId s : among) {
    std::set<NodeId> seen{s};
    std::queue<NodeId> q;
    q.push(s);
    while (!q.empty()) {
      const NodeId u = q.front();
      q.pop();
      for (NodeId v : adj[u])
        if (seen.insert(v).second) q.push(v);
    }
    auto& dst = out[s];
    for (NodeId v : seen)
      if (among.contains(v)) dst.insert(v);
  }
  return out;
}

// Chord length on the unit sphere; monotone in great-circle distance.
double chord(const Point& a, const Point& b) {
  auto xyz = [](const Point& p) {
    const double lon = p.x * M_PI / 180, lat = p.y * M_PI / 180;
    return std::array<double, 3>{std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
  };
  const auto u = xyz(a), v = xyz(b);
  return std::hypot(u[0] - v[0], u[1] - v[1], u[2] - v[2]);
}

}  // namespace

TEST_CASE("edge count is one per one-way segment and two per two-way segment") {
  for (const auto& p : payloads()) {
    if (osm::is_bidirectional_network(p.type)) continue;
    CAPTURE(p.name);
    std::size_t expected = 0;
    for (const auto& e : p.elements) {
      if (e.kind != osm::ElementKind::Way) continue;
      const std::size_t segments = e.node_refs.size() - 1;
      expected += osm::decode_oneway(e.tags) == osm::OnewayDirection::Both ? 2 * segments : segments;
    }
    CHECK(p.raw.edge_count() == expected);
  }
}

TEST_CASE("raw edges: positive length, endpoint geometry, dense keys") {
  for (const auto& p : payloads()) {
    CAPTURE(p.name);
    std::map<std::pair<NodeId, NodeId>, std::set<int>> keys;
    for (const auto& e : p.raw.edges()) {
      const auto& a = p.raw.node(e.u);
      const auto& b = p.raw.node(e.v);
      if (a.point() != b.point()) CHECK(e.data.length > 0.0);
      CHECK(e.data.length == doctest::Approx(great_circle(a.point(), b.point())).epsilon(1e-6));
      CHECK(e.data.osmid.size() == 1);
      keys[{e.u, e.v}].insert(e.key);
    }
    for (const auto& [pair, ks] : keys) CHECK(*ks.rbegin() == static_cast<int>(ks.size()) - 1);
  }
}

TEST_CASE("undirected projection is idempotent") {
  for (const auto& p : payloads()) {
    CAPTURE(p.name);
    const auto once = undirected_projection(p.raw);
    CHECK(undirected_projection(once) == once);
    const auto s = simplify_graph(p.raw);
    const auto so = undirected_projection(s);
    CHECK(undirected_projection(so) == so);
  }
}

TEST_CASE("simplification preserves reachability between endpoints") {
  for (const auto& p : payloads()) {
    CAPTURE(p.name);
    for (auto mode : {SimplifyMode::Strict, SimplifyMode::NonStrict}) {
      const auto ends = endpoints(p.raw, mode);
      const auto s = simplify_graph(p.raw, mode);
      CHECK(reach_sets(p.raw, ends) == reach_sets(s, ends));
      // merged geometry runs from u to v and its length is the sum of its pieces
      for (const auto& e : s.edges()) {
        if (!e.data.geometry) continue;
        CHECK(e.data.geometry->front() == s.node(e.u).point());
        CHECK(e.data.geometry->back() == s.node(e.v).point());
        CHECK(geometric_length(s, e) == doctest::Approx(e.data.length).epsilon(1e-6));
      }
      // non-strict keeps every strict endpoint
      if (mode == SimplifyMode::NonStrict) {
        for (NodeId v : endpoints(p.raw, SimplifyMode::Strict)) CHECK(ends.contains(v));
      }
    }
  }
}

TEST_CASE("UTM distances match great-circle distances within half a percent up to 2 km") {
  for (const auto& p : payloads()) {
    CAPTURE(p.name);
    const auto g = simplify_graph(p.raw);
    const auto proj = geo::project_graph(g);
    const auto& nodes = g.nodes();
    int pairs = 0;
    for (std::size_t i = 0; i < nodes.size(); i += 7) {
      for (std::size_t j = i + 1; j < nodes.size(); j += 11) {
        const double gc = great_circle(nodes[i].point(), nodes[j].point());
        if (gc > 2000.0 || gc < 1.0) continue;
        const auto& a = proj.node(nodes[i].id);
        const auto& b = proj.node(nodes[j].id);
        CHECK(std::hypot(a.x - b.x, a.y - b.y) == doctest::Approx(gc).epsilon(5e-3));
        ++pairs;
      }
    }
    CHECK(pairs > 0);
  }
}

TEST_CASE("truncation is monotone in the boundary") {
  std::mt19937_64 rng(17);
  for (const auto& p : payloads()) {
    CAPTURE(p.name);
    const auto g = simplify_graph(p.raw);
    const BBox all = bounds_of([&] {
      Ring r;
      for (const auto& n : g.nodes()) r.push_back(n.point());
      return r;
    }());
    for (int k = 0; k < 5; ++k) {
      std::uniform_real_distribution<double> f(0.05, 0.45);
      const double dy = (all.north - all.south), dx = (all.east - all.west);
      const BBox outer{all.south + f(rng) * dy * 0.5, all.west + f(rng) * dx * 0.5, all.north - f(rng) * dy * 0.5,
                       all.east - f(rng) * dx * 0.5};
      const BBox inner{outer.south + (outer.north - outer.south) * 0.2, outer.west + (outer.east - outer.west) * 0.3,
                       outer.north - (outer.north - outer.south) * 0.25, outer.east - (outer.east - outer.west) * 0.1};
      StreetGraph big, small;
      try {
        big = geo::truncate_graph(g, outer);
        small = geo::truncate_graph(g, inner);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyResult);
        continue;
      }
      for (const auto& n : small.nodes()) CHECK(big.contains(n.id));
      for (const auto& n : big.nodes()) CHECK(outer.contains(n.point()));
    }
  }
}

TEST_CASE("network-distance ball equals the brute-force ball on a grid") {
  std::mt19937_64 rng(3);
  std::vector<testing::NodeSpec> nodes;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) nodes.push_back({static_cast<NodeId>(r * 6 + c + 1), -122.6 + c * 0.0013, 45.5 + r * 0.0009});
  std::uniform_real_distribution<double> len(60, 140);
  std::bernoulli_distribution oneway(0.3);
  std::vector<testing::EdgeSpec> edges;
  auto link = [&](NodeId a, NodeId b) {
    const double l = len(rng);
    edges.push_back({a, b, l, true, 1});
    if (!oneway(rng)) edges.push_back({b, a, l, true, 1});
  };
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      const NodeId id = r * 6 + c + 1;
      if (c < 5) link(id, id + 1);
      if (r < 5) link(id, id + 6);
    }
  const auto g = testing::make_graph(nodes, edges);
  const auto d = oracle::dense(g);
  const auto fw = oracle::floyd_warshall(d);
  for (int s = 0; s < d.n; s += 5) {
    for (double radius : {0.5, 150.0, 250.0, 400.0}) {
      std::set<NodeId> want;
      for (int t = 0; t < d.n; ++t)
        if (fw[s][t] <= radius) want.insert(g.nodes()[t].id);
      const auto ball = geo::truncate_by_network_distance(g, g.nodes()[s].id, radius);
      std::set<NodeId> got;
      for (const auto& n : ball.nodes()) got.insert(n.id);
      CHECK(got == want);
    }
  }
}

TEST_CASE("nearest node agrees with a linear chord scan") {
  const auto g = simplify_graph(payloads().front().raw);
  std::mt19937_64 rng(11);
  const auto& n0 = g.nodes().front();
  std::uniform_real_distribution<double> jitter(-0.01, 0.01);
  for (int i = 0; i < 200; ++i) {
    const Point q{n0.x + jitter(rng), n0.y + jitter(rng)};
    NodeId best = 0;
    double best_d = 1e9;
    for (const auto& n : g.nodes()) {
      const double d = chord(n.point(), q);
      if (d < best_d) {
        best_d = d;
        best = n.id;
      }
    }
    CHECK(routing::nearest_node(g, q) == best);
  }
}

TEST_CASE("stats invariants on every fixture") {
  for (const auto& p : payloads()) {
    CAPTURE(p.name);
    const auto g = simplify_graph(p.raw);
    auto counted = g;
    assign_street_counts(counted);
    const auto s = measures::basic_stats(counted, {1.0});
    CHECK(s.intersection_count <= s.n);
    for (double v : {s.node_density, s.intersection_density, s.edge_density, s.street_density}) CHECK(v >= 0.0);
    double total = 0.0;
    for (const auto& [k, v] : s.streets_per_node_proportions) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    // OSM geometry is never shorter than its chord
    CHECK(s.avg_circuity >= 1.0 - 1e-9);
    CHECK(s.avg_node_degree == 2.0 * static_cast<double>(s.m) / static_cast<double>(s.n));
    for (const auto& n : counted.nodes()) CHECK(*n.street_count >= 1);

    const auto ecc = measures::eccentricity_suite(g, true);
    CHECK(ecc.radius <= ecc.diameter);
    CHECK_FALSE(ecc.center.empty());
    CHECK_FALSE(ecc.periphery.empty());
  }
}

TEST_CASE("grade routing matches brute-force minimum elevation change") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> z(0, 80);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = testing::random_graph(rng, {.arc_probability = 0.5, .allow_self_loops = false});
    for (auto& n : g.nodes()) n.elevation = std::round(z(rng));
    // independent oracle: Floyd-Warshall on |dz| arcs
    StreetGraph w = g;
    for (std::size_t k = 0; k < w.edge_count(); ++k) {
      const auto& e = w.edges()[k];
      w.edge_data(k).length = std::abs(*g.node(e.v).elevation - *g.node(e.u).elevation);
    }
    const auto fw = oracle::floyd_warshall(oracle::dense(w));
    for (int s = 0; s < static_cast<int>(g.node_count()); ++s) {
      for (int t = 0; t < static_cast<int>(g.node_count()); ++t) {
        const NodeId a = g.nodes()[s].id, b = g.nodes()[t].id;
        if (fw[s][t] == oracle::kInf) continue;
        CHECK(routing::route_by_grade(g, a, b).total_cost == fw[s][t]);
      }
    }
  }
}
