#include <random>

#include "doctest.h"
#include "graphs.hpp"
#include "oracle_checks.hpp"
#include "streetnet/error.hpp"
#include "streetnet/routing.hpp"

using namespace streetnet;
using namespace streetnet::routing;
using testing::EdgeSpec;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::NoResult;
}

}  // namespace

TEST_CASE("shortest paths agree with Floyd-Warshall and the tie rule") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 80; ++trial) {
    const auto g = testing::random_graph(rng, {.arc_probability = 0.45});
    const auto d = oracle::dense(g);
    const auto fw = oracle::floyd_warshall(d);
    for (int s = 0; s < d.n; ++s) {
      for (int t = 0; t < d.n; ++t) {
        const NodeId a = g.nodes()[s].id;
        const NodeId b = g.nodes()[t].id;
        if (fw[s][t] == oracle::kInf) {
          CHECK(kind_of([&] { shortest_path(g, a, b); }) == ErrorKind::NoPath);
          continue;
        }
        const auto r = shortest_path(g, a, b);
        CHECK(r.total_cost == fw[s][t]);
        CHECK(oracle::detail::best_path(g, d, s, t).nodes == r.nodes);
        // edges chain the nodes and each is the cheapest of its pair
        REQUIRE(r.edges.size() + 1 == r.nodes.size());
        for (std::size_t i = 0; i < r.edges.size(); ++i) {
          CHECK(r.edges[i].u == r.nodes[i]);
          CHECK(r.edges[i].v == r.nodes[i + 1]);
        }
      }
    }
  }
}

TEST_CASE("one-way streets are respected") {
  auto g = testing::make_graph(testing::line_nodes(3), {{1, 2, 10, true}, {2, 3, 10, true}});
  CHECK(shortest_path(g, 1, 3).nodes == std::vector<NodeId>{1, 2, 3});
  CHECK(kind_of([&] { shortest_path(g, 3, 1); }) == ErrorKind::NoPath);
}

TEST_CASE("parallel edges: cheapest wins, lowest key on ties") {
  auto g = testing::make_graph(testing::line_nodes(2), {{1, 2, 30, true}, {1, 2, 10, true}, {1, 2, 10, true}});
  const auto r = shortest_path(g, 1, 2);
  CHECK(r.edges.front().key == 1);
  CHECK(r.total_cost == 10);
}

TEST_CASE("equal-cost routes prefer fewer hops, then smaller ids") {
  // 1->4 direct cost 4; 1->2->4 cost 4; 1->3->4 cost 4
  auto g = testing::make_graph(testing::line_nodes(4),
                               {{1, 2, 2, true}, {2, 4, 2, true}, {1, 3, 2, true}, {3, 4, 2, true}, {1, 4, 4, true}});
  CHECK(shortest_path(g, 1, 4).nodes == std::vector<NodeId>{1, 4});
  auto h = testing::make_graph(testing::line_nodes(4), {{1, 3, 2, true}, {3, 4, 2, true}, {1, 2, 2, true}, {2, 4, 2, true}});
  CHECK(shortest_path(h, 1, 4).nodes == std::vector<NodeId>{1, 2, 4});
}

TEST_CASE("routing errors") {
  auto g = testing::make_graph(testing::line_nodes(3), {{1, 2, 10, true}, {2, 3, -1, true}});
  CHECK(kind_of([&] { shortest_path(g, 1, 3); }) == ErrorKind::NegativeWeight);
  CHECK(kind_of([&] { shortest_path(g, 1, 42); }) == ErrorKind::UnknownNode);
  CHECK(kind_of([&] { shortest_path(g, 1, 2, "speed_kph"); }) == ErrorKind::MissingWeight);
  CHECK(kind_of([&] { shortest_path(g, 1, 2, "grade"); }) == ErrorKind::MissingWeight);
}

TEST_CASE("extra attributes can serve as weights") {
  auto g = testing::make_graph(testing::line_nodes(3), {{1, 2, 10, true}, {2, 3, 10, true}, {1, 3, 15, true}});
  g.edge_data(0).extra["travel_time"] = "1";
  g.edge_data(1).extra["travel_time"] = "1";
  g.edge_data(2).extra["travel_time"] = "5";
  CHECK(shortest_path(g, 1, 3).nodes == std::vector<NodeId>{1, 3});
  CHECK(shortest_path(g, 1, 3, "travel_time").nodes == std::vector<NodeId>{1, 2, 3});
  CHECK(shortest_path(g, 1, 3, "travel_time").total_cost == 2.0);
}

TEST_CASE("route to itself is a single node") {
  auto g = testing::make_graph(testing::line_nodes(2), {{1, 2, 10, true}});
  const auto r = shortest_path(g, 2, 2);
  CHECK(r.nodes == std::vector<NodeId>{2});
  CHECK(r.edges.empty());
  CHECK(r.total_cost == 0.0);
  const auto j = to_json(g, r);
  CHECK(j["geometry"]["coordinates"].size() == 2);
}

TEST_CASE("route geometry concatenates edge geometry") {
  auto nodes = testing::line_nodes(3);
  auto g = testing::make_graph(nodes, {{1, 2, 10, true}, {2, 3, 10, true}});
  const Point mid{(nodes[0].x + nodes[1].x) / 2, nodes[0].y + 0.0001};
  g.edge_data(0).geometry = std::vector<Point>{{nodes[0].x, nodes[0].y}, mid, {nodes[1].x, nodes[1].y}};
  const auto r = shortest_path(g, 1, 3);
  CHECK(r.geometry.size() == 4);
  CHECK(r.geometry[1] == mid);
  const auto j = to_json(g, r);
  CHECK(j["geometry"]["type"] == "LineString");
  CHECK(j["nodes"] == nlohmann::json::array({1, 2, 3}));
  CHECK(j["edges"][0] == nlohmann::json::array({1, 2, 0}));
}

TEST_CASE("nearest node") {
  auto nodes = testing::line_nodes(4, 100.0, 10);
  auto g = testing::make_graph(nodes, {});
  CHECK(nearest_node(g, {nodes[2].x + 1e-6, nodes[2].y}) == 12);
  // two nodes on the same spot: smaller id
  g.add_node({.id = 5, .x = nodes[3].x, .y = nodes[3].y});
  CHECK(nearest_node(g, {nodes[3].x + 1e-6, nodes[3].y}) == 5);
  CHECK(kind_of([&] { nearest_node(StreetGraph{}, {0, 0}); }) == ErrorKind::EmptyGraph);
}

TEST_CASE("grade routing avoids the hill") {
  // 1 -> 2 -> 4 is short but climbs; 1 -> 3 -> 4 is longer and flat
  auto g = testing::make_graph(testing::line_nodes(4),
                               {{1, 2, 100, true}, {2, 4, 100, true}, {1, 3, 300, true}, {3, 4, 300, true}});
  CHECK(kind_of([&] { route_by_grade(g, 1, 4); }) == ErrorKind::MissingElevation);
  g.node(1).elevation = 10;
  g.node(2).elevation = 60;
  g.node(3).elevation = 12;
  g.node(4).elevation = 10;
  CHECK(shortest_path(g, 1, 4).nodes == std::vector<NodeId>{1, 2, 4});
  const auto r = route_by_grade(g, 1, 4);
  CHECK(r.nodes == std::vector<NodeId>{1, 3, 4});
  CHECK(r.total_cost == doctest::Approx(4.0));

  add_edge_grades(g);
  CHECK(g.edges()[0].data.grade == doctest::Approx(0.5));
  CHECK(g.edges()[1].data.grade == doctest::Approx(-0.5));
  CHECK(shortest_path(g, 1, 4, "abs_grade").nodes == std::vector<NodeId>{1, 3, 4});
}
