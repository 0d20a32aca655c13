#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixture_cache.hpp"
#include "simplify_fixtures.hpp"
#include "streetnet/error.hpp"
#include "streetnet/simplify.hpp"

using namespace streetnet;
using testing::total_length;

namespace {

std::vector<NodeId> node_ids(const StreetGraph& g) {
  std::vector<NodeId> ids;
  for (const auto& n : g.nodes()) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

StreetGraph raw_fixture(const char* name, osm::NetworkType type = osm::NetworkType::Drive) {
  std::ifstream in(testing::fixture_dir() / name);
  std::stringstream ss;
  ss << in.rdbuf();
  return build_graph(osm::parse_overpass(ss.str(), osm::PayloadFormat::Json).elements, type);
}

}  // namespace

TEST_CASE("simplification fixtures keep exactly the expected nodes") {
  for (auto& f : testing::simplify_fixtures()) {
    CAPTURE(f.name);
    const auto strict = simplify_graph(f.graph, SimplifyMode::Strict);
    const auto loose = simplify_graph(f.graph, SimplifyMode::NonStrict);
    CHECK(node_ids(strict) == f.strict_nodes);
    CHECK(node_ids(loose) == f.non_strict_nodes);
    CHECK(strict.meta.simplified);
    CHECK(total_length(strict) == doctest::Approx(total_length(f.graph)).epsilon(1e-12));
    CHECK(total_length(loose) == doctest::Approx(total_length(f.graph)).epsilon(1e-12));
    const auto ends = endpoints(f.graph, SimplifyMode::Strict);
    CHECK(std::vector<NodeId>(ends.begin(), ends.end()) == f.strict_nodes);
  }
}

TEST_CASE("figure cases for the endpoint predicate") {
  const auto fx = testing::simplify_fixtures();
  auto find = [&](const std::string& name) -> const StreetGraph& {
    for (const auto& f : fx)
      if (f.name == name) return f.graph;
    throw std::logic_error(name);
  };
  // mid-curve node: 2 neighbors, degree 4, same way
  CHECK_FALSE(is_endpoint(find("chain"), 3, SimplifyMode::Strict));
  CHECK_FALSE(is_endpoint(find("chain"), 3, SimplifyMode::NonStrict));
  // elbow between two ways
  CHECK_FALSE(is_endpoint(find("elbow"), 3, SimplifyMode::Strict));
  CHECK(is_endpoint(find("elbow"), 3, SimplifyMode::NonStrict));
  // one-way meets two-way: degree 3
  CHECK(is_endpoint(find("oneway_transition"), 2, SimplifyMode::Strict));
  CHECK(is_endpoint(find("oneway_transition"), 2, SimplifyMode::NonStrict));
  // self-loop origin
  CHECK(is_endpoint(find("self_loop"), 2, SimplifyMode::Strict));
  // dead end
  CHECK(is_endpoint(find("chain"), 1, SimplifyMode::Strict));
  CHECK_THROWS_AS(is_endpoint(find("chain"), 99, SimplifyMode::Strict), Error);
}

TEST_CASE("merged edges carry the whole chain") {
  const auto fx = testing::simplify_fixtures();
  const auto g = simplify_graph(fx[0].graph);
  REQUIRE(g.edge_count() == 2);
  const auto& e = g.edges()[0];
  CHECK(e.u == 1);
  CHECK(e.v == 5);
  CHECK(e.data.length == doctest::Approx(101 + 102 + 103 + 104));
  REQUIRE(e.data.geometry.has_value());
  CHECK(e.data.geometry->size() == 5);
  CHECK(e.data.geometry->front() == fx[0].graph.node(1).point());
  CHECK(e.data.geometry->back() == fx[0].graph.node(5).point());
  CHECK(e.data.osmid == std::vector<osm::OsmId>{10});

  const auto elbow = simplify_graph(fx[1].graph);
  CHECK(elbow.edges()[0].data.osmid == std::vector<osm::OsmId>{10, 11});
}

TEST_CASE("a hanging loop becomes a self-loop at the junction") {
  const auto fx = testing::simplify_fixtures();
  const auto g = simplify_graph(fx[2].graph);
  int loops = 0;
  for (const auto& e : g.edges()) {
    if (e.is_self_loop()) {
      ++loops;
      CHECK(e.u == 1);
      CHECK(e.data.length == doctest::Approx(460));
    }
  }
  CHECK(loops == 2);  // one per direction of travel
}

TEST_CASE("an isolated ring keeps its smallest node") {
  std::vector<testing::EdgeSpec> e;
  testing::detail::two_way(e, 7, 3, 10, 1);
  testing::detail::two_way(e, 3, 9, 10, 1);
  testing::detail::two_way(e, 9, 7, 10, 1);
  auto nodes = testing::line_nodes(3);
  nodes[0].id = 7;
  nodes[1].id = 3;
  nodes[2].id = 9;
  const auto in = testing::make_graph(nodes, e);
  const auto g = simplify_graph(in);
  CHECK(node_ids(g) == std::vector<NodeId>{3});
  CHECK(total_length(g) == doctest::Approx(60));
}

TEST_CASE("simplifying twice is refused") {
  const auto g = simplify_graph(testing::simplify_fixtures()[0].graph);
  try {
    simplify_graph(g);
    FAIL("expected AlreadySimplified");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AlreadySimplified);
  }
}

TEST_CASE("recorded payloads: length conserved, survivors are the endpoints") {
  for (const auto* name : {"portland_downtown.json", "portland_laurelhurst.json", "portland_nwheights.json",
                           "medina_drive.json"}) {
    CAPTURE(name);
    const auto raw = raw_fixture(name);
    const auto strict = simplify_graph(raw, SimplifyMode::Strict);
    const auto loose = simplify_graph(raw, SimplifyMode::NonStrict);
    CHECK(total_length(strict) == doctest::Approx(total_length(raw)).epsilon(1e-9));
    CHECK(total_length(loose) == doctest::Approx(total_length(raw)).epsilon(1e-9));
    const auto se = endpoints(raw, SimplifyMode::Strict);
    const auto le = endpoints(raw, SimplifyMode::NonStrict);
    // none of these payloads has an isolated ring
    for (const auto& n : strict.nodes()) CHECK(se.contains(n.id));
    CHECK(strict.node_count() == se.size());
    CHECK(loose.node_count() == le.size());
    CHECK(loose.node_count() >= strict.node_count());
    // edges in a simplified graph never start or end at interstitial nodes
    for (const auto& e : strict.edges()) {
      CHECK(se.contains(e.u));
      CHECK(se.contains(e.v));
    }
  }
}

TEST_CASE("walk simplification keeps both directions of each street") {
  const auto raw = raw_fixture("modena_walk.json", osm::NetworkType::Walk);
  const auto g = simplify_graph(raw);
  std::map<std::tuple<NodeId, NodeId, std::vector<osm::OsmId>>, int> balance;
  for (const auto& e : g.edges()) {
    if (e.is_self_loop()) continue;
    auto ways = e.data.osmid;
    std::sort(ways.begin(), ways.end());
    balance[{std::min(e.u, e.v), std::max(e.u, e.v), ways}] += e.u < e.v ? 1 : -1;
  }
  for (const auto& [k, v] : balance) CHECK(v == 0);
}
