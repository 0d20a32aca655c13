// Acceptance gate: one PASS/FAIL line per criterion.
//   acceptance          run all criteria, exit 1 if any fails
//   acceptance N        run criterion N only
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "fixture_cache.hpp"
#include "graphs.hpp"
#include "oracle_checks.hpp"
#include "simplify_fixtures.hpp"
#include "streetnet/geo_ops.hpp"
#include "streetnet/io.hpp"
#include "streetnet/measures.hpp"
#include "streetnet/pipeline.hpp"
#include "streetnet/utm.hpp"

using namespace streetnet;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kPortlandBudgetS = 10.0;
constexpr double kIdentityRelTol = 1e-9;
constexpr double kLengthRelTol = 1e-6;
constexpr double kSimplifyBudgetS = 1.0;
constexpr int kRandomTrials = 200;
constexpr double kOracleBudgetS = 60.0;
constexpr double kUtmTolM = 1.0;
constexpr double kCircuityTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const fs::path& cache_dir() {
  static const fs::path dir = [] {
    const auto d = fs::temp_directory_path() / ("streetnet_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(d);
    testing::seed_cache(d);
    return d;
  }();
  return dir;
}

struct OfflineClient {
  std::shared_ptr<osm::FailingTransport> transport = std::make_shared<osm::FailingTransport>();
  osm::OsmClient client{testing::fixture_config(cache_dir()), transport};
};

const nlohmann::json& street_entry(const std::string& name) {
  static const auto m = testing::manifest();
  for (const auto& e : m["streets"])
    if (e["name"] == name) return e;
  throw std::runtime_error("no manifest entry " + name);
}

measures::NetworkStats stats_for(osm::OsmClient& client, const std::string& name) {
  const auto g = pipeline::graph_from_query(client, testing::query_from_manifest(street_entry(name)));
  return measures::basic_stats(g, {geo::area_km2(*g.meta.boundary), measures::AreaSpec::Source::Polygon});
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

// 1. Portland ordering and exact 2m/n.
Outcome portland() {
  Outcome o;
  OfflineClient c;
  const auto d = stats_for(c.client, "portland_downtown");
  const auto l = stats_for(c.client, "portland_laurelhurst");
  const auto w = stats_for(c.client, "portland_nwheights");
  if (!(d.intersection_density > l.intersection_density && l.intersection_density > w.intersection_density))
    o.fail("intersection density order " + fmt(d.intersection_density, 1) + " / " + fmt(l.intersection_density, 1) +
           " / " + fmt(w.intersection_density, 1));
  if (!(d.avg_streets_per_node > l.avg_streets_per_node && l.avg_streets_per_node > w.avg_streets_per_node))
    o.fail("streets per node order " + fmt(d.avg_streets_per_node, 2) + " / " + fmt(l.avg_streets_per_node, 2) + " / " +
           fmt(w.avg_streets_per_node, 2));
  for (const auto* s : {&d, &l, &w}) {
    if (s->avg_node_degree != 2.0 * static_cast<double>(s->m) / static_cast<double>(s->n))
      o.fail("avg_node_degree != 2m/n for n=" + std::to_string(s->n));
  }
  if (c.transport->attempts() != 0) o.fail("network touched");
  if (o.pass)
    o.detail = "density " + fmt(d.intersection_density, 1) + " > " + fmt(l.intersection_density, 1) + " > " +
               fmt(w.intersection_density, 1) + ", streets/node " + fmt(d.avg_streets_per_node, 2) + " > " +
               fmt(l.avg_streets_per_node, 2) + " > " + fmt(w.avg_streets_per_node, 2);
  return o;
}

// 2. All-one-way network: street length equals edge length.
Outcome one_way_identity() {
  Outcome o;
  OfflineClient c;
  const auto g = pipeline::graph_from_query(c.client, testing::query_from_manifest(street_entry("portland_downtown")));
  for (const auto& e : g.edges()) {
    if (!e.data.oneway) {
      o.fail("edge " + std::to_string(e.u) + "->" + std::to_string(e.v) + " is two-way");
      return o;
    }
  }
  const auto s = measures::basic_stats(g, {1.0});
  const double rel = std::abs(s.total_street_length - s.total_edge_length) / s.total_edge_length;
  if (rel > kIdentityRelTol) o.fail("relative difference " + std::to_string(rel));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("street ") + fmt(s.total_street_length, 3) + " m, edge " +
              fmt(s.total_edge_length, 3) + " m";
  return o;
}

// 3. Simplification suite.
Outcome simplification() {
  Outcome o;
  const auto fixtures = testing::simplify_fixtures();
  if (fixtures.size() < 5) o.fail("fewer than 5 fixtures");
  for (const auto& f : fixtures) {
    const double before = testing::total_length(f.graph);
    std::size_t counts[2] = {0, 0};
    int i = 0;
    for (auto mode : {SimplifyMode::Strict, SimplifyMode::NonStrict}) {
      const auto g = simplify_graph(f.graph, mode);
      if (std::abs(testing::total_length(g) - before) > kLengthRelTol * before) o.fail(f.name + ": length changed");
      const auto ends = endpoints(f.graph, mode);
      std::set<NodeId> kept;
      for (const auto& n : g.nodes()) kept.insert(n.id);
      if (kept != ends) o.fail(f.name + ": node set differs from endpoints");
      counts[i++] = g.node_count();
    }
    if (counts[1] < counts[0]) o.fail(f.name + ": non-strict has fewer nodes");
  }
  if (o.pass) o.detail = std::to_string(fixtures.size()) + " fixtures";
  return o;
}

// 4. Oracle equivalence on seeded random graphs.
Outcome oracles() {
  Outcome o;
  std::mt19937_64 rng(20170);
  int failed = 0;
  for (int trial = 0; trial < kRandomTrials; ++trial) {
    const auto g = testing::random_graph(rng, {.max_nodes = 8});
    const auto r = oracle::check_graph(g);
    if (!r.ok()) {
      if (++failed == 1) o.fail("trial " + std::to_string(trial) + ": " + r.failures.front());
    }
  }
  if (failed > 0) o.fail(std::to_string(failed) + " graphs disagree");
  else o.detail = std::to_string(kRandomTrials) + " graphs";
  return o;
}

// 5. Average degree rows from the published counts, plus segment count == m.
Outcome published_counts() {
  Outcome o;
  struct Row {
    const char* name;
    std::size_t n, m;
    double published;
  };
  const Row rows[] = {{"Downtown", 82, 140, 3.42}, {"Laurelhurst", 55, 152, 5.53}, {"NW Heights", 21, 46, 4.38}};
  for (const auto& r : rows) {
    StreetGraph g;
    for (std::size_t i = 0; i < r.n; ++i)
      g.add_node({.id = static_cast<NodeId>(i + 1), .x = -122.6 + 1e-4 * static_cast<double>(i), .y = 45.5});
    for (std::size_t k = 0; k < r.m; ++k) {
      EdgeRecord e;
      e.osmid = {static_cast<osm::OsmId>(k + 1)};
      e.length = 10;
      const auto u = static_cast<NodeId>(k % (r.n - 1) + 1);
      g.add_edge(u, u + 1, e);
    }
    const double got = measures::basic_stats(g, {0.5}).avg_node_degree;
    const std::string line = std::string(r.name) + " 2*" + std::to_string(r.m) + "/" + std::to_string(r.n) + " = " +
                             fmt(got, 4) + " -> " + fmt(round2(got), 2) + " vs " + fmt(r.published, 2);
    if (round2(got) != r.published) o.fail(line);
    else o.detail += (o.detail.empty() ? "" : "; ") + line;
  }
  OfflineClient c;
  const auto d = stats_for(c.client, "portland_downtown");
  if (d.street_segment_count != d.m) o.fail("Downtown street_segment_count " + std::to_string(d.street_segment_count) +
                                            " != m " + std::to_string(d.m));
  return o;
}

// 6. GraphML round-trip on every fixture.
Outcome graphml_round_trip() {
  Outcome o;
  OfflineClient c;
  std::vector<std::pair<std::string, StreetGraph>> graphs;
  const auto streets = testing::manifest()["streets"];
  for (const auto& e : streets) {
    auto q = testing::query_from_manifest(e);
    graphs.emplace_back(e["name"].get<std::string>(), pipeline::graph_from_query(c.client, q));
    q.simplify = false;
    graphs.emplace_back(e["name"].get<std::string>() + " raw", pipeline::graph_from_query(c.client, q));
  }
  for (const auto& f : testing::simplify_fixtures()) graphs.emplace_back(f.name, f.graph);
  graphs.emplace_back("downtown projected", geo::project_graph(graphs.front().second));
  const auto file = cache_dir() / "round_trip.graphml";
  for (const auto& [name, g] : graphs) {
    io::save_graphml(g, file);
    if (!(io::load_graphml(file) == g)) o.fail(name);
  }
  if (o.pass) o.detail = std::to_string(graphs.size()) + " graphs";
  return o;
}

// 7. UTM against the reference table.
Outcome projection() {
  Outcome o;
  std::ifstream in(testing::fixture_dir() / "utm_reference.csv");
  std::string line;
  std::getline(in, line);
  int rows = 0;
  double worst = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[6];
    for (auto& s : f) std::getline(ss, s, ',');
    const geo::UtmZone z{std::stoi(f[2]), f[3] == "S"};
    const Point p = geo::to_utm({std::stod(f[0]), std::stod(f[1])}, z);
    worst = std::max({worst, std::abs(p.x - std::stod(f[4])), std::abs(p.y - std::stod(f[5]))});
    ++rows;
  }
  if (rows != 20) o.fail("expected 20 reference rows, read " + std::to_string(rows));
  if (worst > kUtmTolM) o.fail("worst error " + fmt(worst, 6) + " m");
  const Point c = geo::to_utm({geo::central_meridian(31), 0.0}, {31, false});
  if (c.x != 500000.0) o.fail("central meridian easting " + fmt(c.x, 9));
  if (o.pass) o.detail = std::to_string(rows) + " points, worst " + fmt(worst * 1000, 3) + " mm";
  return o;
}

// 8. Circuity of straight and doubled streets.
Outcome circuity() {
  Outcome o;
  auto nodes = testing::line_nodes(6, 150.0);
  std::vector<testing::EdgeSpec> e;
  for (NodeId i = 1; i < 6; ++i) {
    e.push_back({i, i + 1, 0.0, false, 1});
    e.push_back({i + 1, i, 0.0, false, 1});
  }
  auto straight = testing::make_graph(nodes, e);
  for (std::size_t k = 0; k < straight.edge_count(); ++k)
    straight.edge_data(k).length = geometric_length(straight, straight.edges()[k]);
  const double c1 = measures::basic_stats(straight, {1.0}).avg_circuity;
  if (std::abs(c1 - 1.0) > kCircuityTol) o.fail("straight " + fmt(c1, 12));

  StreetGraph doubled;
  doubled.add_node({.id = 1, .x = 11.0, .y = 44.600});
  doubled.add_node({.id = 2, .x = 11.0, .y = 44.604});
  EdgeRecord r;
  r.osmid = {1};
  r.geometry = std::vector<Point>{{11.0, 44.600}, {11.0, 44.606}, {11.0, 44.604}};
  doubled.add_edge(1, 2, r);
  doubled.edge_data(0).length = geometric_length(doubled, doubled.edges()[0]);
  const double c2 = measures::basic_stats(doubled, {1.0}).avg_circuity;
  if (std::abs(c2 - 2.0) > kCircuityTol) o.fail("doubled " + fmt(c2, 12));
  if (o.pass) o.detail = "straight " + fmt(c1, 12) + ", doubled " + fmt(c2, 12);
  return o;
}

// 9. Every fixture-backed operation runs with a transport that fails on use.
Outcome offline() {
  Outcome o;
  OfflineClient c;
  int ops = 0;
  try {
    const auto streets = testing::manifest()["streets"];
    for (const auto& e : streets) {
      pipeline::graph_from_query(c.client, testing::query_from_manifest(e));
      ++ops;
    }
    const auto geocoder = testing::manifest()["geocoder"];
    for (const auto& e : geocoder) {
      try {
        c.client.geocode_place(e["name"].get<std::string>());
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::NoResult) throw;
      }
      ++ops;
    }
    const auto footprints = testing::manifest()["footprints"];
    for (const auto& e : footprints) {
      osm::Region region;
      if (e.contains("place")) region = pipeline::place_polygons(c.client, e["place"].get<std::vector<std::string>>());
      else region = BBox{e["bbox"][0], e["bbox"][1], e["bbox"][2], e["bbox"][3]};
      c.client.fetch_footprints(region);
      ++ops;
    }
  } catch (const Error& err) {
    o.fail(std::string(to_string(err.kind())) + ": " + err.what());
  }
  if (c.transport->attempts() != 0) o.fail(std::to_string(c.transport->attempts()) + " network attempts");
  if (o.pass) o.detail = std::to_string(ops) + " operations, 0 network attempts";
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
  double budget_s;  // 0 = no runtime limit
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "Portland structural reproduction", portland, kPortlandBudgetS},
      {2, "one-way street/edge length identity", one_way_identity, 0},
      {3, "simplification suite", simplification, kSimplifyBudgetS},
      {4, "oracle equivalence", oracles, kOracleBudgetS},
      {5, "published average degree rows", published_counts, 0},
      {6, "GraphML round-trip", graphml_round_trip, 0},
      {7, "projection accuracy", projection, 0},
      {8, "circuity properties", circuity, 0},
      {9, "offline guarantee", offline, 0},
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  cache_dir();  // seed outside the timed sections

  bool all_pass = true;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs >= c.budget_s) o.fail("took " + fmt(secs, 2) + " s, budget " + fmt(c.budget_s, 0) + " s");
    all_pass &= o.pass;
    std::printf("criterion %d %s: %s (%s) [%.3f s]\n", c.id, c.title, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
  }
  std::fflush(stdout);
  fs::remove_all(cache_dir());
  return all_pass ? 0 : 1;
}
