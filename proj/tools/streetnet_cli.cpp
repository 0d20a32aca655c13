#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "streetnet/error.hpp"
#include "streetnet/geo_ops.hpp"
#include "streetnet/io.hpp"
#include "streetnet/measures.hpp"
#include "streetnet/osm_client.hpp"
#include "streetnet/pipeline.hpp"
#include "streetnet/routing.hpp"

namespace sn = streetnet;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> parse_numbers(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw sn::Error(sn::ErrorKind::InvalidArgument, std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != count) {
    throw sn::Error(sn::ErrorKind::InvalidArgument,
                    std::string(what) + " needs " + std::to_string(count) + " comma-separated numbers");
  }
  return out;
}

sn::Point parse_lonlat(const std::string& text, const char* what) {
  const auto v = parse_numbers(text, 2, what);
  if (v[0] < -180 || v[0] > 180 || v[1] < -90 || v[1] > 90) {
    throw sn::Error(sn::ErrorKind::InvalidArgument, std::string(what) + " is outside lon/lat range");
  }
  return {v[0], v[1]};
}

sn::BBox parse_bbox(const std::string& text) {
  const auto v = parse_numbers(text, 4, "--bbox");
  return {v[0], v[1], v[2], v[3]};
}

struct Globals {
  sn::pipeline::ConfigOverrides overrides;
  std::string fetch_mode;
  std::string config_file;
  std::string cache_dir;
  std::string overpass_url;
  std::string nominatim_url;
};

sn::pipeline::Config config_from(const Globals& g) {
  auto o = g.overrides;
  if (!g.config_file.empty()) o.config_file = g.config_file;
  if (!g.cache_dir.empty()) o.cache_dir = g.cache_dir;
  if (!g.overpass_url.empty()) o.overpass_url = g.overpass_url;
  if (!g.nominatim_url.empty()) o.nominatim_url = g.nominatim_url;
  if (!g.fetch_mode.empty()) o.mode = g.fetch_mode;
  return sn::pipeline::resolve_config(o);
}

std::unique_ptr<sn::osm::OsmClient> make_client(const sn::pipeline::Config& cfg) {
  std::shared_ptr<sn::osm::Transport> transport;
  if (cfg.client.mode == sn::osm::FetchMode::Fixture) {
    transport = std::make_shared<sn::osm::FailingTransport>();
  } else {
    transport = std::make_shared<sn::osm::HttpTransport>(std::chrono::seconds(cfg.client.overpass_timeout_s));
  }
  return std::make_unique<sn::osm::OsmClient>(cfg.client, transport);
}

sn::measures::AreaSpec area_for(const sn::StreetGraph& g, std::optional<double> area_km2) {
  using Source = sn::measures::AreaSpec::Source;
  if (area_km2) return {*area_km2, Source::User};
  if (g.meta.boundary && !g.meta.boundary->empty()) return {sn::geo::area_km2(*g.meta.boundary), Source::Polygon};
  if (g.empty()) throw sn::Error(sn::ErrorKind::EmptyGraph, "graph has no nodes");
  sn::Ring pts;
  for (const auto& n : g.nodes()) pts.push_back(sn::geo::to_lonlat(g.meta.crs, n.point()));
  const auto box = sn::bounds_of(pts);
  if (!box.has_area()) throw sn::Error(sn::ErrorKind::InvalidArgument, "cannot infer an area; pass --area");
  return {sn::geo::area_km2({box.to_polygon()}), Source::BBox};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Street network acquisition, simplification and analysis"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--config", globals.config_file, "JSON config file (else $STREETNET_CONFIG)");
  app.add_option("--cache-dir", globals.cache_dir, "response cache directory (else $STREETNET_CACHE_DIR)");
  app.add_option("--fetch-mode", globals.fetch_mode, "live | cache-first | fixture (else $STREETNET_MODE)")
      ->check(CLI::IsMember({"live", "cache-first", "fixture"}));
  app.add_option("--overpass-url", globals.overpass_url, "Overpass endpoint");
  app.add_option("--nominatim-url", globals.nominatim_url, "Nominatim search endpoint");

  // fetch
  auto* fetch = app.add_subcommand("fetch", "download, build and simplify a street network");
  std::vector<std::string> f_places;
  std::string f_bbox, f_point, f_address, f_polygon, f_network, f_mode = "strict", f_out, f_dist_type = "bbox";
  std::optional<double> f_dist, f_buffer;
  bool f_no_simplify = false;
  auto* o_place = fetch->add_option("--place", f_places, "place name (repeatable)");
  auto* o_bbox = fetch->add_option("--bbox", f_bbox, "south,west,north,east in degrees");
  auto* o_point = fetch->add_option("--point", f_point, "lon,lat center (needs --dist)");
  auto* o_address = fetch->add_option("--address", f_address, "address to geocode (needs --dist)");
  auto* o_poly = fetch->add_option("--polygon-file", f_polygon, "GeoJSON polygon in lon/lat");
  fetch->add_option("--dist", f_dist, "distance in meters for --point / --address");
  fetch->add_option("--dist-type", f_dist_type, "bbox | network")->check(CLI::IsMember({"bbox", "network"}));
  fetch->add_option("--network-type", f_network, "drive | drive_service | walk | bike | all | all_private");
  fetch->add_flag("--no-simplify", f_no_simplify, "keep every OSM node");
  fetch->add_option("--mode", f_mode, "simplification mode")->check(CLI::IsMember({"strict", "non-strict"}));
  fetch->add_option("--buffer", f_buffer, "download buffer in meters");
  fetch->add_option("--out", f_out, "GraphML output path")->required();
  for (auto* a : {o_place, o_bbox, o_point, o_address, o_poly}) {
    for (auto* b : {o_place, o_bbox, o_point, o_address, o_poly}) {
      if (a != b) a->excludes(b);
    }
  }

  // stats
  auto* stats = app.add_subcommand("stats", "network measures as JSON");
  std::string s_in;
  std::optional<double> s_area;
  bool s_extended = false, s_largest_scc = false, s_skip_ecc = false;
  unsigned s_workers = 0;
  stats->add_option("--in", s_in, "GraphML file")->required();
  stats->add_option("--area", s_area, "area in km^2 (default: stored boundary)");
  stats->add_flag("--extended", s_extended, "add centrality, connectivity and eccentricity measures");
  stats->add_flag("--largest-scc", s_largest_scc, "eccentricity family on the largest strongly connected component");
  stats->add_flag("--skip-eccentricity", s_skip_ecc, "omit the eccentricity family if not strongly connected");
  stats->add_option("--workers", s_workers, "worker threads (0 = all cores)");

  // route
  auto* route = app.add_subcommand("route", "shortest path between two points");
  std::string r_in, r_from, r_to, r_weight = "length";
  route->add_option("--in", r_in, "GraphML file")->required();
  route->add_option("--from", r_from, "origin lon,lat")->required();
  route->add_option("--to", r_to, "destination lon,lat")->required();
  route->add_option("--weight", r_weight, "edge attribute to minimize");

  // export
  auto* exp = app.add_subcommand("export", "GeoJSON layers or SVG figure-ground");
  std::string e_in, e_format, e_out, e_square;
  int e_width = 800;
  double e_stroke = 4.0;
  exp->add_option("--in", e_in, "GraphML file")->required();
  exp->add_option("--format", e_format, "geojson | svg")->required()->check(CLI::IsMember({"geojson", "svg"}));
  exp->add_option("--out", e_out, "output directory (geojson) or file (svg)")->required();
  exp->add_option("--square-mile", e_square, "lon,lat center of a one-square-mile crop (svg)");
  exp->add_option("--width", e_width, "SVG width in pixels")->check(CLI::PositiveNumber);
  exp->add_option("--stroke", e_stroke, "SVG stroke width in meters")->check(CLI::PositiveNumber);

  // boundary / footprints
  auto* boundary = app.add_subcommand("boundary", "place boundary polygons as GeoJSON");
  std::vector<std::string> b_places;
  std::string b_out;
  boundary->add_option("--place", b_places, "place name (repeatable)")->required();
  boundary->add_option("--out", b_out, "GeoJSON output path")->required();

  auto* footprints = app.add_subcommand("footprints", "building footprints as GeoJSON");
  std::vector<std::string> fp_places;
  std::string fp_bbox, fp_out;
  auto* fp_place_opt = footprints->add_option("--place", fp_places, "place name (repeatable)");
  auto* fp_bbox_opt = footprints->add_option("--bbox", fp_bbox, "south,west,north,east in degrees");
  fp_place_opt->excludes(fp_bbox_opt);
  fp_bbox_opt->excludes(fp_place_opt);
  footprints->add_option("--out", fp_out, "GeoJSON output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  try {
    const auto cfg = config_from(globals);

    if (*fetch) {
      const int modes = !f_places.empty() + !f_bbox.empty() + !f_point.empty() + !f_address.empty() + !f_polygon.empty();
      if (modes != 1) {
        std::cerr << "usage error: give exactly one of --place, --bbox, --point, --address, --polygon-file\n";
        return 2;
      }
      sn::pipeline::NetworkQuery q;
      q.network_type = f_network.empty() ? cfg.default_network_type : sn::osm::parse_network_type(f_network);
      q.simplify = !f_no_simplify;
      q.mode = f_mode == "strict" ? sn::SimplifyMode::Strict : sn::SimplifyMode::NonStrict;
      q.buffer_m = f_buffer.value_or(cfg.default_buffer_m);
      const auto dist_type =
          f_dist_type == "network" ? sn::pipeline::DistanceType::Network : sn::pipeline::DistanceType::BBox;
      if ((!f_point.empty() || !f_address.empty()) && !f_dist) {
        std::cerr << "usage error: --point and --address need --dist\n";
        return 2;
      }
      if (!f_places.empty()) {
        q.spec = sn::pipeline::PlaceQuery{f_places};
      } else if (!f_bbox.empty()) {
        q.spec = parse_bbox(f_bbox);
      } else if (!f_point.empty()) {
        q.spec = sn::pipeline::PointQuery{parse_lonlat(f_point, "--point"), *f_dist, dist_type};
      } else if (!f_address.empty()) {
        q.spec = sn::pipeline::AddressQuery{f_address, *f_dist, dist_type};
      } else {
        q.spec = sn::pipeline::read_polygon_geojson(sn::io::read_text(f_polygon));
      }
      auto client = make_client(cfg);
      const auto g = sn::pipeline::graph_from_query(*client, q);
      sn::io::save_graphml(g, f_out);
      std::cout << json{{"n", g.node_count()},
                        {"m", g.edge_count()},
                        {"network_type", sn::osm::to_string(g.meta.network_type)},
                        {"out", f_out}}
                       .dump()
                << "\n";
      return 0;
    }

    if (*stats) {
      const auto g = sn::io::load_graphml(s_in);
      const auto area = area_for(g, s_area);
      sn::measures::NetworkStats st;
      if (s_extended) {
        sn::measures::ExtendedOptions opt;
        opt.use_largest_scc = s_largest_scc;
        opt.skip_eccentricity_if_disconnected = s_skip_ecc;
        opt.workers = s_workers;
        st = sn::measures::extended_stats(g, area, opt);
      } else {
        st = sn::measures::basic_stats(g, area);
      }
      std::cout << sn::measures::to_json(st).dump(2) << "\n";
      return 0;
    }

    if (*route) {
      const auto g = sn::io::load_graphml(r_in);
      const auto s = sn::routing::nearest_node(g, parse_lonlat(r_from, "--from"));
      const auto t = sn::routing::nearest_node(g, parse_lonlat(r_to, "--to"));
      const auto r = sn::routing::shortest_path(g, s, t, r_weight);
      std::cout << sn::routing::to_json(g, r).dump(2) << "\n";
      return 0;
    }

    if (*exp) {
      auto g = sn::io::load_graphml(e_in);
      if (e_format == "geojson") {
        if (g.empty()) throw sn::Error(sn::ErrorKind::EmptyGraph, "nothing to export: graph has no nodes");
        std::error_code ec;
        fs::create_directories(e_out, ec);
        if (ec) throw sn::Error(sn::ErrorKind::IoError, "cannot create " + e_out + ": " + ec.message());
        const fs::path nodes = fs::path(e_out) / "nodes.geojson";
        const fs::path edges = fs::path(e_out) / "edges.geojson";
        sn::io::export_geojson(g, nodes, edges);
        std::cout << json{{"nodes", nodes.string()}, {"edges", edges.string()}}.dump() << "\n";
      } else {
        if (!g.meta.crs.projected()) g = sn::geo::project_graph(g);
        sn::io::SvgOptions opt;
        opt.width_px = e_width;
        opt.stroke_m = e_stroke;
        if (!e_square.empty()) opt.square_mile_center = parse_lonlat(e_square, "--square-mile");
        sn::io::write_text(e_out, sn::io::render_svg(g, opt));
        std::cout << json{{"svg", e_out}}.dump() << "\n";
      }
      return 0;
    }

    if (*boundary) {
      auto client = make_client(cfg);
      std::vector<sn::io::PolygonFeature> features;
      for (const auto& name : b_places) {
        const auto b = client->geocode_place(name);
        if (b.point_only) {
          throw sn::Error(sn::ErrorKind::NoResult, "'" + name + "' resolved to a point, not a boundary polygon");
        }
        features.push_back({b.geometry, {{"query", name}, {"display_name", b.display_name}}});
      }
      sn::io::write_text(b_out, sn::io::polygons_geojson(features).dump());
      std::cout << json{{"features", features.size()}, {"out", b_out}}.dump() << "\n";
      return 0;
    }

    if (*footprints) {
      if (fp_places.empty() == fp_bbox.empty()) {
        std::cerr << "usage error: give exactly one of --place or --bbox\n";
        return 2;
      }
      auto client = make_client(cfg);
      sn::osm::Region region;
      if (!fp_places.empty()) region = sn::pipeline::place_polygons(*client, fp_places);
      else region = parse_bbox(fp_bbox);
      const auto fc = client->fetch_footprints(region);
      for (const auto& w : fc.warnings) std::cerr << "warning: " << w << "\n";
      std::vector<sn::io::PolygonFeature> features;
      for (const auto& f : fc.features) {
        json props = f.tags;
        props["osmid"] = f.id;
        props["element"] = f.relation ? "relation" : "way";
        features.push_back({f.geometry, props});
      }
      sn::io::write_text(fp_out, sn::io::polygons_geojson(features).dump());
      std::cout << json{{"features", features.size()}, {"skipped", fc.skipped}, {"out", fp_out}}.dump() << "\n";
      return 0;
    }
  } catch (const sn::Error& e) {
    std::cerr << "error [" << sn::to_string(e.kind()) << "]: " << e.what() << "\n";
    return sn::pipeline::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
