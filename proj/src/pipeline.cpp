#include "streetnet/pipeline.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "streetnet/routing.hpp"

namespace streetnet::pipeline {

using nlohmann::json;

EnvLookup process_env() {
  return [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
}

namespace {

SimplifyMode parse_simplify_mode(const std::string& s) {
  if (s == "strict") return SimplifyMode::Strict;
  if (s == "non-strict" || s == "non_strict" || s == "nonstrict") return SimplifyMode::NonStrict;
  throw Error(ErrorKind::InvalidArgument, "unknown simplify mode '" + s + "'");
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " is not a number: '" + s + "'");
  }
}

void apply_file(Config& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read config file " + path.string());
  json j = json::parse(in, nullptr, false);
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "config file " + path.string() + " is not a JSON object");
  try {
    if (j.contains("cache_dir")) {
      std::filesystem::path dir = j["cache_dir"].get<std::string>();
      if (dir.is_relative()) dir = path.parent_path() / dir;
      cfg.client.cache_dir = dir;
    }
    if (j.contains("mode")) cfg.client.mode = osm::parse_fetch_mode(j["mode"].get<std::string>());
    if (j.contains("endpoints")) {
      const auto& e = j["endpoints"];
      if (e.contains("overpass")) cfg.client.overpass_url = e["overpass"].get<std::string>();
      if (e.contains("nominatim")) cfg.client.nominatim_url = e["nominatim"].get<std::string>();
      if (e.contains("elevation")) cfg.elevation_url = e["elevation"].get<std::string>();
    }
    if (j.contains("default_network_type")) {
      cfg.default_network_type = osm::parse_network_type(j["default_network_type"].get<std::string>());
    }
    if (j.contains("default_buffer_m")) cfg.default_buffer_m = j["default_buffer_m"].get<double>();
    if (j.contains("simplify_mode")) cfg.simplify_mode = parse_simplify_mode(j["simplify_mode"].get<std::string>());
    if (j.contains("max_tile_km2")) cfg.client.max_tile_km2 = j["max_tile_km2"].get<double>();
    if (j.contains("overpass_timeout_s")) cfg.client.overpass_timeout_s = j["overpass_timeout_s"].get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, "config file " + path.string() + ": " + e.what());
  }
}

}  // namespace

Config resolve_config(const ConfigOverrides& flags, const EnvLookup& env) {
  Config cfg;

  std::optional<std::filesystem::path> file = flags.config_file;
  if (!file) {
    if (auto v = env("STREETNET_CONFIG")) file = *v;
  }
  if (file) apply_file(cfg, *file);

  if (auto v = env("STREETNET_CACHE_DIR")) cfg.client.cache_dir = *v;
  if (auto v = env("STREETNET_OVERPASS_URL")) cfg.client.overpass_url = *v;
  if (auto v = env("STREETNET_NOMINATIM_URL")) cfg.client.nominatim_url = *v;
  if (auto v = env("STREETNET_ELEVATION_URL")) cfg.elevation_url = *v;
  if (auto v = env("STREETNET_MODE")) cfg.client.mode = osm::parse_fetch_mode(*v);
  if (auto v = env("STREETNET_BUFFER_M")) cfg.default_buffer_m = parse_double(*v, "STREETNET_BUFFER_M");

  if (flags.cache_dir) cfg.client.cache_dir = *flags.cache_dir;
  if (flags.overpass_url) cfg.client.overpass_url = *flags.overpass_url;
  if (flags.nominatim_url) cfg.client.nominatim_url = *flags.nominatim_url;
  if (flags.elevation_url) cfg.elevation_url = *flags.elevation_url;
  if (flags.mode) cfg.client.mode = osm::parse_fetch_mode(*flags.mode);
  if (flags.buffer_m) cfg.default_buffer_m = *flags.buffer_m;

  if (!(cfg.default_buffer_m >= 0.0)) throw Error(ErrorKind::InvalidArgument, "buffer distance must be >= 0");
  if (!(cfg.client.max_tile_km2 > 0.0)) throw Error(ErrorKind::InvalidArgument, "max_tile_km2 must be > 0");
  return cfg;
}

MultiPolygon place_polygons(osm::OsmClient& client, const std::vector<std::string>& names) {
  if (names.empty()) throw Error(ErrorKind::NoResult, "no place names given");
  MultiPolygon all;
  for (const auto& name : names) {
    const auto b = client.geocode_place(name);
    if (b.point_only) {
      throw Error(ErrorKind::NoResult, "'" + name + "' resolved to a point, not a boundary polygon");
    }
    all.insert(all.end(), b.geometry.begin(), b.geometry.end());
  }
  return all;
}

ResolvedQuery resolve_query(osm::OsmClient& client, const NetworkQuery& query) {
  if (!(query.buffer_m >= 0.0)) throw Error(ErrorKind::InvalidArgument, "buffer distance must be >= 0");
  ResolvedQuery r;

  auto around = [&](const Point& center, double dist, DistanceType type) {
    if (!(dist > 0.0)) throw Error(ErrorKind::InvalidArgument, "distance must be > 0");
    const BBox box = geo::bbox_around(center, dist);
    r.boundary = box;
    r.boundary_polygon = {box.to_polygon()};
    if (type == DistanceType::Network) {
      r.network_center = center;
      r.network_radius_m = dist;
    }
  };

  if (const auto* b = std::get_if<BBox>(&query.spec)) {
    if (!b->has_area()) throw Error(ErrorKind::InvalidArgument, "bounding box has zero area");
    r.boundary = *b;
    r.boundary_polygon = {b->to_polygon()};
  } else if (const auto* p = std::get_if<PointQuery>(&query.spec)) {
    around(p->lonlat, p->dist_m, p->dist_type);
  } else if (const auto* a = std::get_if<AddressQuery>(&query.spec)) {
    around(client.geocode_place(a->address).centroid, a->dist_m, a->dist_type);
  } else if (const auto* mp = std::get_if<MultiPolygon>(&query.spec)) {
    geo::validate_polygon(*mp);
    r.boundary = *mp;
    r.boundary_polygon = *mp;
  } else {
    const auto polys = place_polygons(client, std::get<PlaceQuery>(query.spec).names);
    r.boundary = polys;
    r.boundary_polygon = polys;
  }

  const MultiPolygon buffered = geo::buffer_polygon(r.boundary_polygon, query.buffer_m);
  if (std::holds_alternative<BBox>(r.boundary)) {
    r.fetch_region = bounds_of(buffered);
  } else {
    r.fetch_region = buffered;
  }
  return r;
}

StreetGraph graph_from_response(const osm::OverpassResponse& response, const ResolvedQuery& resolved,
                                const NetworkQuery& query) {
  StreetGraph g = build_graph(response.elements, query.network_type);
  if (g.empty()) throw Error(ErrorKind::EmptyResult, "no streets of this network type in the query region");
  if (query.simplify) g = simplify_graph(g, query.mode);
  // counts come from the buffered graph so cut-off streets still count
  assign_street_counts(g);
  if (resolved.network_center) {
    const NodeId center = routing::nearest_node(g, *resolved.network_center);
    g = geo::truncate_by_network_distance(g, center, resolved.network_radius_m);
  } else {
    g = geo::truncate_graph(g, resolved.boundary);
  }
  g.meta.boundary = resolved.boundary_polygon;
  return g;
}

StreetGraph graph_from_query(osm::OsmClient& client, const NetworkQuery& query) {
  const ResolvedQuery resolved = resolve_query(client, query);
  const auto response = client.fetch_streets(resolved.fetch_region, query.network_type);
  return graph_from_response(response, resolved, query);
}

namespace {

Ring ring_of(const json& coords) {
  Ring r;
  for (const auto& p : coords) r.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  close_ring(r);
  return r;
}

void collect(const json& j, MultiPolygon& out) {
  const std::string type = j.value("type", "");
  if (type == "FeatureCollection") {
    for (const auto& f : j.at("features")) collect(f, out);
  } else if (type == "Feature") {
    collect(j.at("geometry"), out);
  } else if (type == "Polygon" || type == "MultiPolygon") {
    auto add = [&](const json& rings) {
      Polygon p;
      for (std::size_t i = 0; i < rings.size(); ++i) {
        if (i == 0) p.outer = ring_of(rings[i]);
        else p.holes.push_back(ring_of(rings[i]));
      }
      out.push_back(std::move(p));
    };
    if (type == "Polygon") add(j.at("coordinates"));
    else for (const auto& rings : j.at("coordinates")) add(rings);
  } else {
    throw Error(ErrorKind::InvalidPolygon, "GeoJSON object of type '" + type + "' is not a polygon");
  }
}

}  // namespace

MultiPolygon read_polygon_geojson(const std::string& document) {
  const json j = json::parse(document, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::ParseError, "polygon file is not valid JSON");
  MultiPolygon mp;
  try {
    collect(j, mp);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidPolygon, std::string("malformed GeoJSON polygon: ") + e.what());
  }
  if (mp.empty()) throw Error(ErrorKind::InvalidPolygon, "polygon file holds no polygons");
  geo::validate_polygon(mp);
  return mp;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnsupportedFormat:
      return 2;
    case ErrorKind::NoResult:
      return 3;
    case ErrorKind::RateLimited:
    case ErrorKind::Transport:
    case ErrorKind::ServerBusy:
    case ErrorKind::FixtureMissing:
    case ErrorKind::ProviderAuth:
      return 4;
    case ErrorKind::EmptyResult:
    case ErrorKind::EmptyGraph:
      return 5;
    case ErrorKind::NotStronglyConnected:
      return 6;
    case ErrorKind::NoPath:
      return 7;
    default:
      return 1;
  }
}

}  // namespace streetnet::pipeline
