#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "streetnet/error.hpp"
#include "streetnet/geo_ops.hpp"
#include "streetnet/osm_client.hpp"
#include "streetnet/simplify.hpp"

namespace streetnet::pipeline {

struct Config {
  osm::ClientConfig client;
  std::string elevation_url;
  osm::NetworkType default_network_type = osm::NetworkType::Drive;
  double default_buffer_m = geo::kDefaultBufferM;
  SimplifyMode simplify_mode = SimplifyMode::Strict;
};

/// Values given on the command line; unset fields fall through.
struct ConfigOverrides {
  std::optional<std::filesystem::path> config_file;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::string> overpass_url;
  std::optional<std::string> nominatim_url;
  std::optional<std::string> elevation_url;
  std::optional<std::string> mode;
  std::optional<double> buffer_m;
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;
EnvLookup process_env();

/// Layers flags > environment > config file > defaults. The config file is
/// the --config flag, else $STREETNET_CONFIG. Throws Error(InvalidArgument)
/// for bad values and Error(IoError) / Error(ParseError) for the file.
Config resolve_config(const ConfigOverrides& flags, const EnvLookup& env = process_env());

enum class DistanceType { BBox, Network };

struct PointQuery {
  Point lonlat;
  double dist_m = 1000.0;
  DistanceType dist_type = DistanceType::BBox;
};
struct AddressQuery {
  std::string address;
  double dist_m = 1000.0;
  DistanceType dist_type = DistanceType::BBox;
};
struct PlaceQuery {
  std::vector<std::string> names;
};

using QuerySpec = std::variant<BBox, PointQuery, AddressQuery, MultiPolygon, PlaceQuery>;

struct NetworkQuery {
  QuerySpec spec;
  osm::NetworkType network_type = osm::NetworkType::Drive;
  bool simplify = true;
  SimplifyMode mode = SimplifyMode::Strict;
  double buffer_m = geo::kDefaultBufferM;
};

/// Geocodes every name and merges the polygons. Throws Error(NoResult) when a
/// place only resolves to a point.
MultiPolygon place_polygons(osm::OsmClient& client, const std::vector<std::string>& names);

/// Requested boundary and the buffered region that gets downloaded.
struct ResolvedQuery {
  geo::Boundary boundary;
  MultiPolygon boundary_polygon;  // lon/lat, stored as graph metadata
  osm::Region fetch_region;
  std::optional<Point> network_center;  // set for network-distance queries
  double network_radius_m = 0.0;
};
ResolvedQuery resolve_query(osm::OsmClient& client, const NetworkQuery& query);

/// geocode -> buffer -> fetch -> build -> simplify -> street counts ->
/// truncate. Throws whatever the stages throw; Error(EmptyResult) when the
/// truncated graph is empty.
StreetGraph graph_from_query(osm::OsmClient& client, const NetworkQuery& query);

/// Same stages on an already downloaded response.
StreetGraph graph_from_response(const osm::OverpassResponse& response, const ResolvedQuery& resolved,
                                const NetworkQuery& query);

/// Reads a GeoJSON Polygon / MultiPolygon (bare geometry, Feature or
/// FeatureCollection) in lon/lat.
MultiPolygon read_polygon_geojson(const std::string& document);

/// Process exit status for an error kind.
int exit_code_for(ErrorKind kind);

}  // namespace streetnet::pipeline
