#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "streetnet/graph.hpp"

namespace streetnet::io {

// --- GraphML -------------------------------------------------------------
//
// Node keys: x, y, street_count?, elevation?
// Edge keys: key, osmid, length, oneway, highway?, name?, geometry? (WKT),
//            grade?; endpoints are the source/target attributes.
// Graph keys: crs, network_type, simplified, boundary? (WKT)
// Any other declared key is kept verbatim in the matching `extra` map and
// written back out as a string key.

std::string write_graphml(const StreetGraph& g);
/// Throws Error(ParseError) for malformed XML and Error(SchemaViolation) for
/// undeclared or missing mandatory keys.
StreetGraph read_graphml(std::string_view document);

void save_graphml(const StreetGraph& g, const std::filesystem::path& path);
StreetGraph load_graphml(const std::filesystem::path& path);

// --- WKT helpers used by the GraphML encoding ------------------------------

std::string format_number(double value);
std::string linestring_wkt(const std::vector<Point>& points);
std::vector<Point> parse_linestring_wkt(std::string_view text);
std::string multipolygon_wkt(const MultiPolygon& mp);
MultiPolygon parse_polygon_wkt(std::string_view text);

// --- GeoJSON ---------------------------------------------------------------

/// Point features for nodes, lon/lat rounded to 7 decimals.
nlohmann::json nodes_geojson(const StreetGraph& g);
/// LineString features for the undirected projection's edges with u, v,
/// key, osmid, length, oneway, highway and name properties.
nlohmann::json edges_geojson(const StreetGraph& g);
/// Throws Error(EmptyGraph) / Error(IoError).
void export_geojson(const StreetGraph& g, const std::filesystem::path& nodes_path,
                    const std::filesystem::path& edges_path);

struct PolygonFeature {
  MultiPolygon geometry;
  nlohmann::json properties = nlohmann::json::object();
};
/// Polygon / MultiPolygon features, exterior rings counter-clockwise.
nlohmann::json polygons_geojson(const std::vector<PolygonFeature>& features);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

// --- SVG -------------------------------------------------------------------

inline constexpr double kSquareMileSideM = 1609.34;

struct SvgOptions {
  int width_px = 800;
  double stroke_m = 4.0;
  /// Crop in graph units: minx, miny, maxx, maxy.
  std::optional<std::array<double, 4>> bbox;
  /// lon/lat center of a one-square-mile crop.
  std::optional<Point> square_mile_center;
};

/// Figure-ground drawing of the undirected projection: black centerlines on
/// white, one path per street in (u, v, key) order. The viewBox is in graph
/// meters with north up. Throws Error(NotProjected) / Error(EmptyGraph).
std::string render_svg(const StreetGraph& g, const SvgOptions& options = {});

}  // namespace streetnet::io
