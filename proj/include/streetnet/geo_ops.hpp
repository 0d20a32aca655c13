#pragma once

#include <variant>

#include "streetnet/geometry.hpp"
#include "streetnet/graph.hpp"
#include "streetnet/utm.hpp"

namespace streetnet::geo {

inline constexpr double kDefaultBufferM = 500.0;

/// Expands a lon/lat polygon outward by distance meters. The buffer is
/// built in the UTM zone of the polygon's centroid with round joins
/// circumscribing the true offset curve, then unprojected. Distance 0
/// returns the input unchanged.
/// Throws Error(InvalidPolygon) for invalid input or negative distance.
MultiPolygon buffer_polygon(const MultiPolygon& polygon, double distance_m);

/// Throws Error(InvalidPolygon) unless every ring is closed, finite and
/// simple.
void validate_polygon(const MultiPolygon& polygon);

/// Area of a lon/lat polygon in km^2, measured in its centroid UTM zone.
double area_km2(const MultiPolygon& polygon);

/// Square box with half-side distance_m centered on a lon/lat point.
BBox bbox_around(const Point& center, double distance_m);

using Boundary = std::variant<BBox, MultiPolygon>;

/// Drops nodes outside the lon/lat boundary (edge points count as inside)
/// and any node left without edges. street_count values are never
/// recomputed; nodes lacking one get it from the untruncated graph first.
/// Throws Error(EmptyResult) when nothing remains.
StreetGraph truncate_graph(const StreetGraph& g, const Boundary& boundary);

/// Keeps nodes within radius_m network distance (length-weighted, along
/// edge direction) of center, plus the edges between them.
/// Throws Error(UnknownNode) / Error(InvalidArgument).
StreetGraph truncate_by_network_distance(const StreetGraph& g, NodeId center, double radius_m);

/// Projects node coordinates and edge geometries to UTM in the zone of the
/// mean node position. Throws Error(AlreadyProjected).
StreetGraph project_graph(const StreetGraph& g);

/// lon/lat of a coordinate in the graph's CRS.
Point to_lonlat(const Crs& crs, const Point& p);
/// Coordinate in the graph's CRS for a lon/lat point.
Point from_lonlat(const Crs& crs, const Point& lonlat);

}  // namespace streetnet::geo
