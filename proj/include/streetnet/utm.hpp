#pragma once

#include "streetnet/geometry.hpp"

namespace streetnet::geo {

struct UtmZone {
  int zone = 1;  // 1..60
  bool south = false;

  friend bool operator==(const UtmZone&, const UtmZone&) = default;
};

/// floor((lon + 180) / 6) + 1 clamped to [1, 60]; south when lat < 0.
/// No Norway/Svalbard exceptions.
UtmZone utm_zone_for(const Point& lonlat);

double central_meridian(int zone);

/// WGS84 Transverse Mercator via the 6th-order Krueger series
/// (k0 = 0.9996, false easting 500 km, false northing 10,000 km south).
/// Returns {easting, northing} in meters.
Point to_utm(const Point& lonlat, const UtmZone& zone);
Point from_utm(const Point& en, const UtmZone& zone);

}  // namespace streetnet::geo
