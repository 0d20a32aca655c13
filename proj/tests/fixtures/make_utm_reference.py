"""Regenerate utm_reference.csv with pyproj (PROJ) as an independent reference.

Run: python3 make_utm_reference.py > utm_reference.csv
"""
import math

from pyproj import Transformer

POINTS = [
    # lon, lat
    (-122.2728, 37.8694),   # Berkeley City Hall
    (-122.6765, 45.5231),   # Portland
    (-122.6250, 45.5270),
    (-122.7500, 45.5350),
    (-118.2437, 34.0522),   # Los Angeles
    (10.9252, 44.6471),     # Modena
    (10.1711, 36.7990),     # Tunis medina
    (28.2833, -15.4167),    # Lusaka
    (31.0530, -17.8292),    # Harare
    (25.9231, -24.6282),    # Gaborone
    (151.2093, -33.8688),   # Sydney
    (-58.3816, -34.6037),   # Buenos Aires
    (139.6917, 35.6895),    # Tokyo
    (-0.1276, 51.5072),     # London
    (18.0686, 59.3293),     # Stockholm
    (-75.0, 0.0),           # zone 18 central meridian, equator
    (-177.5, 10.0),         # zone 1
    (179.0, -45.0),         # zone 60
    (2.9, 70.0),            # high latitude near zone edge
    (-68.3, -54.8),         # Ushuaia
]


def zone_of(lon):
    return min(max(int(math.floor((lon + 180.0) / 6.0)) + 1, 1), 60)


print("lon,lat,zone,hemisphere,easting,northing")
for lon, lat in POINTS:
    zone = zone_of(lon)
    south = lat < 0
    epsg = (32700 if south else 32600) + zone
    tr = Transformer.from_crs("EPSG:4326", f"EPSG:{epsg}", always_xy=True)
    e, n = tr.transform(lon, lat)
    print(f"{lon},{lat},{zone},{'S' if south else 'N'},{e:.4f},{n:.4f}")
