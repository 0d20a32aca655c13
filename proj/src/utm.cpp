#include "streetnet/utm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace streetnet::geo {

namespace {

constexpr double kA = 6378137.0;
constexpr double kF = 1.0 / 298.257223563;
constexpr double kK0 = 0.9996;
constexpr double kFalseEasting = 500000.0;
constexpr double kFalseNorthingSouth = 10000000.0;
constexpr double kDeg = std::numbers::pi / 180.0;

struct Series {
  double e;       // first eccentricity
  double radius;  // rectifying radius A
  std::array<double, 6> alpha;
  std::array<double, 6> beta;
};

Series make_series() {
  const double n = kF / (2.0 - kF);
  const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
  Series s;
  s.e = std::sqrt(kF * (2.0 - kF));
  s.radius = kA / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
  s.alpha = {
      n / 2 - 2 * n2 / 3 + 5 * n3 / 16 + 41 * n4 / 180 - 127 * n5 / 288 + 7891 * n6 / 37800,
      13 * n2 / 48 - 3 * n3 / 5 + 557 * n4 / 1440 + 281 * n5 / 630 - 1983433 * n6 / 1935360,
      61 * n3 / 240 - 103 * n4 / 140 + 15061 * n5 / 26880 + 167603 * n6 / 181440,
      49561 * n4 / 161280 - 179 * n5 / 168 + 6601661 * n6 / 7257600,
      34729 * n5 / 80640 - 3418889 * n6 / 1995840,
      212378941 * n6 / 319334400,
  };
  s.beta = {
      n / 2 - 2 * n2 / 3 + 37 * n3 / 96 - n4 / 360 - 81 * n5 / 512 + 96199 * n6 / 604800,
      n2 / 48 + n3 / 15 - 437 * n4 / 1440 + 46 * n5 / 105 - 1118711 * n6 / 3870720,
      17 * n3 / 480 - 37 * n4 / 840 - 209 * n5 / 4480 + 5569 * n6 / 90720,
      4397 * n4 / 161280 - 11 * n5 / 504 - 830251 * n6 / 7257600,
      4583 * n5 / 161280 - 108847 * n6 / 3991680,
      20648693 * n6 / 638668800,
  };
  return s;
}

const Series& series() {
  static const Series s = make_series();
  return s;
}

}  // namespace

UtmZone utm_zone_for(const Point& lonlat) {
  int zone = static_cast<int>(std::floor((lonlat.x + 180.0) / 6.0)) + 1;
  zone = std::clamp(zone, 1, 60);
  return {zone, lonlat.y < 0.0};
}

double central_meridian(int zone) { return -183.0 + 6.0 * zone; }

Point to_utm(const Point& lonlat, const UtmZone& zone) {
  const Series& s = series();
  const double phi = lonlat.y * kDeg;
  const double lambda = (lonlat.x - central_meridian(zone.zone)) * kDeg;

  const double sin_phi = std::sin(phi);
  const double tau = std::tan(phi);
  const double sigma = std::sinh(s.e * std::atanh(s.e * sin_phi));
  // conformal latitude as tan
  const double tau_c = tau * std::sqrt(1.0 + sigma * sigma) - sigma * std::sqrt(1.0 + tau * tau);

  const double xi_p = std::atan2(tau_c, std::cos(lambda));
  const double eta_p = std::asinh(std::sin(lambda) / std::hypot(tau_c, std::cos(lambda)));

  double xi = xi_p;
  double eta = eta_p;
  for (int j = 1; j <= 6; ++j) {
    const double a = s.alpha[j - 1];
    xi += a * std::sin(2 * j * xi_p) * std::cosh(2 * j * eta_p);
    eta += a * std::cos(2 * j * xi_p) * std::sinh(2 * j * eta_p);
  }
  const double easting = kFalseEasting + kK0 * s.radius * eta;
  double northing = kK0 * s.radius * xi;
  if (zone.south) northing += kFalseNorthingSouth;
  return {easting, northing};
}

Point from_utm(const Point& en, const UtmZone& zone) {
  const Series& s = series();
  const double northing = zone.south ? en.y - kFalseNorthingSouth : en.y;
  const double xi = northing / (kK0 * s.radius);
  const double eta = (en.x - kFalseEasting) / (kK0 * s.radius);

  double xi_p = xi;
  double eta_p = eta;
  for (int j = 1; j <= 6; ++j) {
    const double b = s.beta[j - 1];
    xi_p -= b * std::sin(2 * j * xi) * std::cosh(2 * j * eta);
    eta_p -= b * std::cos(2 * j * xi) * std::sinh(2 * j * eta);
  }
  const double sinh_eta = std::sinh(eta_p);
  const double tau_c = std::sin(xi_p) / std::sqrt(sinh_eta * sinh_eta + std::cos(xi_p) * std::cos(xi_p));
  const double lambda = std::atan2(sinh_eta, std::cos(xi_p));

  // Newton iteration from the conformal latitude back to the geodetic one
  const double e2 = s.e * s.e;
  const double e2m = 1.0 - e2;
  double tau = tau_c;
  for (int i = 0; i < 8; ++i) {
    const double sigma = std::sinh(s.e * std::atanh(s.e * tau / std::sqrt(1.0 + tau * tau)));
    const double tau_i = tau * std::sqrt(1.0 + sigma * sigma) - sigma * std::sqrt(1.0 + tau * tau);
    const double dtau = (tau_c - tau_i) / std::sqrt(1.0 + tau_i * tau_i) * (1.0 + e2m * tau * tau) /
                        (e2m * std::sqrt(1.0 + tau * tau));
    tau += dtau;
    if (std::abs(dtau) < 1e-14) break;
  }
  return {central_meridian(zone.zone) + lambda / kDeg, std::atan(tau) / kDeg};
}

}  // namespace streetnet::geo
