#include "geofriend/geodesy.hpp"

#include <algorithm>
#include <cmath>

namespace geofriend::geodesy {

namespace {

// |cos| above this is within about 1.4e-5 rad (90 m) of identity or antipode.
constexpr double kNearUnit = 1.0 - 1e-10;

}  // namespace

double wrap_longitude(double lon) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (lon > -std::numbers::pi && lon <= std::numbers::pi) {
    return lon;
  }
  double wrapped = std::fmod(lon + std::numbers::pi, kTwoPi);
  if (wrapped <= 0.0) {
    wrapped += kTwoPi;
  }
  return wrapped - std::numbers::pi;
}

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && std::abs(p.lat) <= std::numbers::pi / 2 &&
         p.lon > -std::numbers::pi && p.lon <= std::numbers::pi;
}

double distance_sloc(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth) {
  if (a == b) {
    return 0.0;
  }
  const double c = std::sin(a.lat) * std::sin(b.lat) +
                   std::cos(a.lat) * std::cos(b.lat) * std::cos(b.lon - a.lon);
  if (std::abs(c) < kNearUnit) {
    return earth.radius_km * std::acos(c);
  }
  // acos loses half the digits next to +-1 (about 1e-4 km at the antipode).
  // There the same angle comes from atan2 of the cross and dot products; the
  // points are put in a fixed order so the result stays symmetric.
  const auto& p = b.lat < a.lat || (b.lat == a.lat && b.lon < a.lon) ? b : a;
  const auto& q = &p == &a ? b : a;
  const double dlon = q.lon - p.lon;
  const double x = std::cos(q.lat) * std::sin(dlon);
  const double y = std::cos(p.lat) * std::sin(q.lat) - std::sin(p.lat) * std::cos(q.lat) * std::cos(dlon);
  const double dot = std::sin(p.lat) * std::sin(q.lat) + std::cos(p.lat) * std::cos(q.lat) * std::cos(dlon);
  return earth.radius_km * std::atan2(std::hypot(x, y), dot);
}

double distance_haversine(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth) {
  const double s_lat = std::sin((b.lat - a.lat) / 2.0);
  const double s_lon = std::sin((b.lon - a.lon) / 2.0);
  const double h = s_lat * s_lat + std::cos(a.lat) * std::cos(b.lat) * s_lon * s_lon;
  return 2.0 * earth.radius_km * std::asin(std::min(1.0, std::sqrt(h)));
}

GeoPoint destination(const GeoPoint& origin, double bearing, double distance_km,
                     const EarthModel& earth) {
  const double delta = distance_km / earth.radius_km;
  const double sin_lat = std::sin(origin.lat) * std::cos(delta) +
                         std::cos(origin.lat) * std::sin(delta) * std::cos(bearing);
  const double lat = std::asin(std::clamp(sin_lat, -1.0, 1.0));
  const double lon = origin.lon + std::atan2(std::sin(bearing) * std::sin(delta) * std::cos(origin.lat),
                                             std::cos(delta) - std::sin(origin.lat) * sin_lat);
  return {lat, wrap_longitude(lon)};
}

}  // namespace geofriend::geodesy
