#pragma once

#include <numbers>

namespace geofriend::geodesy {

inline constexpr double kEarthRadiusKm = 6371.0;

// Positions closer than this cannot be told apart in geo-tag data.
inline constexpr double kResolutionKm = 0.01;

struct EarthModel {
  double radius_km = kEarthRadiusKm;
};

// Latitude in [-pi/2, pi/2], longitude in (-pi, pi], both radians.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Divide first so that 90 and 180 degrees map to exactly pi/2 and pi.
constexpr double to_radians(double degrees) { return degrees / 180.0 * std::numbers::pi; }
constexpr double to_degrees(double radians) { return radians / std::numbers::pi * 180.0; }

// Wraps a longitude into (-pi, pi].
double wrap_longitude(double lon);

bool is_valid(const GeoPoint& p);

// Great-circle distance by the spherical law of cosines, always in [0, pi R].
// Within about 90 m of identity or the antipode, where acos is badly
// conditioned, the angle is taken from atan2 instead.
double distance_sloc(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth = {});

// Haversine great-circle distance; kept as an independent cross-check.
double distance_haversine(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth = {});

inline bool is_sub_resolution(double distance_km) { return distance_km < kResolutionKm; }

// Point reached by travelling distance_km from origin along the great circle
// leaving at the given bearing (radians clockwise from north).
GeoPoint destination(const GeoPoint& origin, double bearing, double distance_km,
                     const EarthModel& earth = {});

}  // namespace geofriend::geodesy
