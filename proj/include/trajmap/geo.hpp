#ifndef TRAJMAP_GEO_HPP
#define TRAJMAP_GEO_HPP

#include <cmath>

namespace trajmap {

/// IUGG mean Earth radius, meters.
inline constexpr double kEarthRadius = 6371008.8;

struct GeoPoint {
  double lat = 0.0;  ///< degrees, [-90, 90]
  double lon = 0.0;  ///< degrees, [-180, 180]

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Throws InvalidInput when lat/lon are out of range or not finite.
void validate(const GeoPoint& g);

/// Planar point or vector in a local metric frame (x east, y north, meters).
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;

  PlanarPoint& operator+=(const PlanarPoint& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  PlanarPoint& operator-=(const PlanarPoint& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
};

inline PlanarPoint operator+(PlanarPoint a, const PlanarPoint& b) { return a += b; }
inline PlanarPoint operator-(PlanarPoint a, const PlanarPoint& b) { return a -= b; }
inline PlanarPoint operator*(double s, const PlanarPoint& p) { return {s * p.x, s * p.y}; }
inline PlanarPoint operator*(const PlanarPoint& p, double s) { return {s * p.x, s * p.y}; }

inline double dot(const PlanarPoint& a, const PlanarPoint& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const PlanarPoint& a, const PlanarPoint& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const PlanarPoint& a) { return std::hypot(a.x, a.y); }
inline double distance(const PlanarPoint& a, const PlanarPoint& b) { return norm(a - b); }
inline bool is_finite(const PlanarPoint& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// One row of a trace: time (s) and planar position. Also used with t as arc distance.
struct TimedSample {
  double t = 0.0;
  PlanarPoint p;

  friend bool operator==(const TimedSample&, const TimedSample&) = default;
};

/// Equirectangular projection around `origin`. Requires |g.lat - origin.lat| < 1 degree.
PlanarPoint to_planar(const GeoPoint& g, const GeoPoint& origin);

/// Inverse of to_planar. Requires |p.x|, |p.y| < 100 km.
GeoPoint to_geodetic(const PlanarPoint& p, const GeoPoint& origin);

/// Great-circle distance on the sphere of radius kEarthRadius.
double haversine_distance(const GeoPoint& a, const GeoPoint& b);

}  // namespace trajmap

#endif  // TRAJMAP_GEO_HPP
