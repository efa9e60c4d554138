#include "trajmap/geo.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "trajmap/error.hpp"

namespace trajmap {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMaxPlanarOffset = 100000.0;

double wrap_lon_delta(double d) {
  if (d > 180.0) return d - 360.0;
  if (d < -180.0) return d + 360.0;
  return d;
}

}  // namespace

void validate(const GeoPoint& g) {
  if (!std::isfinite(g.lat) || !std::isfinite(g.lon) || g.lat < -90.0 || g.lat > 90.0 ||
      g.lon < -180.0 || g.lon > 180.0) {
    std::ostringstream os;
    os << "geodetic coordinate out of range: (" << g.lat << ", " << g.lon << ")";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
}

PlanarPoint to_planar(const GeoPoint& g, const GeoPoint& origin) {
  validate(g);
  validate(origin);
  if (std::abs(g.lat - origin.lat) >= 1.0) {
    throw Error(ErrorKind::InvalidInput, "point is more than 1 degree of latitude from the map origin");
  }
  const double dlat = (g.lat - origin.lat) * kDegToRad;
  const double dlon = wrap_lon_delta(g.lon - origin.lon) * kDegToRad;
  return {kEarthRadius * std::cos(origin.lat * kDegToRad) * dlon, kEarthRadius * dlat};
}

GeoPoint to_geodetic(const PlanarPoint& p, const GeoPoint& origin) {
  validate(origin);
  if (!is_finite(p) || std::abs(p.x) >= kMaxPlanarOffset || std::abs(p.y) >= kMaxPlanarOffset) {
    throw Error(ErrorKind::InvalidInput, "planar point is more than 100 km from the map origin");
  }
  GeoPoint g;
  g.lat = origin.lat + p.y / kEarthRadius / kDegToRad;
  g.lon = origin.lon + p.x / (kEarthRadius * std::cos(origin.lat * kDegToRad)) / kDegToRad;
  if (g.lon > 180.0) g.lon -= 360.0;
  if (g.lon < -180.0) g.lon += 360.0;
  validate(g);
  return g;
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) {
  const double dlat = (b.lat - a.lat) * kDegToRad;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double s = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(a.lat * kDegToRad) * std::cos(b.lat * kDegToRad) *
                       std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadius * std::asin(std::min(1.0, std::sqrt(s)));
}

}  // namespace trajmap
