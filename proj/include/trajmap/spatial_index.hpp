#ifndef TRAJMAP_SPATIAL_INDEX_HPP
#define TRAJMAP_SPATIAL_INDEX_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "trajmap/geo.hpp"

namespace trajmap {

/// Closest point on segment [a, b] to p; t in [0, 1] is the position along the segment.
struct SegmentProjection {
  double t = 0.0;
  PlanarPoint q;
  double dist = 0.0;
};

SegmentProjection project_onto_segment(const PlanarPoint& p, const PlanarPoint& a, const PlanarPoint& b);

/// Distances closer than this are treated as ties and resolved by item order.
inline constexpr double kProjectionTieTolerance = 1e-9;

/**
 * Uniform grid over the sub-segments of a set of polylines.
 *
 * Nearest queries return the sub-segment at minimum distance; among items within
 * kProjectionTieTolerance of the minimum, the lowest (polyline, sub-segment) wins.
 */
class PolylineIndex {
 public:
  struct Hit {
    std::size_t polyline = 0;
    std::size_t sub = 0;  ///< sub-segment k joins vertices k and k + 1
    SegmentProjection proj;
  };

  using Filter = std::function<bool(std::size_t polyline)>;

  PolylineIndex() = default;
  PolylineIndex(std::span<const std::vector<PlanarPoint>> polylines, double cell_size = 10.0);

  bool empty() const { return items_.empty(); }

  std::optional<Hit> nearest(const PlanarPoint& p, const Filter& filter = {}) const;

  /// True if any admitted sub-segment lies within `radius` of p.
  bool any_within(const PlanarPoint& p, double radius, const Filter& filter = {}) const;

 private:
  struct Item {
    std::size_t polyline;
    std::size_t sub;
    PlanarPoint a;
    PlanarPoint b;
  };

  long cell_x(double x) const;
  long cell_y(double y) const;
  const std::vector<std::size_t>* cell(long cx, long cy) const;

  std::vector<Item> items_;
  std::vector<std::vector<std::size_t>> cells_;
  double cell_size_ = 10.0;
  double min_x_ = 0.0;
  double min_y_ = 0.0;
  long nx_ = 0;
  long ny_ = 0;
};

}  // namespace trajmap

#endif  // TRAJMAP_SPATIAL_INDEX_HPP
