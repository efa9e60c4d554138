#ifndef TRAJMAP_ROADMAP_HPP
#define TRAJMAP_ROADMAP_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "trajmap/geo.hpp"
#include "trajmap/image.hpp"
#include "trajmap/polyfit.hpp"
#include "trajmap/spatial_index.hpp"
#include "trajmap/topology.hpp"

namespace trajmap {

/// Largest allowed distance between consecutive trace samples.
inline constexpr double kMaxSampleGap = 50.0;
/// Half of the stroke width used when rasterizing roads.
inline constexpr double kRoadHalfWidth = 2.0;
/// Largest end-to-start gap tolerated between consecutive segments.
inline constexpr double kMaxAdjacencyGap = 0.5;

/// A fitted map segment: curve over arc distance d in [0, length] plus its 1 m polyline.
struct MapSegment {
  SegmentId id;
  Curve2D curve;
  double length = 0.0;
  std::vector<PlanarPoint> polyline;  ///< curve(k) for k = 0..floor(length)
  std::size_t support = 0;            ///< trace samples behind the fit; 0 when unknown

  PlanarPoint start() const { return curve.at(0.0); }
  PlanarPoint end() const { return curve.at(length); }
};

/// Builds a segment from its curve; the polyline is regenerated.
MapSegment make_segment(SegmentId id, const Curve2D& curve, double length);

using SegmentMap = std::map<SegmentId, MapSegment>;

struct Projection {
  SegmentId segment;
  double d = 0.0;  ///< arc distance of q along the segment
  PlanarPoint q;
  double dist = 0.0;
};

/// Immutable analytical road map with a projection index over all polylines.
class RoadMap {
 public:
  RoadMap() = default;
  RoadMap(GraphTopology topology, SegmentMap segments, GeoPoint origin);

  const GraphTopology& topology() const { return topology_; }
  const SegmentMap& segments() const { return segments_; }
  const GeoPoint& origin() const { return origin_; }

  const MapSegment* find(const SegmentId& id) const;

  /// Nearest segment over all polylines. Throws InvalidInput for an empty map.
  Projection project(const PlanarPoint& p) const;
  /// Nearest among `candidates` only; nullopt when none of them exist.
  std::optional<Projection> project(const PlanarPoint& p, std::span<const SegmentId> candidates) const;

  /// True if any admitted polyline passes within `radius` of p (all when `subset` is null).
  bool near_road(const PlanarPoint& p, double radius, const std::vector<char>* subset) const;
  /// Position of `id` in canonical order, for building `subset` masks.
  std::optional<std::size_t> ordinal(const SegmentId& id) const;

 private:
  Projection to_projection(const PolylineIndex::Hit& hit) const;

  GraphTopology topology_;
  SegmentMap segments_;
  GeoPoint origin_;
  std::vector<SegmentId> order_;
  PolylineIndex index_;
};

// ---------------------------------------------------------------------------
// Map construction

/// A trace together with the node route it declares.
struct RouteTrace {
  std::vector<NodeId> route;
  std::vector<TimedSample> samples;
};

/// A bucketed sample: distance from segment entry, position, and the pass it came from.
struct BucketSample {
  double d = 0.0;
  PlanarPoint p;
  std::size_t pass = 0;
};

using BucketMap = std::map<SegmentId, std::vector<BucketSample>>;

struct BucketResult {
  BucketMap buckets;
  /// Samples before leaving the first node's disc or after entering the last one.
  std::size_t terminal_samples = 0;
};

/// Assigns every sample to its segment bucket with its running distance from segment entry.
/// Samples inside an interior route node's disc go to the Turn segment through that node.
BucketResult bucket_samples(std::span<const RouteTrace> traces, const GraphTopology& topology);

struct SegmentFitOptions {
  int min_degree = 3;
  int max_degree = 9;
  double meters_per_degree = 75.0;
  /// Drop buckets below min coverage instead of failing.
  bool skip_starved = false;
};

/// clamp(min_degree + floor(length / meters_per_degree), min_degree, max_degree).
int segment_degree(double length, const SegmentFitOptions& options = {});

/// Minimum bucket size for a segment fit of the given degree.
inline std::size_t min_coverage(int degree) { return 2 * (static_cast<std::size_t>(degree) + 1); }

/// Fits x(d), y(d) per bucket, then re-parameterizes by true arc length of the fit.
SegmentMap fit_segments(const BucketMap& buckets, const GraphTopology& topology,
                        const SegmentFitOptions& options = {});

/// Refits every segment on its own 1 m samples plus neighbour samples within
/// `delta` meters of each shared boundary, with both ends pinned to the joint
/// point shared by all segments meeting there.
RoadMap refit_with_neighbors(const SegmentMap& segments, const GraphTopology& topology, const GeoPoint& origin,
                             double delta = 5.0);

struct BuildOptions {
  SegmentFitOptions fit;
  double delta = 5.0;
};

/// bucket → fit → refit.
RoadMap build_road_map(std::span<const RouteTrace> traces, const GraphTopology& topology, const GeoPoint& origin,
                       const BuildOptions& options = {});

struct AdjacencyGap {
  SegmentId from;
  SegmentId to;
  double gap = 0.0;
};

/// |end(from) − start(to)| for every consecutive segment pair present in the map.
std::vector<AdjacencyGap> adjacency_gaps(const SegmentMap& segments);

// ---------------------------------------------------------------------------
// Queries

Projection project_point(const RoadMap& map, const PlanarPoint& p);

/// size_px × size_px crop at 1 m/pixel centred on `center`, rotated so that
/// `heading` (radians, counterclockwise from east) points up. A pixel is set
/// when its centre lies within kRoadHalfWidth of an included polyline.
BinaryImage rasterize_crop(const RoadMap& map, const PlanarPoint& center, double heading,
                           std::optional<std::span<const SegmentId>> route, int size_px);

/// Planar position of the centre of pixel (col, row) in a crop.
PlanarPoint crop_pixel_center(const PlanarPoint& center, double heading, int size_px, int col, int row);

}  // namespace trajmap

#endif  // TRAJMAP_ROADMAP_HPP
