#ifndef TRAJMAP_SYNTH_HPP
#define TRAJMAP_SYNTH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "trajmap/formats.hpp"
#include "trajmap/geo.hpp"
#include "trajmap/roadmap.hpp"
#include "trajmap/routing.hpp"
#include "trajmap/topology.hpp"

namespace trajmap {

/// A line segment or a circular arc, parameterized by arc length from its start.
class Shape {
 public:
  static Shape line(const PlanarPoint& a, const PlanarPoint& b);
  /// Arc around `center` starting at angle `start` (radians) and sweeping
  /// `sweep` radians, counterclockwise when positive.
  static Shape arc(const PlanarPoint& center, double radius, double start, double sweep);
  /// Arc from a to b whose midpoint sits `sagitta` meters left of the chord (right when negative).
  static Shape bulged(const PlanarPoint& a, const PlanarPoint& b, double sagitta);
  /// Arc leaving `from` along `tangent` and passing through `to`; a line when they are aligned.
  static Shape tangent_arc(const PlanarPoint& from, const PlanarPoint& tangent, const PlanarPoint& to);

  bool is_arc() const { return arc_; }
  double length() const { return length_; }
  PlanarPoint at(double s) const;
  /// Unit direction of travel at s.
  PlanarPoint tangent(double s) const;
  /// Distance from p to the closest point of the shape.
  double distance_to(const PlanarPoint& p) const;

 private:
  bool arc_ = false;
  PlanarPoint a_;
  PlanarPoint b_;
  PlanarPoint center_;
  double radius_ = 0.0;
  double start_ = 0.0;
  double sweep_ = 0.0;
  double length_ = 0.0;
};

struct WorldEdge {
  EdgeId id;
  NodeId from;
  NodeId to;
  bool arc = false;
  double bulge = 0.0;  ///< sagitta as a fraction of the chord, positive to the left

  friend bool operator==(const WorldEdge&, const WorldEdge&) = default;
};

/// Generation parameters and analytic geometry of a synthetic world. Node
/// centres are planar about `origin`.
struct WorldSpec {
  std::uint64_t seed = 1;
  double noise = 3.0;         ///< per-axis Gaussian σ, meters
  double rate = 1.0;          ///< samples per second
  double speed = 10.0;        ///< m/s on roads
  double turn_speed = 5.0;    ///< m/s inside intersections
  double km_limit = 10.0;     ///< total driven distance, km
  int runs = 50;
  int min_crossings = 3;
  GeoPoint origin{44.4268, 26.1025};
  std::vector<Node> nodes;
  std::vector<WorldEdge> edges;

  GraphTopology topology() const;

  friend bool operator==(const WorldSpec&, const WorldSpec&) = default;
};

/// Records: `seed`, `noise`, `rate`, `speed`, `turn_speed`, `km_limit`, `runs`,
/// `min_crossings`, `origin,<lat>,<lon>`, `node,<id>,<x>,<y>,<radius>`,
/// `edge,<id>,<from>,<to>,line` and `edge,<id>,<from>,<to>,arc,<bulge>`.
WorldSpec parse_world(std::string_view text);
std::string serialize_world(const WorldSpec& spec);

/// Analytic ground truth of a world: one road per edge running centre to
/// centre, one turn arc per pair edge.
class SyntheticWorld {
 public:
  explicit SyntheticWorld(WorldSpec spec);

  const WorldSpec& spec() const { return spec_; }
  const GraphTopology& topology() const { return topology_; }

  const Shape& road(EdgeId e) const { return roads_.at(e); }
  /// Arc distances along the road where it leaves the start disc and enters the end disc.
  std::pair<double, double> road_outside(EdgeId e) const { return outside_.at(e); }
  /// Tangent arc from the in-road's disc entry to the out-road's disc exit.
  Shape turn(EdgeId in, EdgeId out) const;

  EdgeLengths road_lengths() const;

  /// Distance from p to the true geometry of a segment: the full road for an
  /// Edge, the turn arc or either adjacent road for a Turn.
  double distance_to_truth(const SegmentId& id, const PlanarPoint& p) const;

  /// Noise-free position along a route driven at the configured speeds, sampled
  /// at the configured rate. Timestamps in ms.
  std::vector<std::pair<std::int64_t, PlanarPoint>> drive(const Route& route) const;

 private:
  WorldSpec spec_;
  GraphTopology topology_;
  std::map<EdgeId, Shape> roads_;
  std::map<EdgeId, std::pair<double, double>> outside_;
};

struct SyntheticData {
  TopologyFile topology;  ///< geodetic, with the world origin made explicit
  RoutePlan plan;
  std::vector<TraceFile> traces;  ///< one per plan leg
};

/// Plans a coverage drive and records one noisy trace per leg. Deterministic per seed.
SyntheticData generate_synthetic(const SyntheticWorld& world);

struct FidelityReport {
  double mean = 0.0;
  double max = 0.0;
  std::size_t points = 0;
  std::size_t segments = 0;
  SegmentId worst;
};

/// Distances from every polyline point of `map` to the world's true geometry.
FidelityReport map_fidelity(const RoadMap& map, const SyntheticWorld& world);

}  // namespace trajmap

#endif  // TRAJMAP_SYNTH_HPP
