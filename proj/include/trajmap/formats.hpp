#ifndef TRAJMAP_FORMATS_HPP
#define TRAJMAP_FORMATS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trajmap/eval.hpp"
#include "trajmap/geo.hpp"
#include "trajmap/roadmap.hpp"
#include "trajmap/routing.hpp"
#include "trajmap/topology.hpp"
#include "trajmap/trajectory.hpp"

// Line-oriented text formats. Lines starting with '#' are comments unless they
// carry a recognised header keyword; fields are comma separated.

namespace trajmap {

// ---------------------------------------------------------------------------
// Files

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// ---------------------------------------------------------------------------
// Topology: `node,<id>,<lat>,<lon>,<radius_m>` and `edge,<id>,<from>,<to>`,
// optionally preceded by `# origin,<lat>,<lon>` (default: centroid of the nodes).

struct GeoNode {
  NodeId id;
  GeoPoint where;
  double radius = 0.0;

  friend bool operator==(const GeoNode&, const GeoNode&) = default;
};

struct TopologyFile {
  GeoPoint origin;
  bool explicit_origin = false;
  std::vector<GeoNode> nodes;
  std::vector<Edge> edges;

  /// Node centres projected about `origin`.
  GraphTopology planar() const;

  friend bool operator==(const TopologyFile&, const TopologyFile&) = default;
};

TopologyFile parse_topology(std::string_view text);
std::string serialize_topology(const TopologyFile& topo);

// ---------------------------------------------------------------------------
// Trace: `# origin,<lat>,<lon>`, `# route,<n1>,<n2>,...`, then `<ms>,<lat>,<lon>` rows.

struct TraceFile {
  GeoPoint origin;
  std::vector<NodeId> route;
  std::vector<std::int64_t> ms;
  std::vector<GeoPoint> points;

  friend bool operator==(const TraceFile&, const TraceFile&) = default;
};

/// With a topology, unknown route nodes are rejected.
TraceFile parse_trace(std::string_view text, const GraphTopology* topology = nullptr);
std::string serialize_trace(const TraceFile& trace);

/// Planar samples about `origin` with t in seconds.
RouteTrace to_route_trace(const TraceFile& trace, const GeoPoint& origin);

// ---------------------------------------------------------------------------
// Map: `origin,<lat>,<lon>`, `node,<id>,<x>,<y>,<radius>`, `edge,<id>,<from>,<to>`, then
// `segment,edge,<e>,<degree>,<length>,<a...>,<b...>` or
// `segment,turn,<in>,<out>,<degree>,<length>,<a...>,<b...>`. Node centres are planar.

std::string serialize_map(const RoadMap& map);
RoadMap parse_map(std::string_view text);

// ---------------------------------------------------------------------------
// Route plan: `run`, `under`, `total`, `leg,<length>,<nodes...>`, `pair,<in>,<out>,<count>`.

std::string serialize_plan(const RoutePlan& plan);
/// Leg edges are re-derived from `topology`.
RoutePlan parse_plan(std::string_view text, const GraphTopology& topology);

// ---------------------------------------------------------------------------
// Poses: `<t>,<x>,<y>,<heading>`; an empty position or heading field means absent.
// A file may hold several tracks back to back; a time that does not increase
// starts the next track.

struct TimedPrediction {
  double t = 0.0;
  PosePrediction pose;

  friend bool operator==(const TimedPrediction&, const TimedPrediction&) = default;
};

std::string serialize_poses(std::span<const TimedPrediction> poses);
std::vector<TimedPrediction> parse_poses(std::string_view text);

// ---------------------------------------------------------------------------
// Trajectory labels: `route,<trace>,<n1>,...` and
// `sample,<trace>,<t0>,<x>,<y>,<heading>,<x1>,<y1>,...,<x7>,<y7>`.

struct LabelSample {
  std::string trace;
  Pose pose;
  Trajectory trajectory;

  friend bool operator==(const LabelSample&, const LabelSample&) = default;
};

struct LabelFile {
  std::vector<std::pair<std::string, std::vector<NodeId>>> routes;
  std::vector<LabelSample> samples;

  const std::vector<NodeId>* route_of(const std::string& trace) const;

  friend bool operator==(const LabelFile&, const LabelFile&) = default;
};

std::string serialize_labels(const LabelFile& labels);
LabelFile parse_labels(std::string_view text);

// ---------------------------------------------------------------------------
// Key-value report documents: `<key>,<value>` lines.

using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string serialize_key_values(const KeyValues& kv);
KeyValues parse_key_values(std::string_view text);

// ---------------------------------------------------------------------------
// Number formatting shared by all writers.

/// Shortest decimal form that parses back to the same double.
std::string format_real(double v);
/// Strict parse of a whole field; nullopt on trailing garbage or non-finite values.
std::optional<double> parse_real(std::string_view field);

}  // namespace trajmap

#endif  // TRAJMAP_FORMATS_HPP
