#ifndef TRAJMAP_ROUTING_HPP
#define TRAJMAP_ROUTING_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "trajmap/roadmap.hpp"
#include "trajmap/topology.hpp"

namespace trajmap {

using EdgeLengths = std::map<EdgeId, double>;

/// Straight-line distance between the node centres of every edge.
EdgeLengths center_distance_lengths(const GraphTopology& topology);
/// Arc length of every Edge segment of a built map.
EdgeLengths segment_lengths(const RoadMap& map);

struct Route {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
  double length = 0.0;

  friend bool operator==(const Route&, const Route&) = default;
};

/// Minimum-length directed path; equal-length paths resolve to the
/// lexicographically smallest node sequence. Throws NoRoute.
Route shortest_route(const GraphTopology& topology, const EdgeLengths& lengths, NodeId src, NodeId dst);

/// Two directed edges joined at a node: (incoming, outgoing).
using PairEdge = std::pair<EdgeId, EdgeId>;
using PairEdgeCounts = std::map<PairEdge, int>;

/// Every (in, out) pair with in.to == out.from, U-turns included.
std::vector<PairEdge> all_pair_edges(const GraphTopology& topology);

struct RoutePlan {
  std::vector<Route> legs;
  double total_length = 0.0;
  PairEdgeCounts pair_edge_counts;
  std::size_t run_index = 0;     ///< which simulation run produced the plan
  std::size_t under_crossed = 0;  ///< pair edges crossed fewer than min_crossings times

  friend bool operator==(const RoutePlan&, const RoutePlan&) = default;
};

struct CoverageConfig {
  std::uint64_t seed = 0;
  double limit_m = 350000.0;
  int runs = 1000;
  int min_crossings = 3;
};

/// Chains shortest routes to uniformly random destinations until the distance
/// limit is reached, `runs` times, and keeps the run with the fewest
/// under-crossed pair edges (ties: fewer legs, then lower run index).
RoutePlan simulate_coverage(const GraphTopology& topology, const EdgeLengths& lengths, const CoverageConfig& config);

/// Counts consecutive edge pairs across the concatenated drive, leg junctions included.
PairEdgeCounts pair_edge_counts(const RoutePlan& plan, const GraphTopology& topology);
PairEdgeCounts pair_edge_counts(const std::vector<Route>& legs);

std::size_t count_under_crossed(const PairEdgeCounts& counts, const GraphTopology& topology, int min_crossings);

}  // namespace trajmap

#endif  // TRAJMAP_ROUTING_HPP
