#ifndef TRAJMAP_TOPOLOGY_HPP
#define TRAJMAP_TOPOLOGY_HPP

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajmap/geo.hpp"

namespace trajmap {

/// Integer identifier tagged by what it names, so node and edge ids do not mix.
template <typename Tag>
struct Id {
  int value = 0;

  constexpr Id() = default;
  constexpr explicit Id(int v) : value(v) {}

  friend constexpr auto operator<=>(const Id&, const Id&) = default;
};

using NodeId = Id<struct NodeTag>;
using EdgeId = Id<struct EdgeTag>;

/// An intersection: centre in the planar frame plus the radius of its disc.
struct Node {
  NodeId id;
  PlanarPoint center;
  double radius = 0.0;

  friend bool operator==(const Node&, const Node&) = default;
};

/// A directed road between two intersections.
struct Edge {
  EdgeId id;
  NodeId from;
  NodeId to;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed intersection graph. Validated on construction: unique ids, known
/// endpoints, positive radii, no self loops and at most one edge per ordered
/// node pair.
class GraphTopology {
 public:
  GraphTopology() = default;
  GraphTopology(std::vector<Node> nodes, std::vector<Edge> edges);

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }

  bool has_node(NodeId id) const { return node_index_.contains(id); }
  bool has_edge(EdgeId id) const { return edge_index_.contains(id); }
  const Node& node(NodeId id) const;
  const Edge& edge(EdgeId id) const;

  std::optional<EdgeId> edge_between(NodeId from, NodeId to) const;
  /// Sorted by edge id.
  std::vector<EdgeId> out_edges(NodeId n) const;
  std::vector<EdgeId> in_edges(NodeId n) const;

  /// Edges along a node route; throws RouteMismatch if two consecutive nodes are not connected.
  std::vector<EdgeId> route_edges(std::span<const NodeId> route) const;

  friend bool operator==(const GraphTopology& a, const GraphTopology& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::map<NodeId, std::size_t> node_index_;
  std::map<EdgeId, std::size_t> edge_index_;
  std::map<std::pair<NodeId, NodeId>, EdgeId> by_endpoints_;
};

/// Identifies a map segment: a road (Edge) or one way through an intersection (Turn).
struct SegmentId {
  enum class Kind { Edge = 0, Turn = 1 };

  Kind kind = Kind::Edge;
  EdgeId first;   ///< the edge, or the incoming edge of a turn
  EdgeId second;  ///< outgoing edge of a turn; equals `first` for edges

  static SegmentId edge(EdgeId e) { return {Kind::Edge, e, e}; }
  static SegmentId turn(EdgeId in, EdgeId out) { return {Kind::Turn, in, out}; }

  bool is_edge() const { return kind == Kind::Edge; }
  bool is_turn() const { return kind == Kind::Turn; }

  /// Canonical order: edges before turns, then lexicographic ids.
  friend auto operator<=>(const SegmentId&, const SegmentId&) = default;
};

std::string to_string(const SegmentId& id);

/// Segment sequence driven along a node route: Edge, Turn, Edge, ..., Edge.
std::vector<SegmentId> route_segments(const GraphTopology& topology, std::span<const NodeId> route);

}  // namespace trajmap

#endif  // TRAJMAP_TOPOLOGY_HPP
