#include "trajmap/topology.hpp"

#include <cmath>
#include <sstream>

#include "trajmap/error.hpp"

namespace trajmap {

GraphTopology::GraphTopology(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (!node_index_.emplace(n.id, i).second) {
      throw Error(ErrorKind::InvalidInput, "duplicate node id " + std::to_string(n.id.value));
    }
    if (!(n.radius > 0.0) || !std::isfinite(n.radius) || !is_finite(n.center)) {
      throw Error(ErrorKind::InvalidInput, "node " + std::to_string(n.id.value) + " needs a finite centre and radius > 0");
    }
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    const std::string name = "edge " + std::to_string(e.id.value);
    if (!edge_index_.emplace(e.id, i).second) {
      throw Error(ErrorKind::InvalidInput, "duplicate " + name);
    }
    if (!has_node(e.from) || !has_node(e.to)) {
      throw Error(ErrorKind::InvalidInput, name + " references an unknown node");
    }
    if (e.from == e.to) throw Error(ErrorKind::InvalidInput, name + " is a self loop");
    if (!by_endpoints_.emplace(std::pair{e.from, e.to}, e.id).second) {
      throw Error(ErrorKind::InvalidInput, name + " duplicates an existing directed node pair");
    }
  }
}

const Node& GraphTopology::node(NodeId id) const {
  auto it = node_index_.find(id);
  if (it == node_index_.end()) throw Error(ErrorKind::InvalidInput, "unknown node " + std::to_string(id.value));
  return nodes_[it->second];
}

const Edge& GraphTopology::edge(EdgeId id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) throw Error(ErrorKind::InvalidInput, "unknown edge " + std::to_string(id.value));
  return edges_[it->second];
}

std::optional<EdgeId> GraphTopology::edge_between(NodeId from, NodeId to) const {
  auto it = by_endpoints_.find({from, to});
  if (it == by_endpoints_.end()) return std::nullopt;
  return it->second;
}

std::vector<EdgeId> GraphTopology::out_edges(NodeId n) const {
  std::vector<EdgeId> out;
  for (const auto& [id, idx] : edge_index_)
    if (edges_[idx].from == n) out.push_back(id);
  return out;
}

std::vector<EdgeId> GraphTopology::in_edges(NodeId n) const {
  std::vector<EdgeId> out;
  for (const auto& [id, idx] : edge_index_)
    if (edges_[idx].to == n) out.push_back(id);
  return out;
}

std::vector<EdgeId> GraphTopology::route_edges(std::span<const NodeId> route) const {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i + 1 < route.size(); ++i) {
    auto e = edge_between(route[i], route[i + 1]);
    if (!e) {
      std::ostringstream os;
      os << "no edge from node " << route[i].value << " to node " << route[i + 1].value;
      throw Error(ErrorKind::RouteMismatch, os.str());
    }
    out.push_back(*e);
  }
  return out;
}

std::string to_string(const SegmentId& id) {
  std::ostringstream os;
  if (id.is_edge()) {
    os << "edge(" << id.first.value << ")";
  } else {
    os << "turn(" << id.first.value << "->" << id.second.value << ")";
  }
  return os.str();
}

std::vector<SegmentId> route_segments(const GraphTopology& topology, std::span<const NodeId> route) {
  const auto edges = topology.route_edges(route);
  std::vector<SegmentId> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i > 0) out.push_back(SegmentId::turn(edges[i - 1], edges[i]));
    out.push_back(SegmentId::edge(edges[i]));
  }
  return out;
}

}  // namespace trajmap
