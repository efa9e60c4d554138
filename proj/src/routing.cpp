#include "trajmap/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "trajmap/error.hpp"
#include "trajmap/rng.hpp"

namespace trajmap {

namespace {

void check_lengths(const GraphTopology& topology, const EdgeLengths& lengths) {
  for (const auto& e : topology.edges()) {
    auto it = lengths.find(e.id);
    if (it == lengths.end() || !(it->second > 0.0) || !std::isfinite(it->second)) {
      throw Error(ErrorKind::InvalidInput, "edge " + std::to_string(e.id.value) + " needs a positive length");
    }
  }
}

std::vector<NodeId> reachable_from(const GraphTopology& topology, NodeId src) {
  std::vector<NodeId> seen{src};
  std::vector<NodeId> stack{src};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    for (EdgeId e : topology.out_edges(n)) {
      const NodeId to = topology.edge(e).to;
      if (std::find(seen.begin(), seen.end(), to) == seen.end()) {
        seen.push_back(to);
        stack.push_back(to);
      }
    }
  }
  return seen;
}

}  // namespace

EdgeLengths center_distance_lengths(const GraphTopology& topology) {
  EdgeLengths out;
  for (const auto& e : topology.edges()) {
    out[e.id] = distance(topology.node(e.from).center, topology.node(e.to).center);
  }
  return out;
}

EdgeLengths segment_lengths(const RoadMap& map) {
  EdgeLengths out;
  for (const auto& e : map.topology().edges()) out[e.id] = map.find(SegmentId::edge(e.id))->length;
  return out;
}

Route shortest_route(const GraphTopology& topology, const EdgeLengths& lengths, NodeId src, NodeId dst) {
  if (!topology.has_node(src) || !topology.has_node(dst)) {
    throw Error(ErrorKind::InvalidInput, "route endpoints must be known nodes");
  }
  if (src == dst) throw Error(ErrorKind::InvalidInput, "route source and destination coincide");
  check_lengths(topology, lengths);

  struct Label {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<NodeId> path;
    bool done = false;
  };
  std::map<NodeId, Label> labels;
  for (const auto& n : topology.nodes()) labels[n.id];
  labels[src].cost = 0.0;
  labels[src].path = {src};

  auto better = [](double c1, const std::vector<NodeId>& p1, double c2, const std::vector<NodeId>& p2) {
    if (c1 != c2) return c1 < c2;
    return p1 < p2;
  };

  for (;;) {
    Label* pick = nullptr;
    NodeId pick_id;
    for (auto& [id, lab] : labels) {
      if (lab.done || !std::isfinite(lab.cost)) continue;
      if (!pick || better(lab.cost, lab.path, pick->cost, pick->path)) {
        pick = &lab;
        pick_id = id;
      }
    }
    if (!pick) break;
    pick->done = true;
    if (pick_id == dst) break;
    for (EdgeId e : topology.out_edges(pick_id)) {
      const NodeId to = topology.edge(e).to;
      Label& next = labels[to];
      if (next.done) continue;
      const double cost = pick->cost + lengths.at(e);
      auto path = pick->path;
      path.push_back(to);
      if (better(cost, path, next.cost, next.path)) {
        next.cost = cost;
        next.path = std::move(path);
      }
    }
  }

  const Label& end = labels[dst];
  if (!std::isfinite(end.cost)) {
    std::ostringstream os;
    os << "node " << dst.value << " is unreachable from node " << src.value;
    throw Error(ErrorKind::NoRoute, os.str());
  }
  Route r;
  r.nodes = end.path;
  r.edges = topology.route_edges(r.nodes);
  for (EdgeId e : r.edges) r.length += lengths.at(e);
  return r;
}

std::vector<PairEdge> all_pair_edges(const GraphTopology& topology) {
  std::vector<PairEdge> out;
  for (const auto& in : topology.edges()) {
    for (EdgeId out_id : topology.out_edges(in.to)) out.emplace_back(in.id, out_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PairEdgeCounts pair_edge_counts(const std::vector<Route>& legs) {
  PairEdgeCounts counts;
  const EdgeId* prev = nullptr;
  for (const auto& leg : legs) {
    for (const EdgeId& e : leg.edges) {
      if (prev) ++counts[{*prev, e}];
      prev = &e;
    }
  }
  return counts;
}

PairEdgeCounts pair_edge_counts(const RoutePlan& plan, const GraphTopology& topology) {
  for (std::size_t i = 0; i < plan.legs.size(); ++i) {
    const auto& leg = plan.legs[i];
    if (topology.route_edges(leg.nodes) != leg.edges) {
      throw Error(ErrorKind::InvalidInput, "plan leg " + std::to_string(i) + " edges do not match its nodes");
    }
    if (i > 0 && plan.legs[i - 1].nodes.back() != leg.nodes.front()) {
      throw Error(ErrorKind::InvalidInput, "plan leg " + std::to_string(i) + " does not start where the previous ended");
    }
  }
  return pair_edge_counts(plan.legs);
}

std::size_t count_under_crossed(const PairEdgeCounts& counts, const GraphTopology& topology, int min_crossings) {
  std::size_t under = 0;
  for (const auto& pe : all_pair_edges(topology)) {
    auto it = counts.find(pe);
    const int c = it == counts.end() ? 0 : it->second;
    if (c < min_crossings) ++under;
  }
  return under;
}

RoutePlan simulate_coverage(const GraphTopology& topology, const EdgeLengths& lengths, const CoverageConfig& config) {
  if (config.runs < 1) throw Error(ErrorKind::InvalidInput, "coverage simulation needs at least one run");
  if (!(config.limit_m >= 0.0) || !std::isfinite(config.limit_m)) {
    throw Error(ErrorKind::InvalidInput, "distance limit must be finite and non-negative");
  }
  check_lengths(topology, lengths);

  if (config.limit_m == 0.0) {
    RoutePlan empty;
    empty.under_crossed = count_under_crossed({}, topology, config.min_crossings);
    return empty;
  }

  std::vector<NodeId> nodes;
  for (const auto& n : topology.nodes()) nodes.push_back(n.id);
  std::sort(nodes.begin(), nodes.end());
  if (nodes.size() < 2) throw Error(ErrorKind::CoverageImpossible, "need at least two nodes to drive between");

  std::vector<std::pair<NodeId, NodeId>> unreachable;
  for (NodeId src : nodes) {
    const auto seen = reachable_from(topology, src);
    for (NodeId dst : nodes)
      if (std::find(seen.begin(), seen.end(), dst) == seen.end()) unreachable.emplace_back(src, dst);
  }
  if (!unreachable.empty()) {
    std::ostringstream os;
    os << "topology is not strongly connected; unreachable pairs:";
    for (const auto& [a, b] : unreachable) os << " " << a.value << "->" << b.value;
    throw Error(ErrorKind::CoverageImpossible, os.str());
  }

  std::map<std::pair<NodeId, NodeId>, Route> cache;
  for (NodeId a : nodes)
    for (NodeId b : nodes)
      if (a != b) cache.emplace(std::pair{a, b}, shortest_route(topology, lengths, a, b));

  const CounterRng root(config.seed);
  RoutePlan best;
  bool have_best = false;
  const auto n = static_cast<std::uint64_t>(nodes.size());

  for (int run = 0; run < config.runs; ++run) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(run));
    NodeId current = nodes[rng.below(n)];
    RoutePlan plan;
    plan.run_index = static_cast<std::size_t>(run);
    while (plan.total_length < config.limit_m) {
      const auto k = rng.below(n - 1);
      auto pos = std::find(nodes.begin(), nodes.end(), current) - nodes.begin();
      const NodeId dst = nodes[k < static_cast<std::uint64_t>(pos) ? k : k + 1];
      const Route& leg = cache.at({current, dst});
      plan.legs.push_back(leg);
      plan.total_length += leg.length;
      current = dst;
    }
    plan.pair_edge_counts = pair_edge_counts(plan.legs);
    plan.under_crossed = count_under_crossed(plan.pair_edge_counts, topology, config.min_crossings);
    if (!have_best || plan.under_crossed < best.under_crossed ||
        (plan.under_crossed == best.under_crossed && plan.legs.size() < best.legs.size())) {
      best = std::move(plan);
      have_best = true;
    }
  }
  return best;
}

}  // namespace trajmap
