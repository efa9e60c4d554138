// Shared test fixtures built from analytic geometry.
#ifndef TRAJMAP_TESTS_FIXTURES_HPP
#define TRAJMAP_TESTS_FIXTURES_HPP

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trajmap/formats.hpp"
#include "trajmap/polyfit.hpp"
#include "trajmap/roadmap.hpp"
#include "trajmap/routing.hpp"
#include "trajmap/synth.hpp"

namespace fixture {

using namespace trajmap;

inline std::string data_path(const std::string& name) { return std::string(TRAJMAP_DATA_DIR) + "/" + name; }

inline WorldSpec demo_world() { return parse_world(read_file(data_path("demo_world.txt"))); }

/// Least-squares curve through a shape sampled every 0.5 m between s0 and s1.
inline Curve2D fit_shape(const Shape& shape, double s0, double s1, int degree) {
  std::vector<double> u;
  std::vector<PlanarPoint> p;
  const int n = std::max(2 * (degree + 1), static_cast<int>((s1 - s0) / 0.5) + 1);
  for (int k = 0; k < n; ++k) {
    const double s = s0 + (s1 - s0) * k / (n - 1);
    u.push_back(s - s0);
    p.push_back(shape.at(s));
  }
  return fit_curve(u, p, degree).with_range(0.0, s1 - s0);
}

/// The world's true geometry as a map: edge roads between their disc
/// boundaries plus every turn arc except U-turns, each fitted at high degree.
inline RoadMap truth_map(const SyntheticWorld& world) {
  SegmentMap segs;
  for (const auto& e : world.topology().edges()) {
    const auto [leave, enter] = world.road_outside(e.id);
    const SegmentId id = SegmentId::edge(e.id);
    segs.emplace(id, make_segment(id, fit_shape(world.road(e.id), leave, enter, 7), enter - leave));
  }
  for (const auto& [in, out] : all_pair_edges(world.topology())) {
    if (world.topology().edge(in).from == world.topology().edge(out).to) continue;
    const Shape turn = world.turn(in, out);
    const SegmentId id = SegmentId::turn(in, out);
    segs.emplace(id, make_segment(id, fit_shape(turn, 0.0, turn.length(), 5), turn.length()));
  }
  return RoadMap(world.topology(), std::move(segs), world.spec().origin);
}

/// A route's true positions as a trace (noise-free), t in seconds.
inline RouteTrace drive_trace(const SyntheticWorld& world, const Route& route) {
  RouteTrace t;
  t.route = route.nodes;
  for (const auto& [ms, p] : world.drive(route)) t.samples.push_back({static_cast<double>(ms) / 1000.0, p});
  return t;
}

/// Strongly connected random graph: a directed ring through every node plus
/// random extra edges, never repeating an ordered node pair.
inline GraphTopology random_topology(std::uint64_t seed, int nodes, int edges) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 3000.0);
  std::vector<Node> ns;
  for (int i = 1; i <= nodes; ++i) ns.push_back({NodeId(i), {coord(rng), coord(rng)}, 15.0});
  std::vector<Edge> es;
  std::set<std::pair<int, int>> used;
  auto add = [&](int a, int b) {
    if (a == b || !used.insert({a, b}).second) return;
    es.push_back({EdgeId(static_cast<int>(es.size()) + 1), NodeId(a), NodeId(b)});
  };
  for (int i = 1; i <= nodes; ++i) add(i, i % nodes + 1);
  while (static_cast<int>(es.size()) < edges) {
    add(1 + static_cast<int>(rng() % nodes), 1 + static_cast<int>(rng() % nodes));
  }
  return GraphTopology(std::move(ns), std::move(es));
}

inline Route route_of(const GraphTopology& topo, std::vector<NodeId> nodes) {
  Route r;
  r.edges = topo.route_edges(nodes);
  r.nodes = std::move(nodes);
  return r;
}

}  // namespace fixture

#endif  // TRAJMAP_TESTS_FIXTURES_HPP
