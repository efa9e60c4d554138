#include "trajmap/roadmap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "trajmap/error.hpp"

namespace trajmap {

namespace {

// Signed arc length from 0 to each parameter, integrating between sorted neighbours.
std::vector<double> arc_positions(const Curve2D& c, std::span<const double> params) {
  std::vector<std::size_t> order(params.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return params[a] < params[b]; });
  std::vector<double> out(params.size(), 0.0);
  double s = 0.0;
  double cursor = 0.0;
  for (std::size_t idx : order) {
    if (params[idx] < 0.0) continue;
    s += arc_length(c, cursor, params[idx]);
    cursor = params[idx];
    out[idx] = s;
  }
  s = 0.0;
  cursor = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (params[*it] >= 0.0) continue;
    s += arc_length(c, cursor, params[*it]);
    cursor = params[*it];
    out[*it] = s;
  }
  return out;
}

void check_segment_id(const SegmentId& id, const GraphTopology& topology) {
  if (!topology.has_edge(id.first) || !topology.has_edge(id.second)) {
    throw Error(ErrorKind::InvalidInput, to_string(id) + " references an unknown edge");
  }
  if (id.is_edge() && id.first != id.second) {
    throw Error(ErrorKind::InvalidInput, "malformed edge segment id");
  }
  if (id.is_turn() && topology.edge(id.first).to != topology.edge(id.second).from) {
    throw Error(ErrorKind::InvalidInput, to_string(id) + " joins edges that do not share a node");
  }
}

}  // namespace

MapSegment make_segment(SegmentId id, const Curve2D& curve, double length) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorKind::InvalidInput, to_string(id) + " must have positive length");
  }
  MapSegment seg{id, curve, length, {}, 0};
  const auto n = static_cast<std::size_t>(std::floor(length)) + 1;
  seg.polyline.reserve(n);
  for (std::size_t k = 0; k < n; ++k) seg.polyline.push_back(curve.at(static_cast<double>(k)));
  return seg;
}

// ---------------------------------------------------------------------------

RoadMap::RoadMap(GraphTopology topology, SegmentMap segments, GeoPoint origin)
    : topology_(std::move(topology)), segments_(std::move(segments)), origin_(origin) {
  validate(origin_);
  for (const auto& [id, seg] : segments_) {
    if (!(seg.id == id)) throw Error(ErrorKind::InvalidInput, "segment stored under a different id");
    check_segment_id(id, topology_);
  }
  for (const auto& e : topology_.edges()) {
    if (!segments_.contains(SegmentId::edge(e.id))) {
      throw Error(ErrorKind::InvalidInput, "edge " + std::to_string(e.id.value) + " has no map segment");
    }
  }
  std::vector<std::vector<PlanarPoint>> polylines;
  for (const auto& [id, seg] : segments_) {
    order_.push_back(id);
    polylines.push_back(seg.polyline);
  }
  index_ = PolylineIndex(polylines);
}

const MapSegment* RoadMap::find(const SegmentId& id) const {
  auto it = segments_.find(id);
  return it == segments_.end() ? nullptr : &it->second;
}

std::optional<std::size_t> RoadMap::ordinal(const SegmentId& id) const {
  auto it = std::lower_bound(order_.begin(), order_.end(), id);
  if (it == order_.end() || !(*it == id)) return std::nullopt;
  return static_cast<std::size_t>(it - order_.begin());
}

Projection RoadMap::to_projection(const PolylineIndex::Hit& hit) const {
  return {order_[hit.polyline], static_cast<double>(hit.sub) + hit.proj.t, hit.proj.q, hit.proj.dist};
}

Projection RoadMap::project(const PlanarPoint& p) const {
  auto hit = index_.nearest(p);
  if (!hit) throw Error(ErrorKind::InvalidInput, "cannot project onto an empty map");
  return to_projection(*hit);
}

std::optional<Projection> RoadMap::project(const PlanarPoint& p, std::span<const SegmentId> candidates) const {
  std::vector<char> mask(order_.size(), 0);
  bool any = false;
  for (const auto& id : candidates) {
    if (auto o = ordinal(id)) {
      mask[*o] = 1;
      any = true;
    }
  }
  if (!any) return std::nullopt;
  auto hit = index_.nearest(p, [&](std::size_t i) { return mask[i] != 0; });
  if (!hit) return std::nullopt;
  return to_projection(*hit);
}

bool RoadMap::near_road(const PlanarPoint& p, double radius, const std::vector<char>* subset) const {
  if (!subset) return index_.any_within(p, radius);
  return index_.any_within(p, radius, [subset](std::size_t i) { return (*subset)[i] != 0; });
}

Projection project_point(const RoadMap& map, const PlanarPoint& p) { return map.project(p); }

// ---------------------------------------------------------------------------
// Bucketing

BucketResult bucket_samples(std::span<const RouteTrace> traces, const GraphTopology& topology) {
  BucketResult result;
  std::size_t pass = 0;

  for (std::size_t ti = 0; ti < traces.size(); ++ti) {
    const auto& trace = traces[ti];
    const std::string where = "trace " + std::to_string(ti);
    if (trace.route.size() < 2) {
      throw Error(ErrorKind::RouteMismatch, where + ": route needs at least two nodes");
    }
    const auto edges = topology.route_edges(trace.route);
    const std::size_t last = trace.route.size() - 1;

    auto inside = [&](std::size_t k, const PlanarPoint& p) {
      const Node& n = topology.node(trace.route[k]);
      return distance(p, n.center) <= n.radius;
    };

    enum class Phase { BeforeStart, InFirst, OnEdge, InTurn, Done };
    Phase phase = Phase::BeforeStart;
    std::size_t leg = 0;  // index of the current edge
    std::vector<BucketSample>* bucket = nullptr;
    double d = 0.0;

    auto open = [&](SegmentId id, const PlanarPoint& p) {
      bucket = &result.buckets[id];
      d = 0.0;
      bucket->push_back({d, p, pass++});
    };
    auto extend = [&](const PlanarPoint& prev, const PlanarPoint& p) {
      d += distance(prev, p);
      bucket->push_back({d, p, bucket->back().pass});
    };

    for (std::size_t j = 0; j < trace.samples.size(); ++j) {
      const auto& s = trace.samples[j];
      if (j > 0) {
        const auto& prev = trace.samples[j - 1];
        if (!(s.t > prev.t)) {
          throw Error(ErrorKind::TraceCorrupt, where + ": sample " + std::to_string(j) + " is not after its predecessor");
        }
        if (distance(prev.p, s.p) > kMaxSampleGap) {
          std::ostringstream os;
          os << where << ": jump of " << distance(prev.p, s.p) << " m before sample " << j;
          throw Error(ErrorKind::TraceCorrupt, os.str());
        }
      }
      switch (phase) {
        case Phase::BeforeStart:
          if (inside(0, s.p)) phase = Phase::InFirst;
          ++result.terminal_samples;
          break;
        case Phase::InFirst:
          if (inside(0, s.p)) {
            ++result.terminal_samples;
          } else {
            phase = Phase::OnEdge;
            open(SegmentId::edge(edges[0]), s.p);
          }
          break;
        case Phase::OnEdge:
          if (inside(leg + 1, s.p)) {
            if (leg + 1 == last) {
              phase = Phase::Done;
              ++result.terminal_samples;
            } else {
              phase = Phase::InTurn;
              open(SegmentId::turn(edges[leg], edges[leg + 1]), s.p);
            }
          } else {
            for (const auto& n : topology.nodes()) {
              if (n.id == trace.route[leg] || n.id == trace.route[leg + 1]) continue;
              if (distance(s.p, n.center) <= n.radius) {
                std::ostringstream os;
                os << where << ": sample " << j << " enters node " << n.id.value << " while driving edge "
                   << edges[leg].value;
                throw Error(ErrorKind::RouteMismatch, os.str());
              }
            }
            extend(trace.samples[j - 1].p, s.p);
          }
          break;
        case Phase::InTurn:
          if (inside(leg + 1, s.p)) {
            extend(trace.samples[j - 1].p, s.p);
          } else {
            ++leg;
            phase = Phase::OnEdge;
            open(SegmentId::edge(edges[leg]), s.p);
          }
          break;
        case Phase::Done:
          ++result.terminal_samples;
          break;
      }
    }
    if (phase == Phase::BeforeStart) {
      throw Error(ErrorKind::RouteMismatch,
                  where + ": never enters its first node " + std::to_string(trace.route.front().value));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Fitting

namespace {

// Discs bounding a segment: the edge's endpoints, or the turn's node twice.
std::pair<const Node*, const Node*> segment_nodes(const SegmentId& id, const GraphTopology& topology) {
  const Edge& first = topology.edge(id.first);
  if (id.is_edge()) return {&topology.node(first.from), &topology.node(first.to)};
  const Node* n = &topology.node(first.to);
  return {n, n};
}

// Radial distance from p to the disc boundary, for a point expected outside or inside it.
double boundary_gap(const Node& n, const PlanarPoint& p, bool outside) {
  const double rho = distance(p, n.center);
  return std::max(0.0, outside ? rho - n.radius : n.radius - rho);
}

}  // namespace

int segment_degree(double length, const SegmentFitOptions& options) {
  const int raw = options.min_degree + static_cast<int>(std::floor(std::max(0.0, length) / options.meters_per_degree));
  return std::clamp(raw, options.min_degree, options.max_degree);
}

SegmentMap fit_segments(const BucketMap& buckets, const GraphTopology& topology, const SegmentFitOptions& options) {
  SegmentMap out;
  for (const auto& [id, samples] : buckets) {
    check_segment_id(id, topology);
    const bool may_skip = options.skip_starved && id.is_turn();
    const auto [start_node, end_node] = segment_nodes(id, topology);
    const bool outside = id.is_edge();

    // Each pass starts its distances at its first sample, which lies somewhere
    // past the disc boundary. Shift every pass so that d = 0 is the boundary and
    // take the median boundary-to-boundary span as the segment extent.
    std::map<std::size_t, double> offset;
    std::vector<double> spans;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const bool first = i == 0 || samples[i - 1].pass != samples[i].pass;
      const bool last = i + 1 == samples.size() || samples[i + 1].pass != samples[i].pass;
      if (first) offset[samples[i].pass] = boundary_gap(*start_node, samples[i].p, outside);
      if (last) {
        spans.push_back(offset[samples[i].pass] + samples[i].d + boundary_gap(*end_node, samples[i].p, outside));
      }
    }
    std::sort(spans.begin(), spans.end());
    double extent = 0.0;
    if (!spans.empty()) {
      const std::size_t m = spans.size();
      extent = m % 2 == 1 ? spans[m / 2] : 0.5 * (spans[m / 2 - 1] + spans[m / 2]);
    }

    const int degree = segment_degree(extent, options);
    if (samples.size() < min_coverage(degree) || !(extent > 0.0)) {
      if (may_skip) continue;
      std::ostringstream os;
      os << to_string(id) << " has " << samples.size() << " samples spanning " << extent << " m; a degree-"
         << degree << " fit needs " << min_coverage(degree);
      throw Error(ErrorKind::InsufficientData, os.str());
    }
    std::vector<double> params;
    std::vector<PlanarPoint> points;
    for (const auto& s : samples) {
      params.push_back(s.d + offset[s.pass]);
      points.push_back(s.p);
    }
    const Curve2D by_distance = fit_curve(params, points, degree);
    const auto arc = arc_positions(by_distance, params);
    const double length = arc_length(by_distance, 0.0, extent);
    const Curve2D by_arc = fit_curve(arc, points, degree).with_range(0.0, length);
    MapSegment seg = make_segment(id, by_arc, length);
    seg.support = samples.size();
    out.emplace(id, std::move(seg));
  }
  return out;
}

namespace {

struct JointKey {
  EdgeId edge;
  bool at_end;  // the joint at the far end of `edge`
  friend auto operator<=>(const JointKey&, const JointKey&) = default;
};

JointKey start_joint(const SegmentId& id) {
  return id.is_edge() ? JointKey{id.first, false} : JointKey{id.first, true};
}

JointKey end_joint(const SegmentId& id) {
  return id.is_edge() ? JointKey{id.first, true} : JointKey{id.second, false};
}

}  // namespace

RoadMap refit_with_neighbors(const SegmentMap& segments, const GraphTopology& topology, const GeoPoint& origin,
                             double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::InvalidInput, "refit delta must be positive");
  }

  // Endpoints meeting at each joint, split into the edge side and the turn side.
  // Each end is weighted by n/(d+1)², the inverse of a polynomial fit's leverage
  // at the end of its range; unknown support counts as weight 1.
  struct Joint {
    PlanarPoint edge_sum;
    double edge_weight = 0.0;
    PlanarPoint turn_sum;
    double turn_weight = 0.0;
    std::size_t count = 0;
  };
  std::map<JointKey, Joint> joints;
  for (const auto& [id, seg] : segments) {
    const double d1 = seg.curve.degree() + 1.0;
    const double w = seg.support > 0 ? static_cast<double>(seg.support) / (d1 * d1) : 1.0;
    for (const auto& [key, p] : {std::pair{start_joint(id), seg.start()}, std::pair{end_joint(id), seg.end()}}) {
      Joint& j = joints[key];
      ++j.count;
      if (id.is_edge()) {
        j.edge_sum += w * p;
        j.edge_weight += w;
      } else {
        j.turn_sum += w * p;
        j.turn_weight += w;
      }
    }
  }
  auto joint_point = [](const Joint& j) {
    return (1.0 / (j.edge_weight + j.turn_weight)) * (j.edge_sum + j.turn_sum);
  };

  auto predecessors = [&](const SegmentId& id) {
    std::vector<const MapSegment*> out;
    if (id.is_turn()) {
      if (auto it = segments.find(SegmentId::edge(id.first)); it != segments.end()) out.push_back(&it->second);
    } else {
      for (const auto& [other, seg] : segments)
        if (other.is_turn() && other.second == id.first) out.push_back(&seg);
    }
    return out;
  };
  auto successors = [&](const SegmentId& id) {
    std::vector<const MapSegment*> out;
    if (id.is_turn()) {
      if (auto it = segments.find(SegmentId::edge(id.second)); it != segments.end()) out.push_back(&it->second);
    } else {
      for (const auto& [other, seg] : segments)
        if (other.is_turn() && other.first == id.first) out.push_back(&seg);
    }
    return out;
  };

  SegmentMap refit;
  for (const auto& [id, seg] : segments) {
    std::vector<double> params;
    std::vector<PlanarPoint> points;
    for (std::size_t k = 0; k < seg.polyline.size(); ++k) {
      params.push_back(static_cast<double>(k));
      points.push_back(seg.polyline[k]);
    }
    for (const MapSegment* pred : predecessors(id)) {
      for (std::size_t k = 0; k < pred->polyline.size(); ++k) {
        const double back = pred->length - static_cast<double>(k);
        if (back > 0.0 && back <= delta) {
          params.push_back(-back);
          points.push_back(pred->polyline[k]);
        }
      }
    }
    for (const MapSegment* succ : successors(id)) {
      for (std::size_t k = 1; k < succ->polyline.size() && static_cast<double>(k) <= delta; ++k) {
        params.push_back(seg.length + static_cast<double>(k));
        points.push_back(succ->polyline[k]);
      }
    }

    const Joint& js = joints.at(start_joint(id));
    const Joint& je = joints.at(end_joint(id));
    const std::optional<PlanarPoint> pin_start = js.count > 1 ? std::optional(joint_point(js)) : std::nullopt;
    const std::optional<PlanarPoint> pin_end = je.count > 1 ? std::optional(joint_point(je)) : std::nullopt;

    auto pins_for = [&](double length) {
      std::vector<CurvePin> pins;
      if (pin_start) pins.push_back({0.0, *pin_start});
      if (pin_end) pins.push_back({length, *pin_end});
      return pins;
    };

    const int degree = seg.curve.degree();
    const Curve2D first = fit_curve_pinned(params, points, degree, pins_for(seg.length));
    const auto arc = arc_positions(first, params);
    const double length = arc_length(first, 0.0, seg.length);
    const Curve2D second = fit_curve_pinned(arc, points, degree, pins_for(length)).with_range(0.0, length);
    MapSegment out = make_segment(id, second, length);
    out.support = seg.support;
    refit.emplace(id, std::move(out));
  }

  for (const auto& g : adjacency_gaps(refit)) {
    if (g.gap > kMaxAdjacencyGap) {
      std::ostringstream os;
      os << "refit left a " << g.gap << " m gap between " << to_string(g.from) << " and " << to_string(g.to);
      throw Error(ErrorKind::IllConditioned, os.str());
    }
  }
  return RoadMap(topology, std::move(refit), origin);
}

RoadMap build_road_map(std::span<const RouteTrace> traces, const GraphTopology& topology, const GeoPoint& origin,
                       const BuildOptions& options) {
  const auto buckets = bucket_samples(traces, topology);
  const auto fitted = fit_segments(buckets.buckets, topology, options.fit);
  return refit_with_neighbors(fitted, topology, origin, options.delta);
}

std::vector<AdjacencyGap> adjacency_gaps(const SegmentMap& segments) {
  std::vector<AdjacencyGap> out;
  for (const auto& [id, seg] : segments) {
    if (!id.is_turn()) continue;
    if (auto it = segments.find(SegmentId::edge(id.first)); it != segments.end()) {
      out.push_back({it->first, id, distance(it->second.end(), seg.start())});
    }
    if (auto it = segments.find(SegmentId::edge(id.second)); it != segments.end()) {
      out.push_back({id, it->first, distance(seg.end(), it->second.start())});
    }
  }
  return out;
}

}  // namespace trajmap
