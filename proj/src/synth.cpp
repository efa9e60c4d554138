#include "trajmap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "text.hpp"
#include "trajmap/error.hpp"
#include "trajmap/rng.hpp"
#include "trajmap/spatial_index.hpp"

namespace trajmap {

using namespace detail;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PlanarPoint left_normal(const PlanarPoint& v) { return {-v.y, v.x}; }

// Largest s in [lo, hi] with f(s) still false, for f monotone false→true.
template <typename F>
double bisect(double lo, double hi, F f) {
  for (int i = 0; i < 100 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Piece {
  Shape shape;
  double s0;
  double s1;
  double speed;
};

}  // namespace

// ---------------------------------------------------------------------------
// Shape

Shape Shape::line(const PlanarPoint& a, const PlanarPoint& b) {
  Shape s;
  s.a_ = a;
  s.b_ = b;
  s.length_ = distance(a, b);
  if (!(s.length_ > 0.0)) throw Error(ErrorKind::InvalidInput, "line needs two distinct points");
  return s;
}

Shape Shape::arc(const PlanarPoint& center, double radius, double start, double sweep) {
  if (!(radius > 0.0) || sweep == 0.0 || !std::isfinite(sweep)) {
    throw Error(ErrorKind::InvalidInput, "arc needs a positive radius and a non-zero sweep");
  }
  Shape s;
  s.arc_ = true;
  s.center_ = center;
  s.radius_ = radius;
  s.start_ = start;
  s.sweep_ = sweep;
  s.length_ = radius * std::abs(sweep);
  s.a_ = s.at(0.0);
  s.b_ = s.at(s.length_);
  return s;
}

Shape Shape::bulged(const PlanarPoint& a, const PlanarPoint& b, double sagitta) {
  if (sagitta == 0.0) return line(a, b);
  const double chord = distance(a, b);
  if (!(chord > 0.0)) throw Error(ErrorKind::InvalidInput, "arc needs two distinct points");
  const double half = 0.5 * chord;
  const double h = std::abs(sagitta);
  const double radius = (half * half + h * h) / (2.0 * h);
  const PlanarPoint n = (1.0 / chord) * left_normal(b - a);
  const PlanarPoint mid = 0.5 * (a + b);
  const PlanarPoint center = mid + (sagitta - std::copysign(radius, sagitta)) * n;
  const double central = 2.0 * std::atan2(half, radius - h);
  const PlanarPoint ra = a - center;
  // A left bulge travels clockwise around a centre on the right.
  return arc(center, radius, std::atan2(ra.y, ra.x), sagitta > 0.0 ? -central : central);
}

Shape Shape::tangent_arc(const PlanarPoint& from, const PlanarPoint& tangent, const PlanarPoint& to) {
  const PlanarPoint t = (1.0 / norm(tangent)) * tangent;
  const PlanarPoint d = to - from;
  const double along = dot(t, d);
  const double side = cross(t, d);
  const double dd = dot(d, d);
  if (std::abs(side) <= 1e-9 * dd) {
    if (along <= 0.0) throw Error(ErrorKind::InvalidInput, "turn target lies behind the direction of travel");
    return line(from, to);
  }
  const double signed_radius = dd / (2.0 * side);
  const PlanarPoint center = from + signed_radius * left_normal(t);
  const PlanarPoint r0 = from - center;
  return arc(center, std::abs(signed_radius), std::atan2(r0.y, r0.x), 2.0 * std::atan2(side, along));
}

PlanarPoint Shape::at(double s) const {
  if (!arc_) return a_ + (s / length_) * (b_ - a_);
  const double th = start_ + sweep_ * (s / length_);
  return center_ + radius_ * PlanarPoint{std::cos(th), std::sin(th)};
}

PlanarPoint Shape::tangent(double s) const {
  if (!arc_) return (1.0 / length_) * (b_ - a_);
  const double th = start_ + sweep_ * (s / length_);
  const double dir = sweep_ > 0.0 ? 1.0 : -1.0;
  return dir * PlanarPoint{-std::sin(th), std::cos(th)};
}

double Shape::distance_to(const PlanarPoint& p) const {
  if (!arc_) return project_onto_segment(p, a_, b_).dist;
  const PlanarPoint r = p - center_;
  const double rn = norm(r);
  if (rn > 0.0) {
    const double phi = std::atan2(r.y, r.x);
    double rel = sweep_ > 0.0 ? phi - start_ : start_ - phi;
    rel = std::fmod(rel, kTwoPi);
    if (rel < 0.0) rel += kTwoPi;
    if (rel <= std::abs(sweep_)) return std::abs(rn - radius_);
  }
  return std::min(distance(p, a_), distance(p, b_));
}

// ---------------------------------------------------------------------------
// World spec

GraphTopology WorldSpec::topology() const {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& e : edges) es.push_back({e.id, e.from, e.to});
  return GraphTopology(nodes, std::move(es));
}

WorldSpec parse_world(std::string_view text) {
  WorldSpec w;
  for (const Line& l : lines_of(text)) {
    if (l.header) continue;
    const std::string_view key = l.fields[0];
    if (key == "seed") {
      expect_count(l, 2);
      const std::int64_t v = int_at(l, 1);
      if (v < 0) fail(l, "seed must be non-negative");
      w.seed = static_cast<std::uint64_t>(v);
    } else if (key == "noise") {
      expect_count(l, 2);
      w.noise = real_at(l, 1);
      if (w.noise < 0.0) fail(l, "noise must be non-negative");
    } else if (key == "rate" || key == "speed" || key == "turn_speed") {
      expect_count(l, 2);
      const double v = real_at(l, 1);
      if (!(v > 0.0)) fail(l, std::string(key) + " must be positive");
      (key == "rate" ? w.rate : key == "speed" ? w.speed : w.turn_speed) = v;
    } else if (key == "km_limit") {
      expect_count(l, 2);
      w.km_limit = real_at(l, 1);
      if (w.km_limit < 0.0) fail(l, "km_limit must be non-negative");
    } else if (key == "runs" || key == "min_crossings") {
      expect_count(l, 2);
      const std::int64_t v = int_at(l, 1);
      if (v < (key == "runs" ? 1 : 0) || v > 1000000) fail(l, std::string(key) + " out of range");
      (key == "runs" ? w.runs : w.min_crossings) = static_cast<int>(v);
    } else if (key == "origin") {
      expect_count(l, 3);
      w.origin = geo_at(l, 1);
    } else if (key == "node") {
      expect_count(l, 5);
      w.nodes.push_back({NodeId(id_at(l, 1)), {real_at(l, 2), real_at(l, 3)}, real_at(l, 4)});
    } else if (key == "edge") {
      if (l.fields.size() < 5) fail(l, "edge needs id, from, to and shape");
      WorldEdge e{EdgeId(id_at(l, 1)), NodeId(id_at(l, 2)), NodeId(id_at(l, 3))};
      if (l.fields[4] == "line") {
        expect_count(l, 5);
      } else if (l.fields[4] == "arc") {
        expect_count(l, 6);
        e.arc = true;
        e.bulge = real_at(l, 5);
        if (e.bulge == 0.0 || std::abs(e.bulge) > 0.5) fail(l, "arc bulge must be non-zero and at most 0.5");
      } else {
        fail(l, "edge shape must be line or arc");
      }
      w.edges.push_back(e);
    } else {
      fail(l, "unknown record '" + std::string(key) + "'");
    }
  }
  try {
    SyntheticWorld check(w);
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, std::string("invalid world: ") + e.what());
  }
  return w;
}

std::string serialize_world(const WorldSpec& w) {
  std::string out;
  auto line = [&](std::initializer_list<std::string> fields) {
    bool first = true;
    for (const auto& f : fields) {
      if (!first) out += ',';
      out += f;
      first = false;
    }
    out += '\n';
  };
  line({"seed", std::to_string(w.seed)});
  line({"noise", format_real(w.noise)});
  line({"rate", format_real(w.rate)});
  line({"speed", format_real(w.speed)});
  line({"turn_speed", format_real(w.turn_speed)});
  line({"km_limit", format_real(w.km_limit)});
  line({"runs", std::to_string(w.runs)});
  line({"min_crossings", std::to_string(w.min_crossings)});
  line({"origin", format_real(w.origin.lat), format_real(w.origin.lon)});
  for (const auto& n : w.nodes) {
    line({"node", std::to_string(n.id.value), format_real(n.center.x), format_real(n.center.y), format_real(n.radius)});
  }
  for (const auto& e : w.edges) {
    if (e.arc) {
      line({"edge", std::to_string(e.id.value), std::to_string(e.from.value), std::to_string(e.to.value), "arc",
            format_real(e.bulge)});
    } else {
      line({"edge", std::to_string(e.id.value), std::to_string(e.from.value), std::to_string(e.to.value), "line"});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// World

SyntheticWorld::SyntheticWorld(WorldSpec spec) : spec_(std::move(spec)), topology_(spec_.topology()) {
  for (const auto& e : spec_.edges) {
    const Node& a = topology_.node(e.from);
    const Node& b = topology_.node(e.to);
    const double chord = distance(a.center, b.center);
    if (a.radius + b.radius >= chord) {
      throw Error(ErrorKind::InvalidInput, "discs of nodes " + std::to_string(a.id.value) + " and " +
                                               std::to_string(b.id.value) + " overlap");
    }
    const Shape road = e.arc ? Shape::bulged(a.center, b.center, e.bulge * chord) : Shape::line(a.center, b.center);
    const double len = road.length();
    const double leave = bisect(0.0, 0.5 * len, [&](double s) { return distance(road.at(s), a.center) >= a.radius; });
    const double enter = bisect(0.5 * len, len, [&](double s) { return distance(road.at(s), b.center) < b.radius; });
    roads_.emplace(e.id, road);
    outside_.emplace(e.id, std::pair{leave, enter});
  }
}

Shape SyntheticWorld::turn(EdgeId in, EdgeId out) const {
  if (topology_.edge(in).to != topology_.edge(out).from) {
    throw Error(ErrorKind::InvalidInput, "edges " + std::to_string(in.value) + " and " + std::to_string(out.value) +
                                             " do not meet");
  }
  const Shape& r_in = road(in);
  const Shape& r_out = road(out);
  const double s_in = outside_.at(in).second;
  const double s_out = outside_.at(out).first;
  return Shape::tangent_arc(r_in.at(s_in), r_in.tangent(s_in), r_out.at(s_out));
}

EdgeLengths SyntheticWorld::road_lengths() const {
  EdgeLengths out;
  for (const auto& [id, road] : roads_) out[id] = road.length();
  return out;
}

double SyntheticWorld::distance_to_truth(const SegmentId& id, const PlanarPoint& p) const {
  if (id.is_edge()) return road(id.first).distance_to(p);
  return std::min({turn(id.first, id.second).distance_to(p), road(id.first).distance_to(p),
                   road(id.second).distance_to(p)});
}

std::vector<std::pair<std::int64_t, PlanarPoint>> SyntheticWorld::drive(const Route& route) const {
  std::vector<Piece> pieces;
  const std::size_t n = route.edges.size();
  for (std::size_t i = 0; i < n; ++i) {
    const EdgeId e = route.edges[i];
    if (i > 0) {
      const Shape t = turn(route.edges[i - 1], e);
      pieces.push_back({t, 0.0, t.length(), spec_.turn_speed});
    }
    const auto [leave, enter] = outside_.at(e);
    pieces.push_back({road(e), i == 0 ? 0.0 : leave, i + 1 == n ? road(e).length() : enter, spec_.speed});
  }

  std::vector<std::pair<std::int64_t, PlanarPoint>> out;
  std::size_t piece = 0;
  double piece_t0 = 0.0;  // time at which the current piece starts
  for (std::int64_t k = 0;; ++k) {
    const auto ms = static_cast<std::int64_t>(std::llround(static_cast<double>(k) * 1000.0 / spec_.rate));
    const double t = static_cast<double>(ms) / 1000.0;
    while (piece < pieces.size() && t > piece_t0 + (pieces[piece].s1 - pieces[piece].s0) / pieces[piece].speed) {
      piece_t0 += (pieces[piece].s1 - pieces[piece].s0) / pieces[piece].speed;
      ++piece;
    }
    if (piece == pieces.size()) break;
    const Piece& p = pieces[piece];
    out.emplace_back(ms, p.shape.at(p.s0 + (t - piece_t0) * p.speed));
  }
  return out;
}

SyntheticData generate_synthetic(const SyntheticWorld& world) {
  const WorldSpec& spec = world.spec();
  SyntheticData data;
  data.topology.origin = spec.origin;
  data.topology.explicit_origin = true;
  for (const auto& n : world.topology().nodes()) {
    data.topology.nodes.push_back({n.id, to_geodetic(n.center, spec.origin), n.radius});
  }
  data.topology.edges.assign(world.topology().edges().begin(), world.topology().edges().end());

  CoverageConfig cfg;
  cfg.seed = spec.seed;
  cfg.limit_m = spec.km_limit * 1000.0;
  cfg.runs = spec.runs;
  cfg.min_crossings = spec.min_crossings;
  data.plan = simulate_coverage(world.topology(), world.road_lengths(), cfg);

  const CounterRng noise_root(splitmix64_mix(spec.seed ^ 0x6e6f697365ULL));
  for (std::size_t i = 0; i < data.plan.legs.size(); ++i) {
    CounterRng rng = noise_root.substream(i);
    TraceFile trace;
    trace.origin = spec.origin;
    trace.route = data.plan.legs[i].nodes;
    for (const auto& [ms, p] : world.drive(data.plan.legs[i])) {
      PlanarPoint noisy = p;
      if (spec.noise > 0.0) {
        noisy.x += spec.noise * rng.normal();
        noisy.y += spec.noise * rng.normal();
      }
      trace.ms.push_back(ms);
      trace.points.push_back(to_geodetic(noisy, spec.origin));
    }
    data.traces.push_back(std::move(trace));
  }
  return data;
}

FidelityReport map_fidelity(const RoadMap& map, const SyntheticWorld& world) {
  const GeoPoint& world_origin = world.spec().origin;
  const bool same_frame = map.origin() == world_origin;
  FidelityReport report;
  std::vector<double> dists;
  for (const auto& [id, seg] : map.segments()) {
    ++report.segments;
    for (const auto& q : seg.polyline) {
      const PlanarPoint p = same_frame ? q : to_planar(to_geodetic(q, map.origin()), world_origin);
      const double d = world.distance_to_truth(id, p);
      dists.push_back(d);
      if (d > report.max || report.points == 0) {
        report.max = std::max(report.max, d);
        report.worst = id;
      }
      ++report.points;
    }
  }
  if (dists.empty()) throw Error(ErrorKind::UndefinedMetrics, "map has no polyline points");
  double sum = 0.0;
  for (double d : dists) sum += d;
  report.mean = sum / static_cast<double>(dists.size());
  return report;
}

}  // namespace trajmap
