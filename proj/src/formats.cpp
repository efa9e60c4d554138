#include "trajmap/formats.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "trajmap/error.hpp"
#include "text.hpp"

namespace trajmap {

using namespace detail;

namespace {

class Writer {
 public:
  Writer& field(std::string_view s) {
    if (!first_) os_ << ',';
    os_ << s;
    first_ = false;
    return *this;
  }
  Writer& real(double v) { return field(format_real(v)); }
  Writer& integer(std::int64_t v) { return field(std::to_string(v)); }
  Writer& comment(std::string_view s) {
    os_ << "# " << s << '\n';
    return *this;
  }
  void end() {
    os_ << '\n';
    first_ = true;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
  bool first_ = true;
};

}  // namespace

// ---------------------------------------------------------------------------

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorKind::Io, "cannot format number");
  return std::string(buf, ptr);
}

std::optional<double> parse_real(std::string_view field) {
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "cannot read " + path.string());
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot replace " + path.string());
  }
}

// ---------------------------------------------------------------------------
// Topology

GraphTopology TopologyFile::planar() const {
  std::vector<Node> ns;
  ns.reserve(nodes.size());
  for (const auto& n : nodes) ns.push_back({n.id, to_planar(n.where, origin), n.radius});
  return GraphTopology(std::move(ns), edges);
}

TopologyFile parse_topology(std::string_view text) {
  TopologyFile out;
  for (const Line& l : lines_of(text)) {
    const std::string_view key = l.fields[0];
    if (l.header) {
      if (key == "origin") {
        expect_count(l, 3);
        out.origin = geo_at(l, 1);
        out.explicit_origin = true;
      }
      continue;
    }
    if (key == "node") {
      expect_count(l, 5);
      GeoNode n{NodeId(id_at(l, 1)), geo_at(l, 2), real_at(l, 4)};
      if (!(n.radius > 0.0)) fail(l, "node radius must be positive");
      out.nodes.push_back(n);
    } else if (key == "edge") {
      expect_count(l, 4);
      out.edges.push_back({EdgeId(id_at(l, 1)), NodeId(id_at(l, 2)), NodeId(id_at(l, 3))});
    } else {
      fail(l, "unknown record '" + std::string(key) + "'");
    }
  }
  if (out.nodes.empty()) throw Error(ErrorKind::Parse, "topology has no nodes");
  if (!out.explicit_origin) {
    double lat = 0.0;
    double lon = 0.0;
    for (const auto& n : out.nodes) {
      lat += n.where.lat;
      lon += n.where.lon;
    }
    out.origin = {lat / static_cast<double>(out.nodes.size()), lon / static_cast<double>(out.nodes.size())};
  }
  try {
    (void)out.planar();
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, std::string("invalid topology: ") + e.what());
  }
  return out;
}

std::string serialize_topology(const TopologyFile& topo) {
  Writer w;
  if (topo.explicit_origin) w.field("# origin").real(topo.origin.lat).real(topo.origin.lon).end();
  for (const auto& n : topo.nodes) {
    w.field("node").integer(n.id.value).real(n.where.lat).real(n.where.lon).real(n.radius).end();
  }
  for (const auto& e : topo.edges) w.field("edge").integer(e.id.value).integer(e.from.value).integer(e.to.value).end();
  return w.str();
}

// ---------------------------------------------------------------------------
// Traces

TraceFile parse_trace(std::string_view text, const GraphTopology* topology) {
  TraceFile out;
  bool have_origin = false;
  bool have_route = false;
  for (const Line& l : lines_of(text)) {
    const std::string_view key = l.fields[0];
    if (l.header) {
      if (key == "origin") {
        expect_count(l, 3);
        out.origin = geo_at(l, 1);
        have_origin = true;
      } else if (key == "route") {
        if (l.fields.size() < 3) fail(l, "route needs at least two nodes");
        out.route.clear();
        for (std::size_t i = 1; i < l.fields.size(); ++i) {
          const NodeId n(id_at(l, i));
          if (topology && !topology->has_node(n)) fail(l, "unknown node " + std::to_string(n.value));
          out.route.push_back(n);
        }
        if (topology) {
          try {
            (void)topology->route_edges(out.route);
          } catch (const Error& e) {
            fail(l, e.what());
          }
        }
        have_route = true;
      }
      continue;
    }
    if (!have_origin || !have_route) fail(l, "sample row before the origin and route header");
    expect_count(l, 3);
    const std::int64_t ms = int_at(l, 0);
    if (!out.ms.empty() && ms <= out.ms.back()) fail(l, "timestamp " + std::to_string(ms) + " is not increasing");
    out.ms.push_back(ms);
    out.points.push_back(geo_at(l, 1));
  }
  if (!have_origin) throw Error(ErrorKind::Parse, "trace has no '# origin' header");
  if (!have_route) throw Error(ErrorKind::Parse, "trace has no '# route' header");
  return out;
}

std::string serialize_trace(const TraceFile& trace) {
  Writer w;
  w.field("# origin").real(trace.origin.lat).real(trace.origin.lon).end();
  w.field("# route");
  for (NodeId n : trace.route) w.integer(n.value);
  w.end();
  for (std::size_t i = 0; i < trace.ms.size(); ++i) {
    w.integer(trace.ms[i]).real(trace.points[i].lat).real(trace.points[i].lon).end();
  }
  return w.str();
}

RouteTrace to_route_trace(const TraceFile& trace, const GeoPoint& origin) {
  RouteTrace out;
  out.route = trace.route;
  out.samples.reserve(trace.ms.size());
  for (std::size_t i = 0; i < trace.ms.size(); ++i) {
    out.samples.push_back({static_cast<double>(trace.ms[i]) / 1000.0, to_planar(trace.points[i], origin)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Maps

std::string serialize_map(const RoadMap& map) {
  Writer w;
  w.field("origin").real(map.origin().lat).real(map.origin().lon).end();
  for (const auto& n : map.topology().nodes()) {
    w.field("node").integer(n.id.value).real(n.center.x).real(n.center.y).real(n.radius).end();
  }
  for (const auto& e : map.topology().edges()) {
    w.field("edge").integer(e.id.value).integer(e.from.value).integer(e.to.value).end();
  }
  for (const auto& [id, seg] : map.segments()) {
    w.field("segment");
    if (id.is_edge()) {
      w.field("edge").integer(id.first.value);
    } else {
      w.field("turn").integer(id.first.value).integer(id.second.value);
    }
    w.integer(seg.curve.degree()).real(seg.length);
    for (double a : seg.curve.coeffs_x()) w.real(a);
    for (double b : seg.curve.coeffs_y()) w.real(b);
    w.end();
  }
  return w.str();
}

RoadMap parse_map(std::string_view text) {
  std::optional<GeoPoint> origin;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::pair<const Line*, MapSegment>> pending;
  const std::vector<Line> lines = lines_of(text);
  for (const Line& l : lines) {
    if (l.header) continue;
    const std::string_view key = l.fields[0];
    if (key == "origin") {
      expect_count(l, 3);
      origin = geo_at(l, 1);
    } else if (key == "node") {
      expect_count(l, 5);
      nodes.push_back({NodeId(id_at(l, 1)), {real_at(l, 2), real_at(l, 3)}, real_at(l, 4)});
    } else if (key == "edge") {
      expect_count(l, 4);
      edges.push_back({EdgeId(id_at(l, 1)), NodeId(id_at(l, 2)), NodeId(id_at(l, 3))});
    } else if (key == "segment") {
      if (l.fields.size() < 2) fail(l, "segment kind missing");
      std::size_t i = 2;
      SegmentId id;
      if (l.fields[1] == "edge") {
        id = SegmentId::edge(EdgeId(id_at(l, i++)));
      } else if (l.fields[1] == "turn") {
        const EdgeId in(id_at(l, i++));
        id = SegmentId::turn(in, EdgeId(id_at(l, i++)));
      } else {
        fail(l, "segment kind must be edge or turn");
      }
      const std::int64_t degree = int_at(l, i++);
      if (degree < 0 || degree > 64) fail(l, "unsupported degree");
      const double length = real_at(l, i++);
      if (!(length > 0.0)) fail(l, "segment length must be positive");
      const auto n = static_cast<std::size_t>(degree) + 1;
      expect_count(l, i + 2 * n);
      std::vector<double> a(n);
      std::vector<double> b(n);
      for (std::size_t k = 0; k < n; ++k) a[k] = real_at(l, i + k);
      for (std::size_t k = 0; k < n; ++k) b[k] = real_at(l, i + n + k);
      pending.emplace_back(&l, make_segment(id, Curve2D(std::move(a), std::move(b), 0.0, length), length));
    } else {
      fail(l, "unknown record '" + std::string(key) + "'");
    }
  }
  if (!origin) throw Error(ErrorKind::Parse, "map has no origin record");
  SegmentMap segments;
  for (auto& [line, seg] : pending) {
    if (!segments.emplace(seg.id, std::move(seg)).second) fail(*line, "duplicate segment");
  }
  try {
    return RoadMap(GraphTopology(std::move(nodes), std::move(edges)), std::move(segments), *origin);
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, std::string("invalid map: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Plans

std::string serialize_plan(const RoutePlan& plan) {
  Writer w;
  w.field("run").integer(static_cast<std::int64_t>(plan.run_index)).end();
  w.field("under").integer(static_cast<std::int64_t>(plan.under_crossed)).end();
  w.field("total").real(plan.total_length).end();
  for (const auto& leg : plan.legs) {
    w.field("leg").real(leg.length);
    for (NodeId n : leg.nodes) w.integer(n.value);
    w.end();
  }
  for (const auto& [pair, count] : plan.pair_edge_counts) {
    w.field("pair").integer(pair.first.value).integer(pair.second.value).integer(count).end();
  }
  return w.str();
}

RoutePlan parse_plan(std::string_view text, const GraphTopology& topology) {
  RoutePlan plan;
  for (const Line& l : lines_of(text)) {
    if (l.header) continue;
    const std::string_view key = l.fields[0];
    if (key == "run") {
      expect_count(l, 2);
      plan.run_index = static_cast<std::size_t>(int_at(l, 1));
    } else if (key == "under") {
      expect_count(l, 2);
      plan.under_crossed = static_cast<std::size_t>(int_at(l, 1));
    } else if (key == "total") {
      expect_count(l, 2);
      plan.total_length = real_at(l, 1);
    } else if (key == "leg") {
      if (l.fields.size() < 4) fail(l, "leg needs a length and at least two nodes");
      Route r;
      r.length = real_at(l, 1);
      for (std::size_t i = 2; i < l.fields.size(); ++i) r.nodes.emplace_back(id_at(l, i));
      try {
        r.edges = topology.route_edges(r.nodes);
      } catch (const Error& e) {
        fail(l, e.what());
      }
      plan.legs.push_back(std::move(r));
    } else if (key == "pair") {
      expect_count(l, 4);
      plan.pair_edge_counts[{EdgeId(id_at(l, 1)), EdgeId(id_at(l, 2))}] = static_cast<int>(int_at(l, 3));
    } else {
      fail(l, "unknown record '" + std::string(key) + "'");
    }
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Poses

std::string serialize_poses(std::span<const TimedPrediction> poses) {
  Writer w;
  w.comment("t,x,y,heading");
  for (const auto& p : poses) {
    w.real(p.t);
    if (p.pose.position) {
      w.real(p.pose.position->x).real(p.pose.position->y);
    } else {
      w.field("").field("");
    }
    if (p.pose.heading) {
      w.real(*p.pose.heading);
    } else {
      w.field("");
    }
    w.end();
  }
  return w.str();
}

std::vector<TimedPrediction> parse_poses(std::string_view text) {
  std::vector<TimedPrediction> out;
  for (const Line& l : lines_of(text)) {
    if (l.header) continue;
    expect_count(l, 4);
    TimedPrediction p;
    p.t = real_at(l, 0);
    p.pose.position = optional_point(l, 1);
    if (!l.fields[3].empty()) p.pose.heading = real_at(l, 3);
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Labels

const std::vector<NodeId>* LabelFile::route_of(const std::string& trace) const {
  for (const auto& [name, route] : routes)
    if (name == trace) return &route;
  return nullptr;
}

std::string serialize_labels(const LabelFile& labels) {
  Writer w;
  for (const auto& [name, route] : labels.routes) {
    w.field("route").field(name);
    for (NodeId n : route) w.integer(n.value);
    w.end();
  }
  for (const auto& s : labels.samples) {
    w.field("sample").field(s.trace).real(s.pose.t).real(s.pose.p.x).real(s.pose.p.y).real(s.pose.heading);
    for (const auto& q : s.trajectory.points) w.real(q.x).real(q.y);
    w.end();
  }
  return w.str();
}

LabelFile parse_labels(std::string_view text) {
  LabelFile out;
  for (const Line& l : lines_of(text)) {
    if (l.header) continue;
    const std::string_view key = l.fields[0];
    if (key == "route") {
      if (l.fields.size() < 4) fail(l, "route needs a trace name and at least two nodes");
      std::vector<NodeId> nodes;
      for (std::size_t i = 2; i < l.fields.size(); ++i) nodes.emplace_back(id_at(l, i));
      out.routes.emplace_back(std::string(l.fields[1]), std::move(nodes));
    } else if (key == "sample") {
      expect_count(l, 6 + 2 * kHorizon);
      LabelSample s;
      s.trace = std::string(l.fields[1]);
      s.pose = {real_at(l, 2), {real_at(l, 3), real_at(l, 4)}, real_at(l, 5)};
      for (int n = 0; n < kHorizon; ++n) s.trajectory.points[n] = {real_at(l, 6 + 2 * n), real_at(l, 7 + 2 * n)};
      out.samples.push_back(std::move(s));
    } else {
      fail(l, "unknown record '" + std::string(key) + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Key-value documents

std::string serialize_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (k.find_first_of(",\n") != std::string::npos || v.find('\n') != std::string::npos) {
      throw Error(ErrorKind::InvalidInput, "report key or value contains a separator: " + k);
    }
    out += k;
    out += ',';
    out += v;
    out += '\n';
  }
  return out;
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  for (const Line& l : lines_of(text)) {
    if (l.header) continue;
    if (l.fields.size() < 2) fail(l, "expected key,value");
    // Values may themselves contain commas.
    std::string value(l.fields[1]);
    for (std::size_t i = 2; i < l.fields.size(); ++i) {
      value += ',';
      value += l.fields[i];
    }
    out.emplace_back(std::string(l.fields[0]), std::move(value));
  }
  return out;
}

}  // namespace trajmap
