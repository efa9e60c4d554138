#include "trajmap/pipeline.hpp"

#include <cmath>
#include <map>

#include "trajmap/error.hpp"

namespace trajmap {

std::vector<TimedPrediction> project_and_smooth(const RoadMap& map, std::span<const TimedPrediction> poses,
                                                double window, int degree) {
  std::vector<TimedPrediction> out(poses.begin(), poses.end());
  std::size_t begin = 0;
  while (begin < poses.size()) {
    std::size_t end = begin + 1;
    while (end < poses.size() && poses[end].t > poses[end - 1].t) ++end;

    std::vector<Pose> snapped;
    std::vector<std::size_t> where;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& p = poses[i];
      if (!p.pose.position) continue;
      snapped.push_back({p.t, map.project(*p.pose.position).q, p.pose.heading.value_or(0.0)});
      where.push_back(i);
    }
    if (!snapped.empty()) {
      const std::vector<Pose> smoothed = smooth_poses(snapped, window, degree);
      for (std::size_t k = 0; k < where.size(); ++k) {
        auto& o = out[where[k]];
        o.pose.position = smoothed[k].p;
        if (o.pose.heading) o.pose.heading = smoothed[k].heading;
      }
    }
    begin = end;
  }
  return out;
}

LabelFile label_traces(std::span<const NamedTrace> traces, const LabelOptions& options) {
  if (!(options.stride > 0.0)) throw Error(ErrorKind::InvalidInput, "label stride must be positive");
  LabelFile out;
  for (const auto& nt : traces) {
    out.routes.emplace_back(nt.name, nt.trace.route);
    const auto& s = nt.trace.samples;
    if (s.empty()) continue;
    const double first = s.front().t;
    const double last = s.back().t;
    for (long k = 0;; ++k) {
      const double t0 = first + static_cast<double>(k) * options.stride;
      if (t0 + kHorizon > last) break;
      try {
        const GroundTruthSample g = ground_truth_sample(s, t0, options.fit);
        out.samples.push_back({nt.name, g.pose, g.trajectory});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::WindowTooSparse && e.kind() != ErrorKind::HeadingUndefined &&
            e.kind() != ErrorKind::IllConditioned) {
          throw;
        }
      }
    }
  }
  return out;
}

std::vector<TimedPrediction> label_poses(const LabelFile& labels) {
  std::vector<TimedPrediction> out;
  out.reserve(labels.samples.size());
  for (const auto& s : labels.samples) out.push_back({s.pose.t, {s.pose.p, s.pose.heading}});
  return out;
}

std::vector<LabelPair> pair_labels(const LabelFile& truth, const LabelFile& predicted) {
  std::map<std::pair<std::string, double>, const LabelSample*> pred;
  for (const auto& s : predicted.samples) pred[{s.trace, s.pose.t}] = &s;
  std::vector<LabelPair> out;
  for (const auto& s : truth.samples) {
    const auto it = pred.find({s.trace, s.pose.t});
    if (it != pred.end()) out.push_back({&s, it->second});
  }
  return out;
}

std::pair<std::vector<DirectionSample>, std::vector<Route>> direction_inputs(std::span<const LabelPair> pairs,
                                                                             const LabelFile& truth,
                                                                             const GraphTopology& topology) {
  std::map<std::string, Route> routes;
  for (const auto& [name, nodes] : truth.routes) {
    Route r;
    r.nodes = nodes;
    r.edges = topology.route_edges(nodes);
    routes.emplace(name, std::move(r));
  }

  std::pair<std::vector<DirectionSample>, std::vector<Route>> out;
  for (const auto& [t, p] : pairs) {
    const auto r = routes.find(t->trace);
    if (r == routes.end()) throw Error(ErrorKind::InvalidInput, "no route for trace " + t->trace);
    out.first.push_back({t->pose, p->trajectory});
    out.second.push_back(r->second);
  }
  return out;
}

}  // namespace trajmap
