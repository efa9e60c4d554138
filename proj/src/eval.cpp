#include "trajmap/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "trajmap/error.hpp"

namespace trajmap {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

PlanarPoint pixel_to_planar(const MaskImage& m, double col, double row) {
  return {m.frame_origin.x + col * m.meters_per_pixel, m.frame_origin.y + row * m.meters_per_pixel};
}

void check_mask(const MaskImage& m, const char* name) {
  if (m.image.width() <= 0 || m.image.height() <= 0) {
    throw Error(ErrorKind::InvalidInput, std::string(name) + " mask is empty");
  }
  if (!(m.meters_per_pixel > 0.0) || !std::isfinite(m.meters_per_pixel)) {
    throw Error(ErrorKind::InvalidInput, std::string(name) + " mask needs a positive pixel size");
  }
}

PoseMetrics summarize(std::vector<double> errors, std::size_t total) {
  PoseMetrics m;
  m.total = total;
  m.responded = errors.size();
  m.response_rate = static_cast<double>(errors.size()) / static_cast<double>(total);
  if (!errors.empty()) {
    m.mean_err = pairwise_sum(errors) / static_cast<double>(errors.size());
    m.median_err = median(std::move(errors));
  }
  return m;
}

double mean_of(std::span<const double> v) { return pairwise_sum(v) / static_cast<double>(v.size()); }

// Branches of the intersection at route.nodes[k]: the segments a vehicle on
// the route can take from there, split into the one it actually took and the rest.
struct Branches {
  std::vector<SegmentId> truth;
  std::vector<SegmentId> other;
};

Branches branches_at(const Route& route, std::size_t k, const RoadMap& map) {
  const GraphTopology& topo = map.topology();
  const NodeId node = route.nodes[k];
  const EdgeId taken = route.edges[k];
  Branches b;
  auto add = [&](const SegmentId& id, bool on_route) {
    if (!map.find(id)) return;
    (on_route ? b.truth : b.other).push_back(id);
  };
  for (EdgeId out : topo.out_edges(node)) {
    const bool on_route = out == taken;
    if (k > 0) add(SegmentId::turn(route.edges[k - 1], out), on_route);
    add(SegmentId::edge(out), on_route);
  }
  return b;
}

// Index of the non-final route node whose disc contains p (nearest centre wins).
std::optional<std::size_t> intersection_index(const Route& route, const GraphTopology& topo, const PlanarPoint& p) {
  std::optional<std::size_t> best;
  double best_dist = 0.0;
  for (std::size_t k = 0; k < route.nodes.size(); ++k) {
    const Node& n = topo.node(route.nodes[k]);
    const double d = distance(p, n.center);
    if (d > n.radius) continue;
    if (!best || d < best_dist) {
      best = k;
      best_dist = d;
    }
  }
  if (best && *best + 1 >= route.nodes.size()) return std::nullopt;
  return best;
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::UndefinedMetrics, "median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::optional<Component> largest_component(const BinaryImage& image) {
  const int w = image.width();
  const int h = image.height();
  std::vector<char> seen(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  std::optional<Component> best;
  std::vector<std::pair<int, int>> stack;
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      const std::size_t idx = static_cast<std::size_t>(row) * w + col;
      if (!image.at(col, row) || seen[idx]) continue;
      seen[idx] = 1;
      stack.assign(1, {col, row});
      std::size_t area = 0;
      double sum_c = 0.0;
      double sum_r = 0.0;
      while (!stack.empty()) {
        const auto [c, r] = stack.back();
        stack.pop_back();
        ++area;
        sum_c += c;
        sum_r += r;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int nc = c + dc;
            const int nr = r + dr;
            if (!image.contains(nc, nr) || !image.at(nc, nr)) continue;
            const std::size_t nidx = static_cast<std::size_t>(nr) * w + nc;
            if (seen[nidx]) continue;
            seen[nidx] = 1;
            stack.emplace_back(nc, nr);
          }
        }
      }
      if (!best || area > best->area) {
        best = Component{area, sum_c / static_cast<double>(area), sum_r / static_cast<double>(area)};
      }
    }
  }
  return best;
}

std::optional<PosePrediction> decode_pose_from_masks(const MaskImage& position_mask,
                                                     const MaskImage& orientation_mask) {
  check_mask(position_mask, "position");
  check_mask(orientation_mask, "orientation");
  if (position_mask.image.width() != orientation_mask.image.width() ||
      position_mask.image.height() != orientation_mask.image.height() ||
      position_mask.meters_per_pixel != orientation_mask.meters_per_pixel ||
      position_mask.frame_origin != orientation_mask.frame_origin) {
    throw Error(ErrorKind::InvalidInput, "position and orientation masks must share dimensions and frame");
  }
  const auto dot = largest_component(position_mask.image);
  if (!dot) return std::nullopt;
  const double ideal = std::numbers::pi * kDotRadiusPx * kDotRadiusPx;
  const double ratio = static_cast<double>(dot->area) / ideal;
  if (ratio < kMinDotAreaRatio || ratio > kMaxDotAreaRatio) return std::nullopt;

  PosePrediction out;
  out.position = pixel_to_planar(position_mask, dot->col, dot->row);
  if (const auto half = largest_component(orientation_mask.image)) {
    const double dx = (half->col - dot->col) * position_mask.meters_per_pixel;
    const double dy = (half->row - dot->row) * position_mask.meters_per_pixel;
    if (dx != 0.0 || dy != 0.0) out.heading = normalize_angle(std::atan2(dy, dx));
  }
  return out;
}

PoseMetricsReport pose_metrics(std::span<const PosePrediction> preds, std::span<const Pose> truths) {
  if (preds.empty()) throw Error(ErrorKind::UndefinedMetrics, "no samples to evaluate");
  if (preds.size() != truths.size()) {
    throw Error(ErrorKind::InvalidInput, "predictions and truths differ in length (" + std::to_string(preds.size()) +
                                             " vs " + std::to_string(truths.size()) + ")");
  }
  std::vector<double> pos_err;
  std::vector<double> ang_err;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].position) pos_err.push_back(distance(*preds[i].position, truths[i].p));
    if (preds[i].heading) {
      ang_err.push_back(std::abs(wrap_degrees((*preds[i].heading - truths[i].heading) * kRadToDeg)));
    }
  }
  return {summarize(std::move(pos_err), preds.size()), summarize(std::move(ang_err), preds.size())};
}

ControlMaeTable control_mae(std::span<const Controls> pred, std::span<const Controls> truth) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorKind::InvalidInput, "predicted and true control sets differ in count");
  }
  if (pred.empty()) throw Error(ErrorKind::UndefinedMetrics, "no control sets to evaluate");
  ControlMaeTable table;
  table.samples = pred.size();
  std::vector<double> speed(pred.size());
  std::vector<double> angle(pred.size());
  for (int n = 0; n < kHorizon; ++n) {
    for (std::size_t i = 0; i < pred.size(); ++i) {
      speed[i] = std::abs(pred[i][n].speed - truth[i][n].speed);
      angle[i] = std::abs(wrap_degrees(pred[i][n].steering_angle - truth[i][n].steering_angle));
    }
    table.speed[n] = mean_of(speed);
    table.angle[n] = mean_of(angle);
  }
  return table;
}

DirectionReport direction_accuracy(std::span<const DirectionSample> samples, std::span<const Route> truth_routes,
                                   const RoadMap& map, const DirectionOptions& options) {
  if (samples.size() != truth_routes.size()) {
    throw Error(ErrorKind::InvalidInput, "every direction sample needs its truth route");
  }
  DirectionReport report;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Route& route = truth_routes[i];
    if (route.nodes.size() < 2 || route.edges.size() + 1 != route.nodes.size()) {
      throw Error(ErrorKind::InvalidInput, "truth route " + std::to_string(i) + " is malformed");
    }
    const auto k = intersection_index(route, map.topology(), samples[i].pose.p);
    if (!k) continue;
    const Branches b = branches_at(route, *k, map);
    if (b.truth.empty() || b.other.empty()) continue;
    for (int n = 0; n < kHorizon; ++n) {
      const PlanarPoint p = ego_to_map(samples[i].pose, samples[i].trajectory.points[n]);
      const double d_true = map.project(p, b.truth)->dist;
      const double d_false = map.project(p, b.other)->dist;
      if (std::min(d_true, d_false) > options.off_road) continue;
      if (std::abs(d_true - d_false) < options.borderline) continue;
      ++report.counted[n];
      if (d_true < d_false) ++report.correct[n];
    }
  }
  for (int n = 0; n < kHorizon; ++n) {
    if (report.counted[n] > 0) {
      report.per_second_accuracy[n] = static_cast<double>(report.correct[n]) / report.counted[n];
    }
  }
  return report;
}

}  // namespace trajmap
