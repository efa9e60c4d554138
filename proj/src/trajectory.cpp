#include "trajmap/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "trajmap/error.hpp"
#include "trajmap/polyfit.hpp"

namespace trajmap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRadToDeg = 180.0 / kPi;
constexpr double kStandstill = 0.05;  // meters per interval

PlanarPoint unit(double heading) { return {std::cos(heading), std::sin(heading)}; }
PlanarPoint right_of(double heading) { return {std::sin(heading), -std::cos(heading)}; }

}  // namespace

double normalize_angle(double radians) {
  double a = std::remainder(radians, 2.0 * kPi);  // [−π, π]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

double wrap_degrees(double degrees) {
  double a = std::remainder(degrees, 360.0);
  if (a <= -180.0) a += 360.0;
  return a;
}

PlanarPoint ego_to_map(const Pose& pose, const PlanarPoint& ego) {
  return pose.p + ego.x * right_of(pose.heading) + ego.y * unit(pose.heading);
}

PlanarPoint map_to_ego(const Pose& pose, const PlanarPoint& world) {
  const PlanarPoint w = world - pose.p;
  return {dot(w, right_of(pose.heading)), dot(w, unit(pose.heading))};
}

double trajectory_loss(const Trajectory& pred, const Trajectory& truth) {
  double sum = 0.0;
  for (int n = 0; n < kHorizon; ++n) sum += distance(truth.points[n], pred.points[n]);
  return sum / kHorizon;
}

GroundTruthSample ground_truth_sample(std::span<const TimedSample> trace, double t0, const GroundTruthOptions& options) {
  const double lo = t0 - 0.5 * options.fit_window;
  const double hi = t0 + kHorizon + 0.5 * options.fit_window;
  std::vector<double> params;
  std::vector<PlanarPoint> points;
  for (const auto& s : trace) {
    if (s.t >= lo && s.t <= hi) {
      params.push_back(s.t - t0);
      points.push_back(s.p);
    }
  }
  if (params.size() < static_cast<std::size_t>(options.degree) + 1 || params.front() > 0.0 ||
      params.back() < kHorizon) {
    std::ostringstream os;
    os << "trace does not cover [" << t0 << ", " << t0 + kHorizon << "] with at least " << options.degree + 1
       << " samples";
    throw Error(ErrorKind::WindowTooSparse, os.str());
  }
  const Curve2D curve = fit_curve(params, points, options.degree);
  const PlanarPoint velocity = curve.derivative(0.0);
  if (norm(velocity) < options.min_speed) {
    throw Error(ErrorKind::HeadingUndefined, "vehicle is stationary at t0");
  }
  GroundTruthSample out;
  out.pose = {t0, curve.at(0.0), normalize_angle(std::atan2(velocity.y, velocity.x))};
  for (int n = 0; n < kHorizon; ++n) out.trajectory.points[n] = map_to_ego(out.pose, curve.at(n + 1.0));
  return out;
}

Trajectory ground_truth_trajectory(std::span<const TimedSample> trace, double t0, double fit_window) {
  GroundTruthOptions options;
  options.fit_window = fit_window;
  return ground_truth_sample(trace, t0, options).trajectory;
}

Controls derive_controls(const Trajectory& trajectory) {
  Controls out{};
  PlanarPoint prev{0.0, 0.0};
  double heading = kPi / 2.0;
  double steering = 0.0;
  for (int n = 0; n < kHorizon; ++n) {
    const PlanarPoint step = trajectory.points[n] - prev;
    const double len = norm(step);
    if (len < kStandstill) {
      heading += steering / kRadToDeg;
    } else {
      const double h = std::atan2(step.y, step.x);
      steering = wrap_degrees((h - heading) * kRadToDeg);
      heading = h;
    }
    out[n] = {n + 1, len, steering};
    prev = trajectory.points[n];
  }
  return out;
}

Trajectory dead_reckon(const Controls& controls) {
  Trajectory out;
  PlanarPoint p{0.0, 0.0};
  double heading = kPi / 2.0;
  for (int n = 0; n < kHorizon; ++n) {
    heading += controls[n].steering_angle / kRadToDeg;
    p += controls[n].speed * unit(heading);
    out.points[n] = p;
  }
  return out;
}

std::vector<Pose> smooth_poses(std::span<const Pose> poses, double window, int degree) {
  if (!(window > 0.0)) throw Error(ErrorKind::InvalidInput, "smoothing window must be positive");
  for (std::size_t i = 1; i < poses.size(); ++i) {
    if (poses[i].t < poses[i - 1].t) throw Error(ErrorKind::InvalidInput, "poses must be sorted by time");
  }
  const double half = 0.5 * window;
  std::vector<Pose> out(poses.begin(), poses.end());
  if (poses.empty()) return out;
  const double first = poses.front().t;
  const double last = poses.back().t;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    // Near either end the window slides inward instead of shrinking.
    double lo = poses[i].t - half;
    double hi = poses[i].t + half;
    if (lo < first) {
      hi = std::min(last, hi + (first - lo));
      lo = first;
    } else if (hi > last) {
      lo = std::max(first, lo - (hi - last));
      hi = last;
    }
    lo -= 1e-9;
    hi += 1e-9;
    std::vector<double> params;
    std::vector<PlanarPoint> points;
    const auto start = std::lower_bound(poses.begin(), poses.end(), lo,
                                        [](const Pose& p, double t) { return p.t < t; });
    for (auto j = static_cast<std::size_t>(start - poses.begin()); j < poses.size() && poses[j].t <= hi; ++j) {
      params.push_back(poses[j].t - poses[i].t);
      points.push_back(poses[j].p);
    }
    if (params.size() < static_cast<std::size_t>(degree) + 1) continue;
    try {
      const Curve2D c = fit_curve(params, points, degree);
      out[i].p = c.at(0.0);
      const PlanarPoint v = c.derivative(0.0);
      if (norm(v) > 1e-9) out[i].heading = normalize_angle(std::atan2(v.y, v.x));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IllConditioned) throw;
    }
  }
  return out;
}

}  // namespace trajmap
