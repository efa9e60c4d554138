#ifndef TRAJMAP_TRAJECTORY_HPP
#define TRAJMAP_TRAJECTORY_HPP

#include <array>
#include <span>
#include <vector>

#include "trajmap/geo.hpp"

namespace trajmap {

/// Number of one-second trajectory points.
inline constexpr int kHorizon = 7;

/// Future path in the ego frame: origin at the current position, +y along the
/// current heading, +x to the right. points[n] is the position at t + n + 1 s.
struct Trajectory {
  std::array<PlanarPoint, kHorizon> points{};

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Planar pose; heading in (−π, π], counterclockwise from +x (east).
struct Pose {
  double t = 0.0;
  PlanarPoint p;
  double heading = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

struct ControlCommand {
  int interval = 1;             ///< 1..7
  double speed = 0.0;           ///< m/s over the interval
  double steering_angle = 0.0;  ///< heading change over the interval, degrees, left positive

  friend bool operator==(const ControlCommand&, const ControlCommand&) = default;
};

using Controls = std::array<ControlCommand, kHorizon>;

/// Wraps radians to (−π, π].
double normalize_angle(double radians);
/// Wraps degrees to (−180, 180].
double wrap_degrees(double degrees);

PlanarPoint ego_to_map(const Pose& pose, const PlanarPoint& ego);
PlanarPoint map_to_ego(const Pose& pose, const PlanarPoint& world);

/// Mean Euclidean distance between corresponding points.
double trajectory_loss(const Trajectory& pred, const Trajectory& truth);

struct GroundTruthOptions {
  double fit_window = 2.0;  ///< seconds added around [t0, t0 + 7]
  int degree = 4;
  double min_speed = 0.5;   ///< m/s; below it the heading at t0 is undefined
};

struct GroundTruthSample {
  Pose pose;  ///< pose at t0, map frame
  Trajectory trajectory;
};

/// Fits a time curve around [t0, t0 + 7] and reads the next seven seconds in the ego frame at t0.
/// Throws WindowTooSparse or HeadingUndefined.
GroundTruthSample ground_truth_sample(std::span<const TimedSample> trace, double t0,
                                      const GroundTruthOptions& options = {});

Trajectory ground_truth_trajectory(std::span<const TimedSample> trace, double t0, double fit_window = 2.0);

/// Per-second speed and heading change, with the ego +y axis as the heading before interval 1.
Controls derive_controls(const Trajectory& trajectory);

/// Integrates controls back into ego positions (inverse of derive_controls).
Trajectory dead_reckon(const Controls& controls);

/// Local time-polynomial smoothing. Near either end the window slides inward to keep its width.
std::vector<Pose> smooth_poses(std::span<const Pose> poses, double window = 2.0, int degree = 2);

}  // namespace trajmap

#endif  // TRAJMAP_TRAJECTORY_HPP
