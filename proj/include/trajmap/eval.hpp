#ifndef TRAJMAP_EVAL_HPP
#define TRAJMAP_EVAL_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "trajmap/image.hpp"
#include "trajmap/roadmap.hpp"
#include "trajmap/routing.hpp"
#include "trajmap/trajectory.hpp"

namespace trajmap {

/// Radius of the ideal position dot, pixels.
inline constexpr double kDotRadiusPx = 15.0;
/// Accepted dot area as a fraction of π·kDotRadiusPx².
inline constexpr double kMinDotAreaRatio = 0.25;
inline constexpr double kMaxDotAreaRatio = 1.75;

/// A segmentation output. Pixel (col, row) sits at
/// frame_origin + (col·meters_per_pixel, row·meters_per_pixel).
struct MaskImage {
  BinaryImage image;
  double meters_per_pixel = 1.0;
  PlanarPoint frame_origin;
};

struct Component {
  std::size_t area = 0;
  double col = 0.0;  ///< centroid
  double row = 0.0;
};

/// Largest 8-connected component; ties go to the one found first in row-major order.
std::optional<Component> largest_component(const BinaryImage& image);

/// A localization output; either part may be missing.
struct PosePrediction {
  std::optional<PlanarPoint> position;
  std::optional<double> heading;

  friend bool operator==(const PosePrediction&, const PosePrediction&) = default;
};

/// Position from the dot centroid, heading from the dot towards the half-dot.
/// nullopt when the dot is missing or its area is outside the accepted band;
/// heading is absent when the orientation mask is empty.
std::optional<PosePrediction> decode_pose_from_masks(const MaskImage& position_mask,
                                                     const MaskImage& orientation_mask);

struct PoseMetrics {
  double response_rate = 0.0;
  std::optional<double> mean_err;
  std::optional<double> median_err;
  std::size_t responded = 0;
  std::size_t total = 0;
};

struct PoseMetricsReport {
  PoseMetrics position;     ///< meters
  PoseMetrics orientation;  ///< degrees
};

/// Throws UndefinedMetrics on empty input, InvalidInput on misalignment.
PoseMetricsReport pose_metrics(std::span<const PosePrediction> preds, std::span<const Pose> truths);

struct ControlMaeTable {
  std::array<double, kHorizon> speed{};  ///< m/s
  std::array<double, kHorizon> angle{};  ///< degrees
  std::size_t samples = 0;
};

ControlMaeTable control_mae(std::span<const Controls> pred, std::span<const Controls> truth);

/// Current pose and predicted ego trajectory for one evaluation instant.
struct DirectionSample {
  Pose pose;
  Trajectory trajectory;
};

struct DirectionOptions {
  /// Points farther than this from every candidate are off-road and not counted.
  double off_road = 15.0;
  /// Points whose nearest right and wrong candidates differ by less than this are borderline.
  double borderline = 1.0;
};

struct DirectionReport {
  std::array<std::optional<double>, kHorizon> per_second_accuracy{};
  std::array<int, kHorizon> counted{};
  std::array<int, kHorizon> correct{};
};

/// How often the predicted point at each horizon is closer to the true route's
/// branch than to any other branch of the intersection the vehicle is in.
DirectionReport direction_accuracy(std::span<const DirectionSample> samples, std::span<const Route> truth_routes,
                                   const RoadMap& map, const DirectionOptions& options = {});

/// Fixed-order pairwise summation.
double pairwise_sum(std::span<const double> values);
/// Median by sorting a copy; mean of the two middle values for even sizes.
double median(std::vector<double> values);

}  // namespace trajmap

#endif  // TRAJMAP_EVAL_HPP
