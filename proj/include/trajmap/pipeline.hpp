#ifndef TRAJMAP_PIPELINE_HPP
#define TRAJMAP_PIPELINE_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trajmap/eval.hpp"
#include "trajmap/formats.hpp"
#include "trajmap/roadmap.hpp"
#include "trajmap/trajectory.hpp"

namespace trajmap {

/// Snaps every present position onto the nearest map segment, then smooths the
/// snapped track with local time polynomials. Absent positions stay absent.
/// Each run of strictly increasing times is smoothed as its own track.
std::vector<TimedPrediction> project_and_smooth(const RoadMap& map, std::span<const TimedPrediction> poses,
                                                double window = 2.0, int degree = 2);

struct NamedTrace {
  std::string name;
  RouteTrace trace;
};

struct LabelOptions {
  GroundTruthOptions fit;
  double stride = 1.0;  ///< seconds between consecutive t0
};

/// Ground-truth samples at t0 = first + k·stride for every trace; instants whose
/// window is too sparse or whose heading is undefined are skipped.
LabelFile label_traces(std::span<const NamedTrace> traces, const LabelOptions& options = {});

/// Truth poses of a label file as a pose track.
std::vector<TimedPrediction> label_poses(const LabelFile& labels);

struct LabelPair {
  const LabelSample* truth;
  const LabelSample* predicted;
};

/// Truth samples paired with the prediction at the same trace and t0. Truth
/// samples without a prediction are left out.
std::vector<LabelPair> pair_labels(const LabelFile& truth, const LabelFile& predicted);

/// Direction-accuracy inputs for the paired samples, with each truth route
/// resolved against the map topology.
std::pair<std::vector<DirectionSample>, std::vector<Route>> direction_inputs(std::span<const LabelPair> pairs,
                                                                             const LabelFile& truth,
                                                                             const GraphTopology& topology);

}  // namespace trajmap

#endif  // TRAJMAP_PIPELINE_HPP
