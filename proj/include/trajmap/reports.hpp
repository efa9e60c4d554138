#ifndef TRAJMAP_REPORTS_HPP
#define TRAJMAP_REPORTS_HPP

#include <string>
#include <vector>

#include "trajmap/eval.hpp"
#include "trajmap/formats.hpp"
#include "trajmap/routing.hpp"
#include "trajmap/synth.hpp"

namespace trajmap {

/// Fixed-width table with a header row; the first column is left aligned, the rest right aligned.
std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

/// One row per method: response rates, mean and median errors for position and orientation.
std::string pose_table(const std::vector<std::pair<std::string, PoseMetricsReport>>& methods);
KeyValues pose_key_values(const PoseMetricsReport& report);

/// Speed and steering-angle rows over the seven one-second intervals.
std::string control_table(const ControlMaeTable& table);
KeyValues control_key_values(const ControlMaeTable& table);

std::string direction_table(const DirectionReport& report);
KeyValues direction_key_values(const DirectionReport& report);

/// Crossing count of every pair edge in the topology.
std::string coverage_table(const RoutePlan& plan, const GraphTopology& topology, int min_crossings);

struct FidelityVerdict {
  FidelityReport report;
  double max_joint_gap = 0.0;
  bool pass = false;
};

std::string fidelity_table(const FidelityVerdict& v);
KeyValues fidelity_key_values(const FidelityVerdict& v);

}  // namespace trajmap

#endif  // TRAJMAP_REPORTS_HPP
