#include "trajmap/reports.hpp"

#include <algorithm>
#include <cstdio>

namespace trajmap {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string fixed(const std::optional<double>& v, int decimals) { return v ? fixed(*v, decimals) : "-"; }

std::string percent(double fraction) { return fixed(100.0 * fraction, 1) + "%"; }

std::string optional_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

std::vector<std::string> horizon_header(const std::string& first) {
  std::vector<std::string> h{first};
  for (int n = 1; n <= kHorizon; ++n) h.push_back(std::to_string(n) + "s");
  return h;
}

}  // namespace

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  };
  widen(header);
  for (const auto& r : rows) widen(r);

  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string cell = i < row.size() ? row[i] : "";
      const std::string pad(width[i] - cell.size(), ' ');
      if (i > 0) out += "  ";
      out += i == 0 ? cell + pad : pad + cell;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  };
  emit(header);
  std::size_t total = 0;
  for (std::size_t w : width) total += w;
  out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
  for (const auto& r : rows) emit(r);
  return out;
}

std::string pose_table(const std::vector<std::pair<std::string, PoseMetricsReport>>& methods) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [name, r] : methods) {
    rows.push_back({name, percent(r.position.response_rate), fixed(r.position.mean_err, 2),
                    fixed(r.position.median_err, 2), percent(r.orientation.response_rate),
                    fixed(r.orientation.mean_err, 2), fixed(r.orientation.median_err, 2)});
  }
  return render_table({"Method", "Pos. response", "Mean (m)", "Median (m)", "Ori. response", "Mean (deg)",
                       "Median (deg)"},
                      rows);
}

KeyValues pose_key_values(const PoseMetricsReport& r) {
  return {
      {"position.total", std::to_string(r.position.total)},
      {"position.responded", std::to_string(r.position.responded)},
      {"position.response_rate", format_real(r.position.response_rate)},
      {"position.mean_err_m", optional_real(r.position.mean_err)},
      {"position.median_err_m", optional_real(r.position.median_err)},
      {"orientation.responded", std::to_string(r.orientation.responded)},
      {"orientation.response_rate", format_real(r.orientation.response_rate)},
      {"orientation.mean_err_deg", optional_real(r.orientation.mean_err)},
      {"orientation.median_err_deg", optional_real(r.orientation.median_err)},
  };
}

std::string control_table(const ControlMaeTable& table) {
  std::vector<std::string> speed{"Speed (m/s)"};
  std::vector<std::string> angle{"Steering Angle (deg)"};
  for (int n = 0; n < kHorizon; ++n) {
    speed.push_back(fixed(table.speed[n], 2));
    angle.push_back(fixed(table.angle[n], 2));
  }
  return render_table(horizon_header("Mean error"), {speed, angle});
}

KeyValues control_key_values(const ControlMaeTable& table) {
  KeyValues kv{{"samples", std::to_string(table.samples)}};
  for (int n = 0; n < kHorizon; ++n) kv.emplace_back("speed_mae." + std::to_string(n + 1), format_real(table.speed[n]));
  for (int n = 0; n < kHorizon; ++n) kv.emplace_back("angle_mae." + std::to_string(n + 1), format_real(table.angle[n]));
  return kv;
}

std::string direction_table(const DirectionReport& report) {
  std::vector<std::string> acc{"Accuracy"};
  std::vector<std::string> counted{"Counted"};
  for (int n = 0; n < kHorizon; ++n) {
    acc.push_back(report.per_second_accuracy[n] ? percent(*report.per_second_accuracy[n]) : "-");
    counted.push_back(std::to_string(report.counted[n]));
  }
  return render_table(horizon_header("Direction"), {acc, counted});
}

KeyValues direction_key_values(const DirectionReport& report) {
  KeyValues kv;
  for (int n = 0; n < kHorizon; ++n) {
    const std::string k = std::to_string(n + 1);
    kv.emplace_back("accuracy." + k, optional_real(report.per_second_accuracy[n]));
    kv.emplace_back("counted." + k, std::to_string(report.counted[n]));
    kv.emplace_back("correct." + k, std::to_string(report.correct[n]));
  }
  return kv;
}

std::string coverage_table(const RoutePlan& plan, const GraphTopology& topology, int min_crossings) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& pe : all_pair_edges(topology)) {
    const auto it = plan.pair_edge_counts.find(pe);
    const int c = it == plan.pair_edge_counts.end() ? 0 : it->second;
    const Edge& in = topology.edge(pe.first);
    const Edge& out = topology.edge(pe.second);
    rows.push_back({std::to_string(in.from.value) + "->" + std::to_string(in.to.value) + "->" +
                        std::to_string(out.to.value),
                    std::to_string(pe.first.value), std::to_string(pe.second.value), std::to_string(c),
                    c < min_crossings ? "under" : ""});
  }
  return render_table({"Pair edge", "In", "Out", "Crossings", ""}, rows);
}

std::string fidelity_table(const FidelityVerdict& v) {
  char gap[32];
  std::snprintf(gap, sizeof gap, "%.2e", v.max_joint_gap);
  return render_table({"Map fidelity", "Value"},
                      {{"segments", std::to_string(v.report.segments)},
                       {"polyline points", std::to_string(v.report.points)},
                       {"mean distance (m)", fixed(v.report.mean, 3)},
                       {"max distance (m)", fixed(v.report.max, 3)},
                       {"worst segment", to_string(v.report.worst)},
                       {"max joint gap (m)", gap},
                       {"verdict", v.pass ? "pass" : "fail"}});
}

KeyValues fidelity_key_values(const FidelityVerdict& v) {
  return {{"segments", std::to_string(v.report.segments)},
          {"points", std::to_string(v.report.points)},
          {"mean_m", format_real(v.report.mean)},
          {"max_m", format_real(v.report.max)},
          {"max_gap_m", format_real(v.max_joint_gap)},
          {"pass", v.pass ? "1" : "0"}};
}

}  // namespace trajmap
