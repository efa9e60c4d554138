// Command-line front end for the trajmap library.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trajmap/error.hpp"
#include "trajmap/eval.hpp"
#include "trajmap/formats.hpp"
#include "trajmap/image.hpp"
#include "trajmap/pipeline.hpp"
#include "trajmap/reports.hpp"
#include "trajmap/roadmap.hpp"
#include "trajmap/routing.hpp"
#include "trajmap/synth.hpp"

namespace fs = std::filesystem;
using namespace trajmap;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::vector<NamedTrace> load_traces(const fs::path& dir, const GeoPoint& origin, const GraphTopology* topology) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "trace directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<NamedTrace> out;
  for (const auto& f : files) {
    try {
      const TraceFile tf = parse_trace(read_file(f), topology);
      out.push_back({f.stem().string(), to_route_trace(tf, origin)});
    } catch (const Error& e) {
      throw Error(e.kind(), f.string() + ": " + e.message());
    }
  }
  return out;
}

void note_unpaired(std::size_t paired, std::size_t total) {
  if (paired < total) std::cerr << "note: " << total - paired << " of " << total << " true samples have no prediction\n";
}

template <typename T, typename F>
T load(const fs::path& path, F parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.message());
  }
}

RoadMap load_map(const fs::path& p) {
  return load<RoadMap>(p, [](const std::string& t) { return parse_map(t); });
}

void emit_report(const std::string& table, const KeyValues& kv, const std::string& kv_path) {
  std::cout << table;
  if (!kv_path.empty()) write_file_atomic(kv_path, serialize_key_values(kv));
}

PlanarPoint parse_xy(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error(ErrorKind::InvalidInput, "expected X,Y but got '" + s + "'");
  const auto x = parse_real(s.substr(0, comma));
  const auto y = parse_real(s.substr(comma + 1));
  if (!x || !y) throw Error(ErrorKind::InvalidInput, "expected X,Y but got '" + s + "'");
  return {*x, *y};
}

bool same_map(const RoadMap& a, const RoadMap& b) {
  if (!(a.origin() == b.origin())) return false;
  if (!std::equal(a.topology().nodes().begin(), a.topology().nodes().end(), b.topology().nodes().begin(),
                  b.topology().nodes().end()))
    return false;
  if (!std::equal(a.topology().edges().begin(), a.topology().edges().end(), b.topology().edges().begin(),
                  b.topology().edges().end()))
    return false;
  if (a.segments().size() != b.segments().size()) return false;
  for (const auto& [id, seg] : a.segments()) {
    const MapSegment* other = b.find(id);
    if (!other || !(other->curve == seg.curve) || other->length != seg.length || other->polyline != seg.polyline) {
      return false;
    }
  }
  return true;
}

// Parses, re-serializes and re-parses; true when both parses are equal and the
// re-serialized text matches the file byte for byte.
struct RoundTrip {
  bool structural = false;
  bool bytes = false;
};

template <typename P, typename S, typename Eq>
RoundTrip round_trip(const std::string& text, P parse, S serialize, Eq equal) {
  const auto first = parse(text);
  const std::string again = serialize(first);
  const auto second = parse(again);
  return {equal(first, second), again == text};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytical road maps from GPS traces, trajectory labels and evaluation metrics"};
  app.require_subcommand(1);

  // build-map
  auto* build = app.add_subcommand("build-map", "Bucket traces per segment, fit and refit polynomial segments");
  std::string b_topology, b_traces, b_out;
  double b_delta = 5.0;
  bool b_skip = false;
  build->add_option("--topology", b_topology, "Topology file")->required();
  build->add_option("--traces", b_traces, "Directory of trace files (*.txt)")->required();
  build->add_option("--delta", b_delta, "Neighbour buffer for the refit, meters")->capture_default_str();
  build->add_option("--out", b_out, "Output map file")->required();
  build->add_flag("--skip-starved-turns", b_skip, "Leave out turn segments with too few samples instead of failing");

  // project
  auto* project = app.add_subcommand("project", "Snap poses onto the map and smooth them in time");
  std::string p_map, p_poses, p_out;
  double p_window = 2.0;
  int p_degree = 2;
  project->add_option("--map", p_map, "Map file")->required();
  project->add_option("--poses", p_poses, "Pose file (t,x,y,heading)")->required();
  project->add_option("--smooth-window", p_window, "Smoothing window, seconds")->capture_default_str();
  project->add_option("--degree", p_degree, "Smoothing polynomial degree")->capture_default_str();
  project->add_option("--out", p_out, "Output pose file")->required();

  // simulate-routes
  auto* sim = app.add_subcommand("simulate-routes", "Plan a coverage drive of chained shortest routes");
  std::string s_topology, s_map, s_out, s_report;
  std::uint64_t s_seed = 0;
  double s_km = 350.0;
  int s_runs = 1000;
  int s_min = 3;
  sim->add_option("--topology", s_topology, "Topology file")->required();
  sim->add_option("--map", s_map, "Use fitted segment lengths from this map instead of centre distances");
  sim->add_option("--seed", s_seed, "Random seed")->capture_default_str();
  sim->add_option("--km-limit", s_km, "Distance budget per run, km")->capture_default_str();
  sim->add_option("--runs", s_runs, "Number of simulation runs")->capture_default_str();
  sim->add_option("--min-crossings", s_min, "Crossings a pair edge needs")->capture_default_str();
  sim->add_option("--out", s_out, "Output plan file");
  sim->add_option("--report", s_report, "Per-pair-edge crossing table");

  // crop
  auto* crop = app.add_subcommand("crop", "Rasterize the full-map and route-only crops around a pose");
  std::string c_map, c_center, c_route, c_out;
  double c_heading = 0.0;
  int c_size = 128;
  crop->add_option("--map", c_map, "Map file")->required();
  crop->add_option("--center", c_center, "Crop centre X,Y in map meters")->required();
  crop->add_option("--heading", c_heading, "Heading pointing up, radians counterclockwise from east")
      ->capture_default_str();
  crop->add_option("--route", c_route, "File with the route as comma-separated node ids")->required();
  crop->add_option("--size", c_size, "Crop side in pixels (even, at least 32)")->capture_default_str();
  crop->add_option("--out", c_out, "Two output PGM paths: full,route")->required();

  // ground-truth
  auto* gt = app.add_subcommand("ground-truth", "Fit trajectory labels from traces");
  std::string g_traces, g_topology, g_out, g_poses;
  LabelOptions g_opts;
  gt->add_option("--traces", g_traces, "Directory of trace files (*.txt)")->required();
  gt->add_option("--topology", g_topology, "Topology file; its origin sets the planar frame");
  gt->add_option("--out", g_out, "Output label file")->required();
  gt->add_option("--poses-out", g_poses, "Also write the truth poses");
  gt->add_option("--stride", g_opts.stride, "Seconds between labelled instants")->capture_default_str();
  gt->add_option("--fit-window", g_opts.fit.fit_window, "Seconds of fit margin around the horizon")
      ->capture_default_str();
  gt->add_option("--degree", g_opts.fit.degree, "Time polynomial degree")->capture_default_str();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Metric reports");
  ev->require_subcommand(1);
  std::string e_pred, e_truth, e_kv, e_map, e_world;
  DirectionOptions e_dir;
  auto* ev_poses = ev->add_subcommand("poses", "Response rate and position/orientation errors");
  ev_poses->add_option("--pred", e_pred, "Predicted pose file")->required();
  ev_poses->add_option("--truth", e_truth, "True pose file")->required();
  ev_poses->add_option("--kv", e_kv, "Key-value report output");
  auto* ev_controls = ev->add_subcommand("controls", "Per-second speed and steering MAE");
  ev_controls->add_option("--pred", e_pred, "Predicted trajectory labels")->required();
  ev_controls->add_option("--truth", e_truth, "True trajectory labels")->required();
  ev_controls->add_option("--kv", e_kv, "Key-value report output");
  auto* ev_dir = ev->add_subcommand("direction", "Intersection direction accuracy per horizon second");
  ev_dir->add_option("--map", e_map, "Map file")->required();
  ev_dir->add_option("--pred", e_pred, "Predicted trajectory labels")->required();
  ev_dir->add_option("--truth", e_truth, "True trajectory labels with routes")->required();
  ev_dir->add_option("--off-road", e_dir.off_road, "Off-road exclusion distance, meters")->capture_default_str();
  ev_dir->add_option("--borderline", e_dir.borderline, "Borderline exclusion margin, meters")->capture_default_str();
  ev_dir->add_option("--kv", e_kv, "Key-value report output");
  auto* ev_map = ev->add_subcommand("map", "Distance of a built map to the synthetic ground truth");
  double e_mean_limit = 1.5, e_max_limit = 4.0;
  ev_map->add_option("--map", e_map, "Map file")->required();
  ev_map->add_option("--world", e_world, "World spec used to generate the traces")->required();
  ev_map->add_option("--max-mean", e_mean_limit, "Fail above this mean distance, meters")->capture_default_str();
  ev_map->add_option("--max-max", e_max_limit, "Fail above this max distance, meters")->capture_default_str();
  ev_map->add_option("--kv", e_kv, "Key-value report output");

  // synth
  auto* syn = app.add_subcommand("synth", "Generate a synthetic world: topology, plan and noisy traces");
  std::string y_spec, y_out;
  syn->add_option("--spec", y_spec, "World spec file")->required();
  syn->add_option("--out", y_out, "Output directory")->required();

  // check
  auto* chk = app.add_subcommand("check", "Verify that a file survives a parse/serialize round trip");
  std::string k_kind, k_file, k_topology;
  chk->add_option("kind", k_kind, "topology|trace|map|plan|poses|labels|report|world")
      ->required()
      ->check(CLI::IsMember({"topology", "trace", "map", "plan", "poses", "labels", "report", "world"}));
  chk->add_option("file", k_file, "File to check")->required();
  chk->add_option("--topology", k_topology, "Topology file (plans only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*build) {
      const TopologyFile topo = load<TopologyFile>(b_topology, [](const std::string& t) { return parse_topology(t); });
      const GraphTopology graph = topo.planar();
      const auto named = load_traces(b_traces, topo.origin, &graph);
      std::vector<RouteTrace> traces;
      for (const auto& nt : named) traces.push_back(nt.trace);
      BuildOptions opts;
      opts.delta = b_delta;
      opts.fit.skip_starved = b_skip;
      const RoadMap map = build_road_map(traces, graph, topo.origin, opts);
      write_file_atomic(b_out, serialize_map(map));
      double worst = 0.0;
      for (const auto& g : adjacency_gaps(map.segments())) worst = std::max(worst, g.gap);
      std::cout << "segments " << map.segments().size() << ", traces " << traces.size() << ", max joint gap "
                << format_real(worst) << " m\n";
    } else if (*project) {
      const RoadMap map = load_map(p_map);
      const auto poses = load<std::vector<TimedPrediction>>(p_poses, [](const std::string& t) { return parse_poses(t); });
      write_file_atomic(p_out, serialize_poses(project_and_smooth(map, poses, p_window, p_degree)));
    } else if (*sim) {
      const TopologyFile topo = load<TopologyFile>(s_topology, [](const std::string& t) { return parse_topology(t); });
      const GraphTopology graph = topo.planar();
      const EdgeLengths lengths = s_map.empty() ? center_distance_lengths(graph) : segment_lengths(load_map(s_map));
      CoverageConfig cfg;
      cfg.seed = s_seed;
      cfg.limit_m = s_km * 1000.0;
      cfg.runs = s_runs;
      cfg.min_crossings = s_min;
      const RoutePlan plan = simulate_coverage(graph, lengths, cfg);
      if (!s_out.empty()) write_file_atomic(s_out, serialize_plan(plan));
      if (!s_report.empty()) write_file_atomic(s_report, coverage_table(plan, graph, s_min));
      std::cout << "run " << plan.run_index << ", legs " << plan.legs.size() << ", distance "
                << format_real(plan.total_length / 1000.0) << " km, pair edges under " << s_min << " crossings: "
                << plan.under_crossed << " of " << all_pair_edges(graph).size() << "\n";
    } else if (*crop) {
      const RoadMap map = load_map(c_map);
      const auto comma = c_out.find(',');
      if (comma == std::string::npos) throw Error(ErrorKind::InvalidInput, "--out needs two paths: full,route");
      std::vector<NodeId> nodes;
      {
        std::istringstream in(read_file(c_route));
        std::string field;
        while (std::getline(in, field, ',')) {
          field.erase(std::remove_if(field.begin(), field.end(), [](unsigned char ch) { return std::isspace(ch); }),
                      field.end());
          if (field.empty()) continue;
          const auto v = parse_real(field);
          if (!v || *v != std::floor(*v)) throw Error(ErrorKind::Parse, c_route + ": bad node id '" + field + "'");
          nodes.emplace_back(static_cast<int>(*v));
        }
      }
      const std::vector<SegmentId> route = route_segments(map.topology(), nodes);
      const PlanarPoint center = parse_xy(c_center);
      write_file_atomic(c_out.substr(0, comma), encode_pgm(rasterize_crop(map, center, c_heading, std::nullopt, c_size)));
      write_file_atomic(c_out.substr(comma + 1),
                        encode_pgm(rasterize_crop(map, center, c_heading, std::span<const SegmentId>(route), c_size)));
    } else if (*gt) {
      std::optional<TopologyFile> topo;
      if (!g_topology.empty()) topo = load<TopologyFile>(g_topology, [](const std::string& t) { return parse_topology(t); });
      std::vector<NamedTrace> traces;
      if (topo) {
        const GraphTopology graph = topo->planar();
        traces = load_traces(g_traces, topo->origin, &graph);
      } else {
        // Without a topology every trace uses its own header origin; they must agree.
        std::optional<GeoPoint> origin;
        for (const auto& entry : fs::directory_iterator(g_traces)) {
          if (entry.path().extension() != ".txt") continue;
          const GeoPoint o = parse_trace(read_file(entry.path())).origin;
          if (origin && !(*origin == o)) throw Error(ErrorKind::InvalidInput, "traces use different origins");
          origin = o;
        }
        if (!origin) throw Error(ErrorKind::InsufficientData, "no traces in " + g_traces);
        traces = load_traces(g_traces, *origin, nullptr);
      }
      const LabelFile labels = label_traces(traces, g_opts);
      write_file_atomic(g_out, serialize_labels(labels));
      if (!g_poses.empty()) write_file_atomic(g_poses, serialize_poses(label_poses(labels)));
      std::cout << "labelled " << labels.samples.size() << " instants from " << traces.size() << " traces\n";
    } else if (*ev_poses) {
      const auto pred = load<std::vector<TimedPrediction>>(e_pred, [](const std::string& t) { return parse_poses(t); });
      const auto truth = load<std::vector<TimedPrediction>>(e_truth, [](const std::string& t) { return parse_poses(t); });
      std::vector<PosePrediction> preds;
      std::vector<Pose> truths;
      if (pred.size() != truth.size()) throw Error(ErrorKind::InvalidInput, "pose files differ in length");
      for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!truth[i].pose.position || !truth[i].pose.heading) {
          throw Error(ErrorKind::InvalidInput, "true pose " + std::to_string(i + 1) + " is incomplete");
        }
        preds.push_back(pred[i].pose);
        truths.push_back({truth[i].t, *truth[i].pose.position, *truth[i].pose.heading});
      }
      const PoseMetricsReport r = pose_metrics(preds, truths);
      emit_report(pose_table({{fs::path(e_pred).stem().string(), r}}), pose_key_values(r), e_kv);
    } else if (*ev_controls) {
      const auto pred = load<LabelFile>(e_pred, [](const std::string& t) { return parse_labels(t); });
      const auto truth = load<LabelFile>(e_truth, [](const std::string& t) { return parse_labels(t); });
      const std::vector<LabelPair> pairs = pair_labels(truth, pred);
      note_unpaired(pairs.size(), truth.samples.size());
      std::vector<Controls> pc;
      std::vector<Controls> tc;
      for (const auto& [t, p] : pairs) {
        pc.push_back(derive_controls(p->trajectory));
        tc.push_back(derive_controls(t->trajectory));
      }
      const ControlMaeTable table = control_mae(pc, tc);
      emit_report(control_table(table), control_key_values(table), e_kv);
    } else if (*ev_dir) {
      const RoadMap map = load_map(e_map);
      const auto pred = load<LabelFile>(e_pred, [](const std::string& t) { return parse_labels(t); });
      const auto truth = load<LabelFile>(e_truth, [](const std::string& t) { return parse_labels(t); });
      const std::vector<LabelPair> pairs = pair_labels(truth, pred);
      note_unpaired(pairs.size(), truth.samples.size());
      const auto [samples, routes] = direction_inputs(pairs, truth, map.topology());
      const DirectionReport r = direction_accuracy(samples, routes, map, e_dir);
      emit_report(direction_table(r), direction_key_values(r), e_kv);
    } else if (*ev_map) {
      const RoadMap map = load_map(e_map);
      const SyntheticWorld world(load<WorldSpec>(e_world, [](const std::string& t) { return parse_world(t); }));
      const FidelityReport f = map_fidelity(map, world);
      double worst_gap = 0.0;
      for (const auto& g : adjacency_gaps(map.segments())) worst_gap = std::max(worst_gap, g.gap);
      const FidelityVerdict v{f, worst_gap, f.mean <= e_mean_limit && f.max <= e_max_limit && worst_gap <= kMaxAdjacencyGap};
      emit_report(fidelity_table(v), fidelity_key_values(v), e_kv);
      if (!v.pass) return kExitData;
    } else if (*syn) {
      const WorldSpec spec = load<WorldSpec>(y_spec, [](const std::string& t) { return parse_world(t); });
      const SyntheticData data = generate_synthetic(SyntheticWorld(spec));
      const fs::path out(y_out);
      fs::create_directories(out / "traces");
      for (const auto& entry : fs::directory_iterator(out / "traces")) {
        if (entry.path().extension() == ".txt") fs::remove(entry.path());
      }
      write_file_atomic(out / "world.txt", serialize_world(spec));
      write_file_atomic(out / "topology.txt", serialize_topology(data.topology));
      write_file_atomic(out / "plan.txt", serialize_plan(data.plan));
      std::size_t samples = 0;
      for (std::size_t i = 0; i < data.traces.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "trace_%05zu.txt", i);
        write_file_atomic(out / "traces" / name, serialize_trace(data.traces[i]));
        samples += data.traces[i].ms.size();
      }
      std::cout << "wrote " << data.traces.size() << " traces, " << samples << " samples, "
                << format_real(data.plan.total_length / 1000.0) << " km\n";
    } else if (*chk) {
      const std::string text = read_file(k_file);
      RoundTrip rt;
      auto eq = [](const auto& a, const auto& b) { return a == b; };
      if (k_kind == "topology") {
        rt = round_trip(text, [](const std::string& t) { return parse_topology(t); }, serialize_topology, eq);
      } else if (k_kind == "trace") {
        rt = round_trip(text, [](const std::string& t) { return parse_trace(t); }, serialize_trace, eq);
      } else if (k_kind == "map") {
        rt = round_trip(text, [](const std::string& t) { return parse_map(t); }, serialize_map, same_map);
      } else if (k_kind == "plan") {
        if (k_topology.empty()) throw Error(ErrorKind::InvalidInput, "checking a plan needs --topology");
        const GraphTopology graph =
            load<TopologyFile>(k_topology, [](const std::string& t) { return parse_topology(t); }).planar();
        rt = round_trip(text, [&](const std::string& t) { return parse_plan(t, graph); }, serialize_plan, eq);
      } else if (k_kind == "poses") {
        rt = round_trip(
            text, [](const std::string& t) { return parse_poses(t); },
            [](const std::vector<TimedPrediction>& p) { return serialize_poses(p); }, eq);
      } else if (k_kind == "labels") {
        rt = round_trip(text, [](const std::string& t) { return parse_labels(t); }, serialize_labels, eq);
      } else if (k_kind == "report") {
        rt = round_trip(text, [](const std::string& t) { return parse_key_values(t); }, serialize_key_values, eq);
      } else {
        rt = round_trip(text, [](const std::string& t) { return parse_world(t); }, serialize_world, eq);
      }
      std::cout << k_file << ": " << (rt.structural ? "round trip ok" : "round trip MISMATCH")
                << (rt.bytes ? ", canonical" : ", not canonical") << "\n";
      if (!rt.structural) return kExitData;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_numerical(e.kind()) ? kExitNumeric : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
