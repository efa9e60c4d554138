#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "trajmap/error.hpp"
#include "trajmap/eval.hpp"

using namespace trajmap;

namespace {

constexpr double kPi = 3.14159265358979323846;

NodeId N(int v) { return NodeId(v); }
EdgeId E(int v) { return EdgeId(v); }

MaskImage mask(BinaryImage img, double mpp = 1.0, PlanarPoint origin = {}) { return {std::move(img), mpp, origin}; }

/// `area` pixels filled row by row inside a square block whose corner is (c0, r0).
BinaryImage blob(int w, int h, int c0, int r0, int area) {
  BinaryImage img(w, h);
  const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(area))));
  for (int k = 0; k < area; ++k) img.set(c0 + k % side, r0 + k / side, true);
  return img;
}

/// Straight-through and left branch at node 2: edges 1: 1→2, 2: 2→3, 3: 2→4.
SyntheticWorld junction() {
  WorldSpec spec;
  spec.rate = 5.0;
  spec.nodes = {{N(1), {0, 0}, 15}, {N(2), {200, 0}, 15}, {N(3), {400, 0}, 15}, {N(4), {200, 200}, 15}};
  spec.edges = {{E(1), N(1), N(2)}, {E(2), N(2), N(3)}, {E(3), N(2), N(4)}};
  return SyntheticWorld(spec);
}

struct Replay {
  std::vector<DirectionSample> samples;
  std::vector<Route> routes;
};

/// Poses along `truth` at every sample time, each predicting the positions that
/// `predicted` reaches 1..7 s later.
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

}  // namespace

TEST_CASE("a 15 px disc decodes to its centre") {
  const BinaryImage dot = oracle::disc(200, 120, 100, 60, 15);
  const auto pose = decode_pose_from_masks(mask(dot), mask(BinaryImage(200, 120)));
  REQUIRE(pose.has_value());
  REQUIRE(pose->position.has_value());
  CHECK(distance(*pose->position, {100, 60}) <= 0.5);
  CHECK_FALSE(pose->heading.has_value());
}

TEST_CASE("position follows the mask frame") {
  const BinaryImage dot = oracle::disc(200, 120, 100, 60, 15);
  const auto pose = decode_pose_from_masks(mask(dot, 0.5, {-20, 7}), mask(BinaryImage(200, 120), 0.5, {-20, 7}));
  REQUIRE(pose.has_value());
  CHECK(distance(*pose->position, {-20 + 50, 7 + 30}) <= 0.25);
}

TEST_CASE("undersized dots give no response") {
  const BinaryImage small = oracle::disc(100, 100, 50, 50, 6);
  CHECK_FALSE(decode_pose_from_masks(mask(small), mask(BinaryImage(100, 100))).has_value());
  CHECK_FALSE(decode_pose_from_masks(mask(BinaryImage(100, 100)), mask(BinaryImage(100, 100))).has_value());
}

TEST_CASE("the area band is inclusive of 25 and 175 percent") {
  const double ideal = kPi * 15 * 15;
  auto accepted = [&](int area) {
    return decode_pose_from_masks(mask(blob(120, 120, 10, 10, area)), mask(BinaryImage(120, 120))).has_value();
  };
  CHECK_FALSE(accepted(static_cast<int>(std::floor(0.25 * ideal))));
  CHECK(accepted(static_cast<int>(std::ceil(0.25 * ideal))));
  CHECK(accepted(static_cast<int>(std::floor(1.75 * ideal))));
  CHECK_FALSE(accepted(static_cast<int>(std::ceil(1.75 * ideal))));
}

TEST_CASE("half disc heading matches a pixel-centroid oracle") {
  for (int k = 0; k < 36; ++k) {
    const double th = 2 * kPi * k / 36;
    const BinaryImage dot = oracle::disc(160, 160, 80, 80, 15);
    const BinaryImage half = oracle::half_disc(160, 160, 80, 80, 15, std::cos(th), std::sin(th));
    const auto pose = decode_pose_from_masks(mask(dot), mask(half));
    REQUIRE(pose.has_value());
    REQUIRE(pose->heading.has_value());
    const auto cd = *oracle::pixel_centroid(dot);
    const auto ch = *oracle::pixel_centroid(half);
    const double want = std::atan2(ch.second - cd.second, ch.first - cd.first);
    CHECK(std::fabs(normalize_angle(*pose->heading - want)) < 1e-12);
    CHECK(std::fabs(normalize_angle(*pose->heading - th)) * 180 / kPi <= 2.0);
  }
}

TEST_CASE("decoding is translation equivariant") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const int dx = static_cast<int>(rng() % 40);
    const int dy = static_cast<int>(rng() % 40);
    const double th = 0.3 * i;
    const auto a = decode_pose_from_masks(mask(oracle::disc(160, 160, 40, 40, 15), 0.5, {3, 4}),
                                          mask(oracle::half_disc(160, 160, 40, 40, 15, std::cos(th), std::sin(th)),
                                               0.5, {3, 4}));
    const auto b = decode_pose_from_masks(
        mask(oracle::disc(160, 160, 40 + dx, 40 + dy, 15), 0.5, {3, 4}),
        mask(oracle::half_disc(160, 160, 40 + dx, 40 + dy, 15, std::cos(th), std::sin(th)), 0.5, {3, 4}));
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(std::fabs(b->position->x - a->position->x - 0.5 * dx) < 1e-9);
    CHECK(std::fabs(b->position->y - a->position->y - 0.5 * dy) < 1e-9);
    CHECK(std::fabs(*b->heading - *a->heading) < 1e-9);
  }
}

TEST_CASE("largest component uses 8-connectivity") {
  BinaryImage img(10, 10);
  for (int k = 0; k < 4; ++k) img.set(k, k, true);  // diagonal chain of 4
  img.set(8, 0, true);
  img.set(8, 1, true);
  img.set(9, 0, true);
  const auto c = largest_component(img);
  REQUIRE(c.has_value());
  CHECK(c->area == 4);
  CHECK(c->col == 1.5);
  CHECK(c->row == 1.5);
  CHECK_FALSE(largest_component(BinaryImage(3, 3)).has_value());
}

TEST_CASE("masks must share their frame") {
  CHECK_THROWS_AS(decode_pose_from_masks(mask(BinaryImage(10, 10)), mask(BinaryImage(10, 11))), Error);
  CHECK_THROWS_AS(decode_pose_from_masks(mask(BinaryImage(10, 10)), mask(BinaryImage(10, 10), 2.0)), Error);
}

TEST_CASE("pose metrics of perfect and half-missing predictions") {
  std::vector<Pose> truth;
  std::vector<PosePrediction> perfect;
  std::vector<PosePrediction> half;
  for (int i = 0; i < 10; ++i) {
    truth.push_back({static_cast<double>(i), {1.0 * i, 2.0 * i}, 0.1 * i});
    perfect.push_back({truth.back().p, truth.back().heading});
    if (i % 2 == 0) {
      half.push_back({truth.back().p + PlanarPoint{6, 8}, truth.back().heading});
    } else {
      half.push_back({});
    }
  }
  const PoseMetricsReport p = pose_metrics(perfect, truth);
  CHECK(p.position.response_rate == 1.0);
  CHECK(*p.position.mean_err == 0.0);
  CHECK(*p.position.median_err == 0.0);
  CHECK(*p.orientation.mean_err == 0.0);

  const PoseMetricsReport h = pose_metrics(half, truth);
  CHECK(h.position.response_rate == 0.5);
  CHECK(*h.position.mean_err == doctest::Approx(10.0));
  CHECK(*h.position.median_err == doctest::Approx(10.0));
  CHECK(h.position.responded == 5);
  CHECK(h.position.total == 10);
}

TEST_CASE("pose metrics match loop and sort oracles") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-50, 50);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Pose> truth;
    std::vector<PosePrediction> pred;
    std::vector<double> pos;
    std::vector<double> ori;
    for (int i = 0; i < 101 + trial; ++i) {
      truth.push_back({0.0, {u(rng), u(rng)}, ang(rng)});
      PosePrediction p;
      if (rng() % 4 != 0) {
        p.position = PlanarPoint{u(rng), u(rng)};
        pos.push_back(distance(*p.position, truth.back().p));
      }
      if (rng() % 3 != 0) {
        p.heading = ang(rng);
        double d = std::fmod(std::fabs(*p.heading - truth.back().heading) * 180 / kPi, 360.0);
        ori.push_back(d > 180 ? 360 - d : d);
      }
      pred.push_back(p);
    }
    const PoseMetricsReport r = pose_metrics(pred, truth);
    CHECK(r.position.response_rate == static_cast<double>(pos.size()) / pred.size());
    CHECK(std::fabs(*r.position.mean_err - oracle::loop_mean(pos)) <= 1e-12 * oracle::loop_mean(pos));
    CHECK(std::fabs(*r.position.median_err - oracle::sort_median(pos)) <= 1e-12 * oracle::sort_median(pos));
    CHECK(std::fabs(*r.orientation.mean_err - oracle::loop_mean(ori)) <= 1e-9);
    CHECK(std::fabs(*r.orientation.median_err - oracle::sort_median(ori)) <= 1e-9);
  }
}

TEST_CASE("orientation error wraps") {
  const std::vector<Pose> truth{{0.0, {0, 0}, 179.0 * kPi / 180}};
  const std::vector<PosePrediction> pred{{PlanarPoint{0, 0}, -179.0 * kPi / 180}};
  CHECK(*pose_metrics(pred, truth).orientation.mean_err == doctest::Approx(2.0));
}

TEST_CASE("pose metric errors") {
  CHECK_THROWS_AS(pose_metrics({}, {}), Error);
  const std::vector<Pose> truth{{0.0, {0, 0}, 0.0}};
  const std::vector<PosePrediction> two(2);
  CHECK_THROWS_AS(pose_metrics(two, truth), Error);
}

TEST_CASE("control MAE") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> sp(0, 20);
  std::uniform_real_distribution<double> an(-180, 180);
  std::vector<Controls> a(50);
  std::vector<Controls> b(50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int n = 0; n < kHorizon; ++n) {
      a[i][n] = {n + 1, sp(rng), an(rng)};
      b[i][n] = {n + 1, sp(rng), an(rng)};
    }
  }
  const ControlMaeTable zero = control_mae(a, a);
  for (int n = 0; n < kHorizon; ++n) {
    CHECK(zero.speed[n] == 0.0);
    CHECK(zero.angle[n] == 0.0);
  }

  std::vector<Controls> biased = a;
  for (auto& c : biased)
    for (auto& cmd : c) cmd.speed += 1.0;
  const ControlMaeTable bias = control_mae(biased, a);
  for (int n = 0; n < kHorizon; ++n) CHECK(bias.speed[n] == doctest::Approx(1.0).epsilon(1e-12));

  const ControlMaeTable ab = control_mae(a, b);
  const ControlMaeTable ba = control_mae(b, a);
  for (int n = 0; n < kHorizon; ++n) {
    double s = 0.0;
    double g = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      s += std::fabs(a[i][n].speed - b[i][n].speed);
      double d = std::fabs(a[i][n].steering_angle - b[i][n].steering_angle);
      g += d > 180 ? 360 - d : d;
    }
    CHECK(std::fabs(ab.speed[n] - s / a.size()) <= 1e-12);
    CHECK(std::fabs(ab.angle[n] - g / a.size()) <= 1e-12);
    CHECK(ab.speed[n] == ba.speed[n]);
    CHECK(ab.angle[n] == ba.angle[n]);
  }
  CHECK(ab.samples == 50);
  CHECK_THROWS_AS(control_mae(std::vector<Controls>(2), std::vector<Controls>(3)), Error);
  CHECK_THROWS_AS(control_mae(std::vector<Controls>{}, std::vector<Controls>{}), Error);
}

TEST_CASE("truth replay scores 1 and the other branch scores 0") {
  const SyntheticWorld world = junction();
  const RoadMap map = fixture::truth_map(world);
  const Route straight = fixture::route_of(world.topology(), {N(1), N(2), N(3)});
  const Route left = fixture::route_of(world.topology(), {N(1), N(2), N(4)});

  const Replay good = replay(world, straight, straight);
  const DirectionReport r = direction_accuracy(good.samples, good.routes, map);
  const Replay bad = replay(world, straight, left);
  const DirectionReport w = direction_accuracy(bad.samples, bad.routes, map);
  int counted = 0;
  for (int n = 0; n < kHorizon; ++n) {
    counted += r.counted[n];
    if (r.counted[n] > 0) CHECK(*r.per_second_accuracy[n] == 1.0);
    if (w.counted[n] > 0) CHECK(*w.per_second_accuracy[n] == 0.0);
  }
  CHECK(counted > 0);
  CHECK(w.counted[kHorizon - 1] > 0);
}

TEST_CASE("no intersection, no decision") {
  const SyntheticWorld world = junction();
  const RoadMap map = fixture::truth_map(world);
  const Route straight = fixture::route_of(world.topology(), {N(1), N(2), N(3)});
  // Only poses on edge 1, far from node 2.
  Replay r = replay(world, straight, straight);
  Replay far;
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    if (r.samples[i].pose.p.x > 40 && r.samples[i].pose.p.x < 150) {
      far.samples.push_back(r.samples[i]);
      far.routes.push_back(r.routes[i]);
    }
  }
  REQUIRE(!far.samples.empty());
  const DirectionReport rep = direction_accuracy(far.samples, far.routes, map);
  for (int n = 0; n < kHorizon; ++n) {
    CHECK(rep.counted[n] == 0);
    CHECK_FALSE(rep.per_second_accuracy[n].has_value());
  }
}

TEST_CASE("a node with one way out is not a decision") {
  WorldSpec spec;
  spec.rate = 5.0;
  spec.nodes = {{N(1), {0, 0}, 15}, {N(2), {200, 0}, 15}, {N(3), {400, 50}, 15}};
  spec.edges = {{E(1), N(1), N(2)}, {E(2), N(2), N(3)}};
  const SyntheticWorld world(spec);
  const RoadMap map = fixture::truth_map(world);
  const Route route = fixture::route_of(world.topology(), {N(1), N(2), N(3)});
  const Replay r = replay(world, route, route);
  const DirectionReport rep = direction_accuracy(r.samples, r.routes, map);
  for (int n = 0; n < kHorizon; ++n) CHECK(rep.counted[n] == 0);
}

TEST_CASE("dropping samples leaves the remaining verdicts unchanged") {
  const SyntheticWorld world = junction();
  const RoadMap map = fixture::truth_map(world);
  const Route straight = fixture::route_of(world.topology(), {N(1), N(2), N(3)});
  const Route left = fixture::route_of(world.topology(), {N(1), N(2), N(4)});
  Replay mix = replay(world, straight, straight);
  const Replay bad = replay(world, straight, left);
  mix.samples.insert(mix.samples.end(), bad.samples.begin(), bad.samples.end());
  mix.routes.insert(mix.routes.end(), bad.routes.begin(), bad.routes.end());
  const DirectionReport all = direction_accuracy(mix.samples, mix.routes, map);

  DirectionReport sum;
  for (std::size_t i = 0; i < mix.samples.size(); ++i) {
    const DirectionReport one = direction_accuracy(std::span(&mix.samples[i], 1), std::span(&mix.routes[i], 1), map);
    for (int n = 0; n < kHorizon; ++n) {
      sum.counted[n] += one.counted[n];
      sum.correct[n] += one.correct[n];
    }
  }
  for (int n = 0; n < kHorizon; ++n) {
    CHECK(sum.counted[n] == all.counted[n]);
    CHECK(sum.correct[n] == all.correct[n]);
    if (all.counted[n] > 0) {
      CHECK(*all.per_second_accuracy[n] >= 0.0);
      CHECK(*all.per_second_accuracy[n] <= 1.0);
    }
  }
}

TEST_CASE("pairwise sum and median") {
  std::vector<double> v;
  for (int i = 1; i <= 1000; ++i) v.push_back(1.0 / i);
  CHECK(std::fabs(pairwise_sum(v) - oracle::loop_mean(v) * 1000) < 1e-12);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 2, 3}) == 2.5);
}
