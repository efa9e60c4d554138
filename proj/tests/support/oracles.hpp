// Independent reference implementations used only by tests. Each one solves the
// same problem as a library routine by the most direct method available, with
// no shared code beyond the plain data types.
#ifndef TRAJMAP_TESTS_ORACLES_HPP
#define TRAJMAP_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "trajmap/geo.hpp"
#include "trajmap/image.hpp"
#include "trajmap/roadmap.hpp"
#include "trajmap/routing.hpp"
#include "trajmap/topology.hpp"
#include "trajmap/trajectory.hpp"

namespace oracle {

using trajmap::PlanarPoint;

/// Least squares through explicit normal equations TᵀT a = Tᵀv solved by
/// Gaussian elimination with partial pivoting in long double. Highest power first.
inline std::vector<double> normal_equations_fit(const std::vector<double>& t, const std::vector<double>& v,
                                                int degree) {
  const int n = degree + 1;
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n + 1, 0.0L));
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<long double> row(n);
    for (int j = 0; j < n; ++j) row[j] = std::pow(static_cast<long double>(t[i]), degree - j);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) a[r][c] += row[r] * row[c];
      a[r][n] += row[r] * v[i];
    }
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    for (int r = col + 1; r < n; ++r) {
      const long double f = a[r][col] / a[col][col];
      for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    long double s = a[r][n];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = static_cast<double>(s / a[r][r]);
  }
  return x;
}

/// Σ c_j s^(d−j) term by term with std::pow.
inline double power_sum(const std::vector<double>& c, double s) {
  const int d = static_cast<int>(c.size()) - 1;
  double acc = 0.0;
  for (int j = 0; j <= d; ++j) acc += c[j] * std::pow(s, d - j);
  return acc;
}

struct Nearest {
  trajmap::SegmentId segment;
  PlanarPoint q;
  double dist = std::numeric_limits<double>::infinity();
};

/// Closest point over every sub-segment of every polyline; segments visited in
/// canonical order and a later candidate only wins when strictly closer by more
/// than `tie`.
inline Nearest brute_force_projection(const trajmap::SegmentMap& segments, const PlanarPoint& p,
                                      double tie = 1e-9) {
  Nearest best;
  for (const auto& [id, seg] : segments) {
    const auto& pl = seg.polyline;
    for (std::size_t k = 0; k + 1 < pl.size(); ++k) {
      const double ax = pl[k].x, ay = pl[k].y;
      const double ux = pl[k + 1].x - ax, uy = pl[k + 1].y - ay;
      const double len2 = ux * ux + uy * uy;
      double t = len2 > 0.0 ? ((p.x - ax) * ux + (p.y - ay) * uy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const PlanarPoint q{ax + t * ux, ay + t * uy};
      const double d = std::hypot(p.x - q.x, p.y - q.y);
      if (d < best.dist - tie) best = {id, q, d};
    }
  }
  return best;
}

/// Cheapest simple path by depth-first enumeration up to `max_edges` edges.
inline std::optional<double> enumerate_cheapest(const trajmap::GraphTopology& g, const trajmap::EdgeLengths& len,
                                                trajmap::NodeId src, trajmap::NodeId dst, int max_edges) {
  std::optional<double> best;
  std::vector<trajmap::NodeId> stack{src};
  auto dfs = [&](auto&& self, trajmap::NodeId at, double cost, int depth) -> void {
    if (at == dst) {
      if (!best || cost < *best) best = cost;
      return;
    }
    if (depth == max_edges) return;
    for (const auto& e : g.edges()) {
      if (e.from != at) continue;
      if (std::find(stack.begin(), stack.end(), e.to) != stack.end()) continue;
      stack.push_back(e.to);
      self(self, e.to, cost + len.at(e.id), depth + 1);
      stack.pop_back();
    }
  };
  dfs(dfs, src, 0.0, 0);
  return best;
}

/// Slides a width-2 window over the concatenated edge sequence of all legs.
inline std::map<std::pair<trajmap::EdgeId, trajmap::EdgeId>, int> sliding_window_counts(
    const std::vector<trajmap::Route>& legs) {
  std::vector<trajmap::EdgeId> drive;
  for (const auto& leg : legs) drive.insert(drive.end(), leg.edges.begin(), leg.edges.end());
  std::map<std::pair<trajmap::EdgeId, trajmap::EdgeId>, int> counts;
  for (std::size_t i = 1; i < drive.size(); ++i) ++counts[{drive[i - 1], drive[i]}];
  return counts;
}

inline double loop_mean(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

inline double sort_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Mean of the (col, row) coordinates of every set pixel.
inline std::optional<std::pair<double, double>> pixel_centroid(const trajmap::BinaryImage& img) {
  double sc = 0.0, sr = 0.0;
  std::size_t n = 0;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (!img.at(c, r)) continue;
      sc += c;
      sr += r;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return std::make_pair(sc / static_cast<double>(n), sr / static_cast<double>(n));
}

inline double naive_loss(const trajmap::Trajectory& a, const trajmap::Trajectory& b) {
  double s = 0.0;
  for (int n = 0; n < trajmap::kHorizon; ++n) {
    const double dx = a.points[n].x - b.points[n].x;
    const double dy = a.points[n].y - b.points[n].y;
    s += std::sqrt(dx * dx + dy * dy);
  }
  return s / trajmap::kHorizon;
}

/// Filled disc of `radius` pixels centred on (cx, cy): pixel centres within the radius.
inline trajmap::BinaryImage disc(int w, int h, double cx, double cy, double radius) {
  trajmap::BinaryImage img(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if ((c - cx) * (c - cx) + (r - cy) * (r - cy) <= radius * radius) img.set(c, r, true);
    }
  }
  return img;
}

/// Half of a disc on the side that `dir_col, dir_row` points to.
inline trajmap::BinaryImage half_disc(int w, int h, double cx, double cy, double radius, double dir_col,
                                      double dir_row) {
  trajmap::BinaryImage img(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double dc = c - cx, dr = r - cy;
      if (dc * dc + dr * dr <= radius * radius && dc * dir_col + dr * dir_row > 1e-9) img.set(c, r, true);
    }
  }
  return img;
}

}  // namespace oracle

#endif  // TRAJMAP_TESTS_ORACLES_HPP
