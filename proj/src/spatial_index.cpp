#include "trajmap/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trajmap {

SegmentProjection project_onto_segment(const PlanarPoint& p, const PlanarPoint& a, const PlanarPoint& b) {
  const PlanarPoint ab = b - a;
  const double len2 = dot(ab, ab);
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  const PlanarPoint q = a + t * ab;
  return {t, q, distance(p, q)};
}

PolylineIndex::PolylineIndex(std::span<const std::vector<PlanarPoint>> polylines, double cell_size)
    : cell_size_(cell_size) {
  for (std::size_t i = 0; i < polylines.size(); ++i) {
    const auto& pl = polylines[i];
    if (pl.size() == 1) items_.push_back({i, 0, pl[0], pl[0]});
    for (std::size_t k = 0; k + 1 < pl.size(); ++k) items_.push_back({i, k, pl[k], pl[k + 1]});
  }
  if (items_.empty()) return;
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = max_x;
  min_x_ = std::numeric_limits<double>::infinity();
  min_y_ = min_x_;
  for (const auto& it : items_) {
    min_x_ = std::min({min_x_, it.a.x, it.b.x});
    min_y_ = std::min({min_y_, it.a.y, it.b.y});
    max_x = std::max({max_x, it.a.x, it.b.x});
    max_y = std::max({max_y, it.a.y, it.b.y});
  }
  nx_ = static_cast<long>(std::floor((max_x - min_x_) / cell_size_)) + 1;
  ny_ = static_cast<long>(std::floor((max_y - min_y_) / cell_size_)) + 1;
  cells_.assign(static_cast<std::size_t>(nx_ * ny_), {});
  for (std::size_t idx = 0; idx < items_.size(); ++idx) {
    const auto& it = items_[idx];
    const long x0 = cell_x(std::min(it.a.x, it.b.x));
    const long x1 = cell_x(std::max(it.a.x, it.b.x));
    const long y0 = cell_y(std::min(it.a.y, it.b.y));
    const long y1 = cell_y(std::max(it.a.y, it.b.y));
    for (long cy = y0; cy <= y1; ++cy)
      for (long cx = x0; cx <= x1; ++cx) cells_[static_cast<std::size_t>(cy * nx_ + cx)].push_back(idx);
  }
}

long PolylineIndex::cell_x(double x) const {
  return static_cast<long>(std::floor((x - min_x_) / cell_size_));
}

long PolylineIndex::cell_y(double y) const {
  return static_cast<long>(std::floor((y - min_y_) / cell_size_));
}

const std::vector<std::size_t>* PolylineIndex::cell(long cx, long cy) const {
  if (cx < 0 || cy < 0 || cx >= nx_ || cy >= ny_) return nullptr;
  return &cells_[static_cast<std::size_t>(cy * nx_ + cx)];
}

std::optional<PolylineIndex::Hit> PolylineIndex::nearest(const PlanarPoint& p, const Filter& filter) const {
  if (items_.empty()) return std::nullopt;
  const long pcx = cell_x(p.x);
  const long pcy = cell_y(p.y);
  const long max_ring = std::max({std::abs(pcx), std::abs(pcx - (nx_ - 1)), std::abs(pcy), std::abs(pcy - (ny_ - 1))});

  std::vector<char> seen(items_.size(), 0);
  std::vector<Hit> close;
  double best = std::numeric_limits<double>::infinity();

  auto visit = [&](long cx, long cy) {
    const auto* c = cell(cx, cy);
    if (!c) return;
    for (std::size_t idx : *c) {
      if (seen[idx]) continue;
      seen[idx] = 1;
      const Item& it = items_[idx];
      if (filter && !filter(it.polyline)) continue;
      const auto proj = project_onto_segment(p, it.a, it.b);
      if (proj.dist <= best + kProjectionTieTolerance) {
        close.push_back({it.polyline, it.sub, proj});
        best = std::min(best, proj.dist);
      }
    }
  };

  // Rings closer than this do not touch the grid at all.
  const long first_ring = std::max({0L, -pcx, pcx - (nx_ - 1), -pcy, pcy - (ny_ - 1)});
  for (long r = first_ring; r <= max_ring; ++r) {
    if (static_cast<double>(r - 1) * cell_size_ > best + kProjectionTieTolerance) break;
    if (r == 0) {
      visit(pcx, pcy);
      continue;
    }
    const long x_lo = std::max(0L, pcx - r);
    const long x_hi = std::min(nx_ - 1, pcx + r);
    for (long cx = x_lo; cx <= x_hi; ++cx) {
      visit(cx, pcy - r);
      visit(cx, pcy + r);
    }
    const long y_lo = std::max(0L, pcy - r + 1);
    const long y_hi = std::min(ny_ - 1, pcy + r - 1);
    for (long cy = y_lo; cy <= y_hi; ++cy) {
      visit(pcx - r, cy);
      visit(pcx + r, cy);
    }
  }
  if (close.empty()) return std::nullopt;

  const Hit* winner = nullptr;
  for (const auto& h : close) {
    if (h.proj.dist > best + kProjectionTieTolerance) continue;
    if (!winner || std::pair(h.polyline, h.sub) < std::pair(winner->polyline, winner->sub)) winner = &h;
  }
  return *winner;
}

bool PolylineIndex::any_within(const PlanarPoint& p, double radius, const Filter& filter) const {
  if (items_.empty()) return false;
  const long x0 = std::max(0L, cell_x(p.x - radius));
  const long x1 = std::min(nx_ - 1, cell_x(p.x + radius));
  const long y0 = std::max(0L, cell_y(p.y - radius));
  const long y1 = std::min(ny_ - 1, cell_y(p.y + radius));
  for (long cy = y0; cy <= y1; ++cy) {
    for (long cx = x0; cx <= x1; ++cx) {
      for (std::size_t idx : *cell(cx, cy)) {
        const Item& it = items_[idx];
        if (filter && !filter(it.polyline)) continue;
        if (project_onto_segment(p, it.a, it.b).dist <= radius) return true;
      }
    }
  }
  return false;
}

}  // namespace trajmap
