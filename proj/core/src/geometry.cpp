#include "densemimo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "densemimo/errors.hpp"

namespace densemimo {
namespace {

// Keeps the part of `poly` (local coordinates around the site) where q.d <= |d|^2 / 2,
// i.e. the points at least as close to the site as to the neighbour at offset d.
void clip_half_plane(Polygon& poly, Polygon& scratch, Point d) {
  const double bound = 0.5 * (d.x * d.x + d.y * d.y);
  scratch.clear();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % n];
    const double fa = a.x * d.x + a.y * d.y - bound;
    const double fb = b.x * d.x + b.y * d.y - bound;
    if (fa <= 0.0) scratch.push_back(a);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      const double t = fa / (fa - fb);
      scratch.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  poly.swap(scratch);
}

double max_squared_radius(const Polygon& poly) noexcept {
  double r2 = 0.0;
  for (const Point& p : poly) r2 = std::max(r2, p.x * p.x + p.y * p.y);
  return r2;
}

}  // namespace

double distance(Point a, Point b) noexcept { return std::sqrt(squared_distance(a, b)); }

SpatialGrid::SpatialGrid(std::span<const Point> points, double half_extent, double cell_size)
    : points_(points), half_extent_(half_extent), cell_(cell_size) {
  if (!(half_extent > 0.0) || !(cell_size > 0.0)) throw ConfigError("spatial grid needs positive extent and cell size");
  const double cells = std::ceil(2.0 * half_extent / cell_size);
  if (cells > 1e4) throw ConfigError("spatial grid too fine");
  side_ = std::max(1, static_cast<int>(cells));
  start_.assign(static_cast<std::size_t>(side_) * side_ + 1, 0);
  std::vector<std::size_t> slot(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t b = static_cast<std::size_t>(column(points[i].y)) * side_ + column(points[i].x);
    slot[i] = b;
    ++start_[b + 1];
  }
  for (std::size_t b = 1; b < start_.size(); ++b) start_[b] += start_[b - 1];
  items_.resize(points.size());
  std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < points.size(); ++i) items_[fill[slot[i]]++] = i;
}

int SpatialGrid::column(double coordinate) const noexcept {
  const int c = static_cast<int>(std::floor((coordinate + half_extent_) / cell_));
  return std::clamp(c, 0, side_ - 1);
}

std::span<const std::size_t> SpatialGrid::bucket(int cx, int cy) const noexcept {
  if (cx < 0 || cy < 0 || cx >= side_ || cy >= side_) return {};
  const std::size_t b = static_cast<std::size_t>(cy) * side_ + cx;
  return {items_.data() + start_[b], start_[b + 1] - start_[b]};
}

std::size_t SpatialGrid::nearest(Point p) const {
  if (points_.empty()) throw ConfigError("nearest query on an empty grid");
  const int cx = column(p.x);
  const int cy = column(p.y);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int ring = 0; ring <= side_; ++ring) {
    for (int iy = cy - ring; iy <= cy + ring; ++iy) {
      for (int ix = cx - ring; ix <= cx + ring; ++ix) {
        if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
        for (std::size_t idx : bucket(ix, iy)) {
          const double d2 = squared_distance(points_[idx], p);
          if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
            best_d2 = d2;
            best = idx;
          }
        }
      }
    }
    // Buckets outside ring `ring` are at least ring * cell away from p (p may sit outside
    // the grid square, in which case the clamped bucket gives a looser but valid bound).
    const double reach = ring * cell_;
    const bool inside = std::abs(p.x) <= half_extent_ && std::abs(p.y) <= half_extent_;
    if (best != std::numeric_limits<std::size_t>::max() && inside && reach * reach >= best_d2) break;
  }
  return best;
}

Polygon voronoi_cell(std::span<const Point> sites, const SpatialGrid& grid, std::size_t site,
                     double half_extent) {
  const Point c = sites[site];
  Polygon poly{{-half_extent - c.x, -half_extent - c.y},
               {half_extent - c.x, -half_extent - c.y},
               {half_extent - c.x, half_extent - c.y},
               {-half_extent - c.x, half_extent - c.y}};
  Polygon scratch;
  scratch.reserve(16);

  struct Candidate {
    double d2;
    Point offset;
  };
  std::vector<Candidate> batch;
  batch.reserve(32);

  const int cx = grid.column(c.x);
  const int cy = grid.column(c.y);
  const int side = grid.cells_per_side();
  int ring = 0;
  while (true) {
    // Rings 0 and 1 form the first batch; later rings are processed one at a time.
    const int last_ring = ring == 0 ? 1 : ring;
    batch.clear();
    for (int r = ring; r <= last_ring; ++r) {
      for (int iy = cy - r; iy <= cy + r; ++iy) {
        for (int ix = cx - r; ix <= cx + r; ++ix) {
          if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != r) continue;
          for (std::size_t idx : grid.bucket(ix, iy)) {
            if (idx == site) continue;
            const Point d{sites[idx].x - c.x, sites[idx].y - c.y};
            batch.push_back({d.x * d.x + d.y * d.y, d});
          }
        }
      }
    }
    std::sort(batch.begin(), batch.end(), [](const Candidate& a, const Candidate& b) { return a.d2 < b.d2; });
    double reach2 = 4.0 * max_squared_radius(poly);
    for (const Candidate& cand : batch) {
      if (cand.d2 > reach2) break;  // the bisector lies beyond every vertex
      if (cand.d2 == 0.0) continue;  // coincident sites have no bisector
      clip_half_plane(poly, scratch, cand.offset);
      reach2 = 4.0 * max_squared_radius(poly);
    }
    ring = last_ring + 1;
    // Unvisited sites are at least (ring - 1) * cell away.
    const double covered = (ring - 1) * grid.cell_size();
    if (covered * covered >= reach2 || ring > side) break;
  }

  for (Point& p : poly) {
    p.x += c.x;
    p.y += c.y;
  }
  return poly;
}

double polygon_area(const Polygon& polygon) noexcept {
  double twice = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

ConvexSampler::ConvexSampler(const Polygon& polygon) : polygon_(polygon) {
  if (polygon_.size() < 3) throw ConfigError("cannot sample from a degenerate polygon");
  double total = 0.0;
  const Point o = polygon_[0];
  for (std::size_t i = 1; i + 1 < polygon_.size(); ++i) {
    const Point a = polygon_[i];
    const Point b = polygon_[i + 1];
    total += 0.5 * std::abs((a.x - o.x) * (b.y - o.y) - (b.x - o.x) * (a.y - o.y));
    cumulative_.push_back(total);
  }
  if (!(total > 0.0)) throw ConfigError("cannot sample from a zero-area polygon");
}

Point ConvexSampler::sample(double pick, double u1, double u2) const noexcept {
  const double target = pick * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  std::size_t t = static_cast<std::size_t>(it - cumulative_.begin());
  if (t >= cumulative_.size()) t = cumulative_.size() - 1;
  const Point o = polygon_[0];
  const Point a = polygon_[t + 1];
  const Point b = polygon_[t + 2];
  const double s = std::sqrt(u1);
  const double wa = s * (1.0 - u2);
  const double wb = s * u2;
  const double wo = 1.0 - s;
  return {wo * o.x + wa * a.x + wb * b.x, wo * o.y + wa * a.y + wb * b.y};
}

}  // namespace densemimo
