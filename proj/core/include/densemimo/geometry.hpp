#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace densemimo {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

[[nodiscard]] inline double squared_distance(Point a, Point b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

[[nodiscard]] double distance(Point a, Point b) noexcept;

/// Uniform bucket grid over the square [-half_extent, half_extent]^2.
class SpatialGrid {
 public:
  SpatialGrid(std::span<const Point> points, double half_extent, double cell_size);

  /// Index of the point nearest to p (ties go to the lower index).
  [[nodiscard]] std::size_t nearest(Point p) const;

  [[nodiscard]] int cells_per_side() const noexcept { return side_; }
  [[nodiscard]] double cell_size() const noexcept { return cell_; }
  [[nodiscard]] int column(double coordinate) const noexcept;

  /// Indices of points in bucket (cx, cy); empty when out of range.
  [[nodiscard]] std::span<const std::size_t> bucket(int cx, int cy) const noexcept;

 private:
  std::span<const Point> points_;
  double half_extent_;
  double cell_;
  int side_;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> items_;
};

/// Convex polygon, counter-clockwise vertices.
using Polygon = std::vector<Point>;

/// Voronoi cell of sites[site] among all sites, intersected with the square
/// [-half_extent, half_extent]^2. Exact up to floating point; neighbours are visited in
/// grid rings until no unvisited site can cut the polygon any more.
[[nodiscard]] Polygon voronoi_cell(std::span<const Point> sites, const SpatialGrid& grid, std::size_t site,
                                   double half_extent);

[[nodiscard]] double polygon_area(const Polygon& polygon) noexcept;

/// Draws points uniformly from a convex polygon by fan triangulation.
class ConvexSampler {
 public:
  explicit ConvexSampler(const Polygon& polygon);

  [[nodiscard]] double area() const noexcept { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

  template <class Rng>
  Point operator()(Rng& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return sample(unit(rng), unit(rng), unit(rng));
  }

  /// Deterministic map from three uniforms in [0, 1) to a point of the polygon.
  [[nodiscard]] Point sample(double pick, double u1, double u2) const noexcept;

 private:
  Polygon polygon_;
  std::vector<double> cumulative_;
};

}  // namespace densemimo
