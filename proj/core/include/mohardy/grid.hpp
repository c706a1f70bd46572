#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mohardy {

/// A point of R^n for n <= 2; unused trailing coordinates are zero.
using Point = std::array<double, 2>;

/// Samples of a function on the cells of a SpatialGrid, in cell order.
using GridFunction = std::vector<double>;

/// Indicator of a union of grid cells (1 = member).
using CellMask = std::vector<std::uint8_t>;

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

inline double distance(const Point& a, const Point& b) {
  return std::sqrt(squared_distance(a, b));
}

/// Open Euclidean ball B(center, radius).
struct Ball {
  Point center{};
  double radius = 0.0;

  Ball dilated(double factor) const { return {center, radius * factor}; }
  friend bool operator==(const Ball&, const Ball&) = default;
};

/// Volume of the unit ball of R^n (2 for n = 1, pi for n = 2).
double unit_ball_volume(int dim);

/// Uniform cell-centred grid on [-L, L]^n, n in {1, 2}. Cells are numbered
/// with the first coordinate running fastest.
class SpatialGrid {
 public:
  SpatialGrid() = default;
  SpatialGrid(int dim, double half_width, int cells_per_axis);

  /// Builds the grid from a spacing; 2L/h must be an integer.
  static SpatialGrid from_spacing(int dim, double half_width, double spacing);

  int dim() const { return dim_; }
  double half_width() const { return half_width_; }
  int cells_per_axis() const { return cells_; }
  double spacing() const { return spacing_; }
  double cell_volume() const { return dim_ == 1 ? spacing_ : spacing_ * spacing_; }
  std::size_t size() const {
    return dim_ == 1 ? static_cast<std::size_t>(cells_)
                     : static_cast<std::size_t>(cells_) * cells_;
  }

  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * cells_ + i;
  }
  std::array<int, 2> coords(std::size_t cell) const {
    return {static_cast<int>(cell % cells_), dim_ == 1 ? 0 : static_cast<int>(cell / cells_)};
  }
  double axis_center(int i) const { return -half_width_ + (i + 0.5) * spacing_; }
  Point center(std::size_t cell) const;

  /// Cells whose centres lie in the open ball.
  std::vector<std::size_t> cells_in_ball(const Ball& ball) const;
  /// Cell containing the point (clamped to the domain).
  std::size_t locate(const Point& x) const;
  /// Grid measure of a cell list (count times cell volume).
  double measure(std::size_t cell_count) const { return cell_volume() * cell_count; }
  double domain_measure() const { return measure(size()); }

  SpatialGrid refined(int factor = 2) const;

  template <class F>
  GridFunction sample(F&& f) const {
    GridFunction out(size());
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = f(center(c));
    return out;
  }

  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;

 private:
  int dim_ = 1;
  double half_width_ = 1.0;
  int cells_ = 2;
  double spacing_ = 1.0;
};

/// Index range [lo, hi) of cells of a 1-D grid whose centres lie in the
/// open interval (a, b). Ties at the endpoints are excluded.
std::array<int, 2> open_interval_cells(const SpatialGrid& grid, double a, double b);

/// Discretisation of R^{n+1}_+: a spatial grid times geometric levels
/// t_m = t_min * rho^m. The measure dt/t carries weight ln(rho) per level.
class HalfSpaceGrid {
 public:
  HalfSpaceGrid() = default;
  HalfSpaceGrid(SpatialGrid base, double t_min, double ratio, int levels);

  const SpatialGrid& base() const { return base_; }
  int levels() const { return levels_; }
  double t_min() const { return t_min_; }
  double ratio() const { return ratio_; }
  double log_ratio() const { return log_ratio_; }
  double t(int level) const { return t_[static_cast<std::size_t>(level)]; }
  double t_max() const { return t_.back(); }
  std::span<const double> t_values() const { return t_; }
  std::size_t node_count() const { return base_.size() * static_cast<std::size_t>(levels_); }

  /// Same levels on a refined spatial grid.
  HalfSpaceGrid with_base(SpatialGrid base) const;

  friend bool operator==(const HalfSpaceGrid& a, const HalfSpaceGrid& b) {
    return a.base_ == b.base_ && a.levels_ == b.levels_ && a.t_min_ == b.t_min_ &&
           a.ratio_ == b.ratio_;
  }

 private:
  SpatialGrid base_;
  double t_min_ = 1.0;
  double ratio_ = 2.0;
  double log_ratio_ = 0.0;
  int levels_ = 1;
  std::vector<double> t_;
};

/// Geometric grid x0 * ratio^k, k = 0..count-1.
std::vector<double> geometric_grid(double first, double ratio, int count);

}  // namespace mohardy
