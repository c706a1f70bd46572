#include "mohardy/grid.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "mohardy/error.hpp"

namespace mohardy {

double unit_ball_volume(int dim) {
  if (dim == 1) return 2.0;
  if (dim == 2) return std::numbers::pi;
  throw DomainError("unit_ball_volume: only n = 1, 2 supported");
}

SpatialGrid::SpatialGrid(int dim, double half_width, int cells_per_axis)
    : dim_(dim), half_width_(half_width), cells_(cells_per_axis) {
  if (dim != 1 && dim != 2) throw DomainError("SpatialGrid: dimension must be 1 or 2");
  if (!(half_width > 0.0)) throw DomainError("SpatialGrid: half width must be positive");
  if (cells_per_axis < 2) throw DomainError("SpatialGrid: need at least two cells per axis");
  spacing_ = 2.0 * half_width / cells_per_axis;
}

SpatialGrid SpatialGrid::from_spacing(int dim, double half_width, double spacing) {
  if (!(spacing > 0.0)) throw DomainError("SpatialGrid: spacing must be positive");
  const double cells = 2.0 * half_width / spacing;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells)) {
    throw DomainError("SpatialGrid: 2L/h = " + std::to_string(cells) + " is not an integer");
  }
  return SpatialGrid(dim, half_width, static_cast<int>(rounded));
}

Point SpatialGrid::center(std::size_t cell) const {
  const auto c = coords(cell);
  return {axis_center(c[0]), dim_ == 1 ? 0.0 : axis_center(c[1])};
}

namespace {

// First index i in [0, n] with axis_center(i) > a, using the exact predicate.
int first_above(const SpatialGrid& g, double a) {
  const int n = g.cells_per_axis();
  double guess = (a + g.half_width()) / g.spacing() - 0.5;
  int i = static_cast<int>(std::clamp(std::floor(guess), -1.0, static_cast<double>(n)));
  i = std::clamp(i, 0, n);
  while (i > 0 && g.axis_center(i - 1) > a) --i;
  while (i < n && !(g.axis_center(i) > a)) ++i;
  return i;
}

}  // namespace

std::array<int, 2> open_interval_cells(const SpatialGrid& grid, double a, double b) {
  const int n = grid.cells_per_axis();
  const int lo = first_above(grid, a);
  int hi = first_above(grid, b);
  // hi is the first centre > b; step back over a centre equal to b.
  while (hi > lo && !(grid.axis_center(hi - 1) < b)) --hi;
  return {std::min(lo, n), std::max(hi, std::min(lo, n))};
}

std::vector<std::size_t> SpatialGrid::cells_in_ball(const Ball& ball) const {
  std::vector<std::size_t> out;
  if (!(ball.radius > 0.0)) return out;
  const double r = ball.radius;
  // Candidate range along each axis, widened by one cell, then the exact test.
  auto axis_range = [&](double c) {
    int lo = static_cast<int>(std::floor((c - r + half_width_) / spacing_ - 0.5)) - 1;
    int hi = static_cast<int>(std::ceil((c + r + half_width_) / spacing_ - 0.5)) + 2;
    return std::array<int, 2>{std::clamp(lo, 0, cells_), std::clamp(hi, 0, cells_)};
  };
  if (dim_ == 1) {
    const auto [lo, hi] = axis_range(ball.center[0]);
    for (int i = lo; i < hi; ++i) {
      if (std::abs(axis_center(i) - ball.center[0]) < r) out.push_back(static_cast<std::size_t>(i));
    }
    return out;
  }
  const auto [xlo, xhi] = axis_range(ball.center[0]);
  const auto [ylo, yhi] = axis_range(ball.center[1]);
  const double r2 = r * r;
  for (int j = ylo; j < yhi; ++j) {
    const double dy = axis_center(j) - ball.center[1];
    for (int i = xlo; i < xhi; ++i) {
      const double dx = axis_center(i) - ball.center[0];
      if (dx * dx + dy * dy < r2) out.push_back(index(i, j));
    }
  }
  return out;
}

std::size_t SpatialGrid::locate(const Point& x) const {
  auto axis = [&](double v) {
    const int i = static_cast<int>(std::floor((v + half_width_) / spacing_));
    return std::clamp(i, 0, cells_ - 1);
  };
  return dim_ == 1 ? static_cast<std::size_t>(axis(x[0])) : index(axis(x[0]), axis(x[1]));
}

SpatialGrid SpatialGrid::refined(int factor) const {
  return SpatialGrid(dim_, half_width_, cells_ * factor);
}

HalfSpaceGrid::HalfSpaceGrid(SpatialGrid base, double t_min, double ratio, int levels)
    : base_(std::move(base)), t_min_(t_min), ratio_(ratio), levels_(levels) {
  if (!(ratio > 1.0)) throw DomainError("HalfSpaceGrid: level ratio must exceed 1");
  if (!(t_min > 0.0)) throw DomainError("HalfSpaceGrid: t_min must be positive");
  if (levels < 1) throw DomainError("HalfSpaceGrid: need at least one level");
  log_ratio_ = std::log(ratio);
  t_ = geometric_grid(t_min, ratio, levels);
  if (t_.back() > base_.half_width() * (1.0 + 1e-12)) {
    throw DomainError("HalfSpaceGrid: t_max exceeds the domain half width");
  }
}

HalfSpaceGrid HalfSpaceGrid::with_base(SpatialGrid base) const {
  return HalfSpaceGrid(std::move(base), t_min_, ratio_, levels_);
}

std::vector<double> geometric_grid(double first, double ratio, int count) {
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  // Powers are taken directly so every node is reproducible on its own.
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = first * std::pow(ratio, k);
  return out;
}

}  // namespace mohardy
