#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mohardy/grid.hpp"

namespace mohardy {

/// How the sup over "all balls" is approximated on a grid.
enum class BallFamilyKind {
  /// Balls centred at every cell centre with radii h * 2^k, clipped to the domain.
  Dyadic,
  /// Every run of consecutive cells (n = 1 only); exhaustive, O(N^2) balls.
  AllIntervals,
};

std::vector<Ball> ball_family(const SpatialGrid& grid, BallFamilyKind kind);

/// Cell membership of a fixed list of balls, with fast reductions of per-cell
/// arrays (prefix sums and a sparse max table in 1-D).
class BallIndex {
 public:
  BallIndex(const SpatialGrid& grid, std::vector<Ball> balls);

  const SpatialGrid& grid() const { return grid_; }
  std::size_t size() const { return balls_.size(); }
  const Ball& ball(std::size_t b) const { return balls_[b]; }
  std::size_t cell_count(std::size_t b) const;
  double measure(std::size_t b) const { return grid_.measure(cell_count(b)); }
  std::vector<std::size_t> cells(std::size_t b) const;

  /// sum_{cells in B} values[c], for every ball.
  std::vector<double> sums(std::span<const double> values) const;
  /// max_{cells in B} values[c], for every ball (-inf for empty balls).
  std::vector<double> maxima(std::span<const double> values) const;

 private:
  SpatialGrid grid_;
  std::vector<Ball> balls_;
  std::vector<std::array<int, 2>> ranges_;        // 1-D
  std::vector<std::vector<std::size_t>> lists_;   // 2-D
};

}  // namespace mohardy
