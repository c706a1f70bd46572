#include "mohardy/ball_index.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "mohardy/error.hpp"
#include "mohardy/parallel.hpp"

namespace mohardy {

std::vector<Ball> ball_family(const SpatialGrid& grid, BallFamilyKind kind) {
  std::vector<Ball> out;
  const double h = grid.spacing();
  if (kind == BallFamilyKind::AllIntervals) {
    if (grid.dim() != 1) throw DomainError("ball_family: AllIntervals needs n = 1");
    const int n = grid.cells_per_axis();
    out.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b <= n; ++b) {
        const double left = -grid.half_width() + a * h;
        const double right = -grid.half_width() + b * h;
        out.push_back({{0.5 * (left + right), 0.0}, 0.5 * (right - left)});
      }
    }
    return out;
  }
  // Radii h * 2^k up to the domain diameter.
  std::vector<double> radii;
  const double diameter = 2.0 * grid.half_width() * (grid.dim() == 1 ? 1.0 : std::sqrt(2.0));
  for (double r = h; r <= diameter * (1 + 1e-12); r *= 2.0) radii.push_back(r);
  out.reserve(grid.size() * radii.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    for (double r : radii) out.push_back({grid.center(c), r});
  }
  return out;
}

BallIndex::BallIndex(const SpatialGrid& grid, std::vector<Ball> balls)
    : grid_(grid), balls_(std::move(balls)) {
  if (grid_.dim() == 1) {
    ranges_.resize(balls_.size());
    parallel_for(balls_.size(), [&](std::size_t b) {
      const auto cells = grid_.cells_in_ball(balls_[b]);
      ranges_[b] = cells.empty() ? std::array<int, 2>{0, 0}
                                 : std::array<int, 2>{static_cast<int>(cells.front()),
                                                      static_cast<int>(cells.back()) + 1};
    });
  } else {
    lists_.resize(balls_.size());
    parallel_for(balls_.size(), [&](std::size_t b) { lists_[b] = grid_.cells_in_ball(balls_[b]); });
  }
}

std::size_t BallIndex::cell_count(std::size_t b) const {
  if (grid_.dim() == 1) return static_cast<std::size_t>(ranges_[b][1] - ranges_[b][0]);
  return lists_[b].size();
}

std::vector<std::size_t> BallIndex::cells(std::size_t b) const {
  if (grid_.dim() != 1) return lists_[b];
  std::vector<std::size_t> out;
  for (int i = ranges_[b][0]; i < ranges_[b][1]; ++i) out.push_back(static_cast<std::size_t>(i));
  return out;
}

std::vector<double> BallIndex::sums(std::span<const double> values) const {
  std::vector<double> out(balls_.size(), 0.0);
  if (grid_.dim() == 1) {
    std::vector<long double> prefix(values.size() + 1, 0.0L);
    for (std::size_t i = 0; i < values.size(); ++i) prefix[i + 1] = prefix[i] + values[i];
    for (std::size_t b = 0; b < balls_.size(); ++b) {
      const auto [lo, hi] = ranges_[b];
      // Short balls are summed directly to avoid cancellation in the prefix.
      if (hi - lo <= 32) {
        double s = 0.0;
        for (int i = lo; i < hi; ++i) s += values[static_cast<std::size_t>(i)];
        out[b] = s;
      } else {
        out[b] = static_cast<double>(prefix[static_cast<std::size_t>(hi)] -
                                     prefix[static_cast<std::size_t>(lo)]);
      }
    }
    return out;
  }
  parallel_for(balls_.size(), [&](std::size_t b) {
    double s = 0.0;
    for (std::size_t c : lists_[b]) s += values[c];
    out[b] = s;
  });
  return out;
}

std::vector<double> BallIndex::maxima(std::span<const double> values) const {
  constexpr double kLow = -std::numeric_limits<double>::infinity();
  std::vector<double> out(balls_.size(), kLow);
  if (grid_.dim() == 1) {
    const std::size_t n = values.size();
    const int levels = std::bit_width(n);
    std::vector<std::vector<double>> table(static_cast<std::size_t>(levels));
    table[0].assign(values.begin(), values.end());
    for (int k = 1; k < levels; ++k) {
      const std::size_t span = std::size_t{1} << k;
      auto& row = table[static_cast<std::size_t>(k)];
      const auto& prev = table[static_cast<std::size_t>(k - 1)];
      row.resize(n - span + 1);
      for (std::size_t i = 0; i + span <= n; ++i) row[i] = std::max(prev[i], prev[i + span / 2]);
    }
    for (std::size_t b = 0; b < balls_.size(); ++b) {
      const auto [lo, hi] = ranges_[b];
      if (hi <= lo) continue;
      const int k = std::bit_width(static_cast<std::size_t>(hi - lo)) - 1;
      const auto& row = table[static_cast<std::size_t>(k)];
      out[b] = std::max(row[static_cast<std::size_t>(lo)],
                        row[static_cast<std::size_t>(hi - (1 << k))]);
    }
    return out;
  }
  parallel_for(balls_.size(), [&](std::size_t b) {
    double m = kLow;
    for (std::size_t c : lists_[b]) m = std::max(m, values[c]);
    out[b] = m;
  });
  return out;
}

}  // namespace mohardy
