#pragma once

#include <cstddef>
#include <span>

namespace mohardy {

/// Pairwise (cascade) summation. The split points depend only on the length,
/// so the result is reproducible bit for bit.
inline double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 64;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace mohardy
