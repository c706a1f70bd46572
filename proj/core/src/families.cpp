#include "mohardy/families.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "mohardy/halfspace.hpp"

namespace mohardy {

double uniform_draw(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

GridFunction wave_packet(const SpatialGrid& grid, double frequency, double sigma, double shift) {
  return grid.sample([&](const Point& x) {
    double r2 = 0.0;
    for (int k = 0; k < grid.dim(); ++k) r2 += (x[k] - (k == 0 ? shift : 0.0)) * (x[k] - (k == 0 ? shift : 0.0));
    return std::exp(-r2 / (2.0 * sigma * sigma)) *
           std::cos(2.0 * std::numbers::pi * frequency * (x[0] - shift));
  });
}

std::vector<NamedFunction> band_limited_family(const SpatialGrid& grid, int count,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<NamedFunction> out;
  for (int i = 0; i < count; ++i) {
    const double xi = uniform_draw(rng, 0.75, 1.5);
    const double sigma = uniform_draw(rng, 2.0, 3.0);
    const double shift = uniform_draw(rng, -4.0, 4.0);
    double amp = uniform_draw(rng, 0.5, 2.0);
    if (rng() & 1u) amp = -amp;
    GridFunction f = wave_packet(grid, xi, sigma, shift);
    for (double& v : f) v *= amp;
    out.push_back({"packet" + std::to_string(i), std::move(f)});
  }
  return out;
}

std::vector<NamedFunction> pipeline_family(const SpatialGrid& grid, int count) {
  std::vector<NamedFunction> out;
  for (int i = 0; i < count; ++i) {
    const double u = count > 1 ? static_cast<double>(i) / (count - 1) : 0.5;
    const double xi = 0.75 + 0.75 * u;
    const double sigma = 2.0 + static_cast<double>(i % 3) * 0.5;
    const GridFunction a = wave_packet(grid, xi, sigma, -3.0);
    const GridFunction b = wave_packet(grid, xi, sigma, 3.0);
    GridFunction f(a.size());
    for (std::size_t c = 0; c < f.size(); ++c) f[c] = a[c] - b[c];
    out.push_back({"pair" + std::to_string(i), std::move(f)});
  }
  return out;
}

std::vector<NamedFunction> bmo_family(const SpatialGrid& grid, int steps, std::uint64_t seed) {
  std::vector<NamedFunction> out;
  out.push_back({"sign", grid.sample([](const Point& x) {
                   return x[0] > 0.0 ? 1.0 : (x[0] < 0.0 ? -1.0 : 0.0);
                 })});
  out.push_back({"log", grid.sample([](const Point& x) {
                   const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
                   return std::max(std::log(r), -3.0);
                 })});
  std::mt19937_64 rng(seed);
  const double L = grid.half_width();
  int depth = 1;
  while (2.0 * L / std::exp2(depth) > 0.5) ++depth;
  for (int s = 0; s < steps; ++s) {
    GridFunction f(grid.size(), 0.0);
    for (int k = 0; k < depth; ++k) {
      const int pieces = 1 << k;
      const double len = 2.0 * L / pieces;
      std::vector<double> coeff(static_cast<std::size_t>(pieces));
      for (double& c : coeff) c = (rng() & 1u) ? 1.0 : -1.0;
      for (std::size_t c = 0; c < f.size(); ++c) {
        const double x = grid.center(c)[0] + L;
        const int j = std::min(pieces - 1, static_cast<int>(x / len));
        const double local = x - j * len;
        f[c] += coeff[static_cast<std::size_t>(j)] * (local < 0.5 * len ? 1.0 : -1.0);
      }
    }
    out.push_back({"martingale" + std::to_string(s), std::move(f)});
  }
  return out;
}

std::vector<TentFunction> random_tent_functions(const HalfSpaceGrid& grid, int count,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const SpatialGrid& base = grid.base();
  const double L = base.half_width();
  std::vector<TentFunction> out;
  for (int i = 0; i < count; ++i) {
    TentFunction f(grid);
    const int balls = 1 + static_cast<int>(rng() % 3);
    for (int b = 0; b < balls; ++b) {
      Ball ball;
      ball.radius = uniform_draw(rng, 2.0 * grid.t_min(), 0.25 * L);
      for (int k = 0; k < base.dim(); ++k)
        ball.center[k] = uniform_draw(rng, -L + ball.radius, L - ball.radius);
      const auto cells = base.cells_in_ball(ball);
      for (int m = 0; m < grid.levels(); ++m) {
        const double t = grid.t(m);
        if (t > ball.radius) break;
        for (std::size_t c : cells)
          if (in_tent(ball, base.center(c), t)) f.at(m, c) = uniform_draw(rng, -1.0, 1.0);
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace mohardy
