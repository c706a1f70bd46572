#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mohardy/bmo.hpp"
#include "mohardy/functionals.hpp"

namespace mohardy {

/// Uniform double in [lo, hi) from the raw 64-bit stream, identical on every
/// standard library (std::uniform_real_distribution is not).
double uniform_draw(std::mt19937_64& rng, double lo, double hi);

/// exp(-(x - shift)^2 / (2 sigma^2)) cos(2 pi frequency (x - shift)), a
/// wave packet whose spectrum sits around `frequency` cycles per unit.
GridFunction wave_packet(const SpatialGrid& grid, double frequency, double sigma, double shift = 0.0);

/// Packet parameters drawn uniformly from frequency in [0.75, 1.5], sigma in
/// [2, 3], shift in [-4, 4], amplitude in [0.5, 2] with a random sign.
std::vector<NamedFunction> band_limited_family(const SpatialGrid& grid, int count,
                                               std::uint64_t seed);

/// Antisymmetric pairs packet(x + 3) - packet(x - 3) on a deterministic
/// sweep of frequency and width.
std::vector<NamedFunction> pipeline_family(const SpatialGrid& grid, int count);

/// sign(x), max(ln|x|, -3) and `steps` random dyadic martingales: sums of
/// Haar functions with random +-1 coefficients on dyadic intervals of the
/// domain, down to intervals of length 1/2.
std::vector<NamedFunction> bmo_family(const SpatialGrid& grid, int steps, std::uint64_t seed);

/// Tent functions supported in the tents over 1 to 3 random balls, with
/// independent uniform values in [-1, 1] at the covered nodes.
std::vector<TentFunction> random_tent_functions(const HalfSpaceGrid& grid, int count,
                                                std::uint64_t seed);

}  // namespace mohardy
