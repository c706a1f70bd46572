#pragma once

#include <cstddef>
#include <vector>

#include "mohardy/grid.hpp"

namespace mohardy {

/// (y, t) lies in the cone of aperture nu over x: |x - y| < nu t.
inline bool cone_membership(const Point& x, const Point& y, double t, double nu = 1.0) {
  return squared_distance(x, y) < (nu * t) * (nu * t);
}

/// (y, t) lies in the tent over the open ball B(c, r): |y - c| <= r - t.
inline bool in_tent(const Ball& ball, const Point& y, double t) {
  const double room = ball.radius - t;
  return room >= 0.0 && squared_distance(y, ball.center) <= room * room;
}

/// Distance from every cell centre to the complement of a cell set, where
/// the set is the union of its closed cells and everything outside the
/// domain belongs to the complement. Zero off the set.
std::vector<double> distance_to_complement(const SpatialGrid& grid, const CellMask& set);

/// (y, t) lies in the aperture-nu tent of the set iff dist(y, complement) >= nu t.
inline bool in_set_tent(double distance_to_complement, double t, double nu = 1.0) {
  return distance_to_complement >= nu * t;
}

/// {x : M(chi_O)(x) > 1 - gamma} with the dyadic-window maximal function.
CellMask gamma_density_complement(const SpatialGrid& grid, const CellMask& set, double gamma);

/// Dyadic cube of the Whitney decomposition, aligned to grid indices.
struct WhitneyCube {
  int level = 0;                ///< side = 2^level cells
  std::array<int, 2> start{};   ///< lowest cell index per axis
  Point center{};
  double side = 0.0;
  double distance = 0.0;        ///< dist(Q, complement)
  bool resolution_loss = false; ///< a single cell too close to the boundary
  int set_id = 0;
};

/// Cells covered by a cube, in grid order.
std::vector<std::size_t> cube_cells(const SpatialGrid& grid, const WhitneyCube& cube);

/// Maximal aligned dyadic blocks Q inside the set with
/// dist(Q, complement) >= sqrt(n) side(Q); this gives the upper bound
/// dist <= 4 sqrt(n) side. Cells not covered by any such block become
/// single-cell cubes flagged with resolution_loss. Sorted by level
/// descending, then centre lexicographically.
std::vector<WhitneyCube> whitney_decomposition(const SpatialGrid& grid, const CellMask& set,
                                               int set_id = 0);

}  // namespace mohardy
