#include "mohardy/halfspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mohardy/error.hpp"
#include "mohardy/weights.hpp"

namespace mohardy {

namespace {

struct Box {
  double lo[2];
  double hi[2];
};

double box_distance(const Box& a, const Box& b, int dim) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double gap = std::max({0.0, b.lo[d] - a.hi[d], a.lo[d] - b.hi[d]});
    s += gap * gap;
  }
  return std::sqrt(s);
}

// Distance from a box inside the domain to the domain exterior.
double exterior_distance(const Box& a, const SpatialGrid& grid) {
  const double L = grid.half_width();
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid.dim(); ++k) d = std::min({d, a.lo[k] + L, L - a.hi[k]});
  return std::max(d, 0.0);
}

Box cell_box(const SpatialGrid& grid, int i, int j) {
  const double h = grid.spacing(), L = grid.half_width();
  return {{-L + i * h, -L + j * h}, {-L + (i + 1) * h, -L + (j + 1) * h}};
}

// Complement cells with a neighbour in the set; the nearest complement
// point of any box inside the set lies in one of them or outside the domain.
std::vector<Box> complement_frontier(const SpatialGrid& grid, const CellMask& set) {
  const int n = grid.cells_per_axis();
  std::vector<Box> out;
  const int ny = grid.dim() == 1 ? 1 : n;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < n; ++i) {
      if (set[grid.index(i, j)]) continue;
      bool touches = false;
      for (int dj = -1; dj <= 1 && !touches; ++dj) {
        for (int di = -1; di <= 1 && !touches; ++di) {
          const int a = i + di, b = j + dj;
          if (a < 0 || a >= n || b < 0 || b >= ny) continue;
          touches = set[grid.index(a, b)] != 0;
        }
      }
      if (touches) out.push_back(cell_box(grid, i, j));
    }
  }
  return out;
}

double box_to_complement(const SpatialGrid& grid, const std::vector<Box>& frontier, const Box& b) {
  double d = exterior_distance(b, grid);
  for (const Box& c : frontier) d = std::min(d, box_distance(b, c, grid.dim()));
  return d;
}

}  // namespace

std::vector<double> distance_to_complement(const SpatialGrid& grid, const CellMask& set) {
  if (set.size() != grid.size()) throw PreconditionError("distance_to_complement: size mismatch");
  std::vector<double> out(grid.size(), 0.0);
  const double h = grid.spacing();
  const double L = grid.half_width();
  if (grid.dim() == 1) {
    const int n = grid.cells_per_axis();
    int i = 0;
    while (i < n) {
      if (!set[static_cast<std::size_t>(i)]) {
        ++i;
        continue;
      }
      int end = i;
      while (end < n && set[static_cast<std::size_t>(end)]) ++end;
      const double left = -L + i * h, right = -L + end * h;
      for (int c = i; c < end; ++c) {
        const double x = grid.axis_center(c);
        out[static_cast<std::size_t>(c)] = std::min(x - left, right - x);
      }
      i = end;
    }
    return out;
  }
  const auto frontier = complement_frontier(grid, set);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    if (!set[c]) continue;
    const Point y = grid.center(c);
    const Box p{{y[0], y[1]}, {y[0], y[1]}};
    out[c] = box_to_complement(grid, frontier, p);
  }
  return out;
}

CellMask gamma_density_complement(const SpatialGrid& grid, const CellMask& set, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma_density_complement: gamma must lie in (0, 1)");
  if (set.size() != grid.size()) throw PreconditionError("gamma_density_complement: size mismatch");
  if (std::all_of(set.begin(), set.end(), [](std::uint8_t v) { return v != 0; })) {
    throw PreconditionError("gamma_density_complement: the set fills the domain");
  }
  GridFunction chi(set.size());
  for (std::size_t c = 0; c < chi.size(); ++c) chi[c] = set[c] ? 1.0 : 0.0;
  const GridFunction m = hardy_littlewood_maximal(grid, chi);
  CellMask out(set.size(), 0);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = (set[c] || m[c] > 1.0 - gamma) ? 1 : 0;
  return out;
}

std::vector<std::size_t> cube_cells(const SpatialGrid& grid, const WhitneyCube& cube) {
  const int side = 1 << cube.level;
  const int n = grid.cells_per_axis();
  std::vector<std::size_t> out;
  const int ny = grid.dim() == 1 ? 1 : side;
  for (int dj = 0; dj < ny; ++dj) {
    for (int di = 0; di < side; ++di) {
      const int i = cube.start[0] + di, j = cube.start[1] + dj;
      if (i < n && j < n) out.push_back(grid.index(i, grid.dim() == 1 ? 0 : j));
    }
  }
  return out;
}

std::vector<WhitneyCube> whitney_decomposition(const SpatialGrid& grid, const CellMask& set,
                                               int set_id) {
  if (set.size() != grid.size()) throw PreconditionError("whitney_decomposition: size mismatch");
  std::vector<WhitneyCube> cubes;
  if (std::none_of(set.begin(), set.end(), [](std::uint8_t v) { return v != 0; })) return cubes;

  const int dim = grid.dim();
  const int n = grid.cells_per_axis();
  const int ny = dim == 1 ? 1 : n;
  const double h = grid.spacing();
  const double L = grid.half_width();
  const double root_n = std::sqrt(static_cast<double>(dim));
  const auto frontier = complement_frontier(grid, set);

  // 2-D prefix count of set cells to test block containment in O(1).
  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  std::vector<int> prefix(stride * (static_cast<std::size_t>(ny) + 1), 0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < n; ++i) {
      prefix[(j + 1) * stride + i + 1] = (set[grid.index(i, j)] ? 1 : 0) + prefix[j * stride + i + 1] +
                                         prefix[(j + 1) * stride + i] - prefix[j * stride + i];
    }
  }
  auto inside = [&](int i0, int j0, int side) {
    const int i1 = i0 + side, j1 = j0 + (dim == 1 ? 1 : side);
    if (i1 > n || j1 > ny) return false;
    const int count = prefix[j1 * stride + i1] - prefix[j0 * stride + i1] -
                      prefix[j1 * stride + i0] + prefix[j0 * stride + i0];
    return count == side * (dim == 1 ? 1 : side);
  };
  auto block_box = [&](int i0, int j0, int side) {
    Box b{{-L + i0 * h, -L + j0 * h}, {-L + (i0 + side) * h, -L + (j0 + side) * h}};
    return b;
  };

  int top = 0;
  while ((1 << (top + 1)) <= n) ++top;
  CellMask covered(set.size(), 0);
  for (int level = top; level >= 0; --level) {
    const int side = 1 << level;
    const int ystep = dim == 1 ? 1 : side;
    for (int j0 = 0; j0 < ny; j0 += ystep) {
      for (int i0 = 0; i0 < n; i0 += side) {
        if (covered[grid.index(i0, j0)] || !inside(i0, j0, side)) continue;
        const Box b = block_box(i0, j0, side);
        const double dist = box_to_complement(grid, frontier, b);
        if (dist < root_n * side * h) continue;
        WhitneyCube q;
        q.level = level;
        q.start = {i0, dim == 1 ? 0 : j0};
        q.side = side * h;
        q.center = {-L + (i0 + 0.5 * side) * h, dim == 1 ? 0.0 : -L + (j0 + 0.5 * side) * h};
        q.distance = dist;
        q.set_id = set_id;
        for (std::size_t c : cube_cells(grid, q)) covered[c] = 1;
        cubes.push_back(q);
      }
    }
  }
  for (std::size_t c = 0; c < set.size(); ++c) {
    if (!set[c] || covered[c]) continue;
    const auto ij = grid.coords(c);
    WhitneyCube q;
    q.level = 0;
    q.start = ij;
    q.side = h;
    q.center = grid.center(c);
    q.distance = box_to_complement(grid, frontier, block_box(ij[0], ij[1], 1));
    q.resolution_loss = true;
    q.set_id = set_id;
    cubes.push_back(q);
  }
  std::sort(cubes.begin(), cubes.end(), [](const WhitneyCube& a, const WhitneyCube& b) {
    if (a.level != b.level) return a.level > b.level;
    return a.center < b.center;
  });
  return cubes;
}

}  // namespace mohardy
