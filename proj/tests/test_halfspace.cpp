#include <doctest.h>

#include <cmath>
#include <random>

#include "mohardy/error.hpp"
#include "mohardy/halfspace.hpp"

using namespace mohardy;

namespace {

CellMask interval_mask(const SpatialGrid& g, double a, double b) {
  CellMask m(g.size(), 0);
  for (std::size_t c = 0; c < g.size(); ++c) m[c] = g.center(c)[0] > a && g.center(c)[0] < b;
  return m;
}

// Distance between the closed cell sets: brute force over complement cells
// and the two domain walls.
double brute_distance(const SpatialGrid& g, const CellMask& m, std::size_t cell) {
  if (!m[cell]) return 0.0;
  const double h = g.spacing(), x = g.center(cell)[0];
  double best = std::min(x + g.half_width(), g.half_width() - x) + 0.0;
  for (std::size_t c = 0; c < g.size(); ++c)
    if (!m[c]) best = std::min(best, std::abs(g.center(c)[0] - x) - 0.5 * h);
  return best;
}

}  // namespace

TEST_CASE("cones") {
  const Point x{0.3, 0.0}, y{0.8, 0.0};
  CHECK(cone_membership(x, x, 0.01));
  CHECK_FALSE(cone_membership(x, y, 0.5));
  CHECK(cone_membership(x, y, 0.5, 1.0 + 1e-9));
  for (double t : {0.1, 0.3, 0.6, 1.0})
    if (cone_membership(x, y, t, 1.0)) CHECK(cone_membership(x, y, t, 2.0));
}

TEST_CASE("tents") {
  const Ball b{{1.0, 0.0}, 2.0};
  CHECK(in_tent(b, b.center, 1.0));
  CHECK_FALSE(in_tent(b, b.center, 4.0));
  CHECK(in_tent(b, {1.0 + 1.5, 0.0}, 0.5));
}

TEST_CASE("tent and cone duality on a small grid") {
  const SpatialGrid g(1, 2.0, 32);
  const CellMask O = interval_mask(g, -0.6, 1.1);
  const auto d = distance_to_complement(g, O);
  for (double t : {0.0625, 0.125, 0.25, 0.5}) {
    for (std::size_t yc = 0; yc < g.size(); ++yc) {
      // Points of the complement: centres of complement cells and the
      // closed-cell boundary points of O, plus everything outside the domain.
      bool seen = false;
      for (std::size_t xc = 0; xc < g.size(); ++xc) {
        if (O[xc]) continue;
        const double lo = g.center(xc)[0] - 0.5 * g.spacing(), hi = lo + g.spacing();
        for (double x : {lo, g.center(xc)[0], hi})
          if (cone_membership({x, 0.0}, g.center(yc), t)) seen = true;
      }
      for (double wall : {-g.half_width(), g.half_width()})
        if (cone_membership({wall, 0.0}, g.center(yc), t)) seen = true;
      CHECK(in_set_tent(d[yc], t) == (O[yc] && !seen));
    }
  }
}

TEST_CASE("distance to the complement") {
  const SpatialGrid g(1, 2.0, 64);
  const CellMask O = interval_mask(g, -1.0, 0.5);
  const auto d = distance_to_complement(g, O);
  for (std::size_t c = 0; c < g.size(); ++c)
    CHECK(d[c] == doctest::Approx(brute_distance(g, O, c)).epsilon(1e-12));
}

TEST_CASE("gamma density hull") {
  const SpatialGrid g(1, 4.0, 256);
  SUBCASE("empty set") {
    const auto H = gamma_density_complement(g, CellMask(g.size(), 0), 0.5);
    CHECK(std::count(H.begin(), H.end(), 1) == 0);
  }
  SUBCASE("whole domain is rejected") {
    CHECK_THROWS_AS(gamma_density_complement(g, CellMask(g.size(), 1), 0.5), PreconditionError);
  }
  SUBCASE("contains the set, measure bounded across random sets") {
    std::mt19937_64 rng(4);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
      CellMask O(g.size(), 0);
      for (int piece = 0; piece < 1 + trial % 4; ++piece) {
        const std::size_t a = rng() % 200, len = 1 + rng() % 30;
        for (std::size_t c = a; c < std::min(a + len, g.size()); ++c) O[c] = 1;
      }
      const auto H = gamma_density_complement(g, O, 0.5);
      for (std::size_t c = 0; c < g.size(); ++c)
        if (O[c]) CHECK(H[c] == 1);
      worst = std::max(worst, double(std::count(H.begin(), H.end(), 1)) /
                                  double(std::count(O.begin(), O.end(), 1)));
    }
    CHECK(worst < 10.0);
  }
}

TEST_CASE("Whitney decomposition of (0, 1)") {
  const SpatialGrid g(1, 2.0, 512);
  const CellMask O = interval_mask(g, 0.0, 1.0);
  const auto cubes = whitney_decomposition(g, O);
  REQUIRE_FALSE(cubes.empty());
  const auto d = distance_to_complement(g, O);
  std::vector<int> covered(g.size(), 0);
  int largest = 0;
  for (const auto& q : cubes) {
    const auto cells = cube_cells(g, q);
    for (std::size_t c : cells) ++covered[c];
    // Distance of the closed cube to the complement, from the cell distances.
    double dist = INFINITY;
    for (std::size_t c : cells) dist = std::min(dist, d[c] - 0.5 * g.spacing());
    if (!q.resolution_loss) {
      CHECK(dist >= q.side * (1 - 1e-12));
      CHECK(dist <= 4.0 * q.side * (1 + 1e-12));
    }
    CHECK(q.distance == doctest::Approx(dist));
    // The inflated ball contains the cube.
    const Ball b{q.center, 5.5 * q.side};
    CHECK(g.cells_in_ball(b).size() >= cells.size());
    largest = std::max(largest, q.level);
  }
  for (std::size_t c = 0; c < g.size(); ++c) CHECK(covered[c] == (O[c] ? 1 : 0));
  // Accumulation at both ends: the smallest cubes touch the endpoints.
  CHECK(cubes.back().level == 0);
  CHECK(largest >= 5);
  CHECK(whitney_decomposition(g, CellMask(g.size(), 0)).empty());
  // Canonical order: level descending, then centre.
  for (std::size_t i = 1; i < cubes.size(); ++i) {
    CHECK(cubes[i - 1].level >= cubes[i].level);
    if (cubes[i - 1].level == cubes[i].level) CHECK(cubes[i - 1].center[0] < cubes[i].center[0]);
  }
}

TEST_CASE("Whitney decomposition in 2-D covers the set once") {
  const SpatialGrid g(2, 1.0, 32);
  CellMask O(g.size(), 0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Point x = g.center(c);
    O[c] = x[0] * x[0] + x[1] * x[1] < 0.4;
  }
  const auto cubes = whitney_decomposition(g, O);
  std::vector<int> covered(g.size(), 0);
  for (const auto& q : cubes)
    for (std::size_t c : cube_cells(g, q)) ++covered[c];
  for (std::size_t c = 0; c < g.size(); ++c) CHECK(covered[c] == (O[c] ? 1 : 0));
}
