#include <doctest.h>

#include <cmath>

#include "mohardy/bmo.hpp"
#include "mohardy/families.hpp"
#include "mohardy/halfspace.hpp"
#include "mohardy/norms.hpp"

using namespace mohardy;

namespace {

const SpatialGrid kGrid(1, 32.0, 4096);
const HalfSpaceGrid kLevels(kGrid, 0.125, std::exp2(1.0 / 7.0), 57);

const AdmissibleWavelet& wavelet() {
  static const AdmissibleWavelet w = make_admissible_wavelet(kLevels, 1, 0.5, 2.0);
  return w;
}

const BallIndex& dyadic() {
  static const BallIndex b(kGrid, ball_family(kGrid, BallFamilyKind::Dyadic));
  return b;
}

GridFunction sign_of(const SpatialGrid& g) {
  return g.sample([](const Point& x) { return x[0] < 0 ? -1.0 : 1.0; });
}

}  // namespace

TEST_CASE("BMO_phi: constants and the sign function") {
  const SpatialGrid g(1, 1.0, 64);
  const BallIndex all(g, ball_family(g, BallFamilyKind::AllIntervals));
  const auto phi = GrowthFunction::identity(1);
  CHECK(bmo_phi_norm(GridFunction(g.size(), 3.5), phi, all) == 0.0);
  const double s = bmo_phi_norm(sign_of(g), phi, all);
  CHECK(s <= 1.0 + 1e-12);
  CHECK(s >= 1.0 - 1e-3);
}

TEST_CASE("BMO_phi: translation and shift invariance") {
  const SpatialGrid g(1, 4.0, 256);
  const BallIndex all(g, ball_family(g, BallFamilyKind::AllIntervals));
  const auto phi = GrowthFunction::power(1, 0.5);
  auto bump = [&](double c) {
    return g.sample([c](const Point& x) { return std::abs(x[0] - c) < 0.3 ? 1.0 - std::abs(x[0] - c) : 0.0; });
  };
  const double left = bmo_phi_norm(bump(-0.5), phi, all), right = bmo_phi_norm(bump(0.5), phi, all);
  CHECK(right == doctest::Approx(left).epsilon(1e-6));

  const auto b = sign_of(g);
  const double base = bmo_phi_norm(b, phi, all);
  for (double c : {0.75, -3.0, 1000.0}) {
    GridFunction shifted = b;
    for (double& v : shifted) v += c;
    CHECK(bmo_phi_norm(shifted, phi, all) == base);
  }
}

TEST_CASE("BMO_phi^p: p = 1 agrees and p = 2 stays comparable") {
  const auto phi = GrowthFunction::identity(1);
  for (const auto& nf : bmo_family(kGrid, 3, 5)) {
    const double one = bmo_phi_norm(nf.values, phi, dyadic());
    CHECK(bmo_phi_p_norm(nf.values, phi, 1.0, dyadic()) == one);
    const double two = bmo_phi_p_norm(nf.values, phi, 2.0, dyadic());
    CHECK(two >= one * (1.0 - 1e-12));
    CHECK(two <= 3.0 * one);
  }
}

TEST_CASE("Carleson norm by hand") {
  const auto phi = GrowthFunction::power(1, 0.7);
  CarlesonMeasure mu{kLevels, std::vector<double>(kLevels.node_count(), 0.0), "zero"};
  CHECK(carleson_norm(mu, phi, dyadic()) == 0.0);

  const int level = 20;
  const std::size_t cell = 2100;
  mu.density[level * kGrid.size() + cell] = 1.0;
  const double mass = mu.node_mass(level, cell);
  CHECK(mass == doctest::Approx(kGrid.spacing() * kLevels.t(level) * kLevels.log_ratio()));

  const auto norms = indicator_norms(phi, dyadic());
  double oracle = 0.0;
  for (std::size_t b = 0; b < dyadic().size(); ++b)
    if (in_tent(dyadic().ball(b), kGrid.center(cell), kLevels.t(level)))
      oracle = std::max(oracle, std::sqrt(dyadic().measure(b) * mass) / norms[b]);
  REQUIRE(oracle > 0.0);
  CHECK(carleson_norm(mu, phi, dyadic()) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("Carleson measure of phi_t * b") {
  const auto& w = wavelet();
  const auto phi = GrowthFunction::identity(1);
  CHECK(carleson_norm(carleson_from_bmo(GridFunction(kGrid.size(), 0.0), w), phi, dyadic()) == 0.0);
  const auto b = sign_of(kGrid);
  const double base = carleson_norm(carleson_from_bmo(b, w), phi, dyadic());
  CHECK(base > 0.0);
  GridFunction scaled = b;
  for (double& v : scaled) v *= -2.5;
  CHECK(carleson_norm(carleson_from_bmo(scaled, w), phi, dyadic()) ==
        doctest::Approx(2.5 * base).epsilon(1e-12));
}

TEST_CASE("Carleson over BMO on a small family") {
  const auto family = bmo_family(kGrid, 2, 11);
  const auto r = carleson_experiment(family, GrowthFunction::identity(1), wavelet(), dyadic());
  CHECK(r.rows.size() == family.size());
  CHECK(r.bounded);
  const NamedFunction flat{"flat", GridFunction(kGrid.size(), 2.0)};
  CHECK_THROWS(carleson_experiment(std::span(&flat, 1), GrowthFunction::identity(1), wavelet(), dyadic()));
}

TEST_CASE("pairing identity") {
  const auto& w = wavelet();
  const auto f = wave_packet(kGrid, 1.0, 2.0, 1.0);
  const auto b = wave_packet(kGrid, 1.3, 2.5, -0.5);
  const auto r = pairing_check(f, b, w);
  CHECK(r.residual <= 1e-6);

  const auto zero = pairing_check(GridFunction(kGrid.size(), 0.0), b, w);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);

  GridFunction twice = f;
  for (double& v : twice) v *= 2.0;
  CHECK(pairing_check(twice, b, w).rhs == doctest::Approx(2.0 * r.rhs).epsilon(1e-12));
}

TEST_CASE("John-Nirenberg distribution") {
  const auto logb = bmo_family(kGrid, 0, 1)[1].values;
  const Ball unit{{0.0, 0.0}, 1.0};
  std::vector<double> lambdas;
  for (int k = 0; k <= 20; ++k) lambdas.push_back(0.2 * k);
  const auto r = john_nirenberg_experiment(kGrid, logb, unit, lambdas);
  CHECK(r.monotone);
  CHECK(r.decaying);
  for (const auto& row : r.rows)
    if (row.lambda >= r.oscillation) CHECK(row.fraction == 0.0);

  const auto flat = john_nirenberg_experiment(kGrid, GridFunction(kGrid.size(), 4.0), unit, lambdas);
  for (const auto& row : flat.rows) CHECK(row.fraction == 0.0);
}

TEST_CASE("weighted oscillation integral") {
  const auto phi = GrowthFunction::identity(1);
  const Ball ball{{0.5, 0.0}, 1.0};
  CHECK(oscillation_integral_check(GridFunction(kGrid.size(), 1.0), ball, 1.0, phi, dyadic(), 1.0).lhs == 0.0);

  const auto coarse = oscillation_integral_check(sign_of(kGrid), ball, 1.0, phi, dyadic());
  CHECK(std::isfinite(coarse.ratio));
  CHECK(coarse.ratio > 0.0);
  CHECK(coarse.ratio_upper >= coarse.ratio);

  const SpatialGrid fine = kGrid.refined();
  const BallIndex fine_balls(fine, ball_family(fine, BallFamilyKind::Dyadic));
  const auto refined = oscillation_integral_check(sign_of(fine), ball, 1.0, phi, fine_balls);
  CHECK(refined.ratio == doctest::Approx(coarse.ratio).epsilon(0.02));
}
