#include <doctest.h>

#include <cmath>

#include "mohardy/error.hpp"
#include "mohardy/families.hpp"
#include "mohardy/synthesis.hpp"

using namespace mohardy;

namespace {

const SpatialGrid kGrid(1, 32.0, 4096);
const HalfSpaceGrid kLevels(kGrid, 0.125, std::exp2(1.0 / 7.0), 57);

const AdmissibleWavelet& wavelet() {
  static const AdmissibleWavelet w = make_admissible_wavelet(kLevels, 1, 0.5, 2.0);
  return w;
}

double l2(const SpatialGrid& g, std::span<const double> f) {
  double s = 0.0;
  for (double v : f) s += v * v;
  return std::sqrt(s * g.cell_volume());
}

GridFunction packet_pair(double xi, double sigma) {
  const auto a = wave_packet(kGrid, xi, sigma, -3.0), b = wave_packet(kGrid, xi, sigma, 3.0);
  GridFunction f(a.size());
  for (std::size_t c = 0; c < f.size(); ++c) f[c] = a[c] - b[c];
  return f;
}

}  // namespace

TEST_CASE("pi_phi: zero and linearity") {
  const auto& w = wavelet();
  for (double v : pi_phi(TentFunction(kLevels), w)) CHECK(v == 0.0);
  const auto fs = random_tent_functions(kLevels, 2, 8);
  TentFunction mix(kLevels);
  for (std::size_t k = 0; k < mix.values.size(); ++k) mix.values[k] = 2.0 * fs[0].values[k] - 0.5 * fs[1].values[k];
  const auto a = pi_phi(fs[0], w), b = pi_phi(fs[1], w), c = pi_phi(mix, w);
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  for (std::size_t x = 0; x < c.size(); ++x) CHECK(std::abs(c[x] - (2.0 * a[x] - 0.5 * b[x])) <= 1e-12 * scale);
}

TEST_CASE("pi_phi is bounded from T^2_2 to L^2 on random tent functions") {
  const auto& w = wavelet();
  double worst = 0.0;
  for (const auto& F : random_tent_functions(kLevels, 50, 31))
    worst = std::max(worst, l2(kGrid, pi_phi(F, w)) / tent_norm_p(F, 2.0));
  CHECK(std::isfinite(worst));
  CHECK(worst < 10.0);
}

TEST_CASE("Calderon reproduction") {
  const auto& w = wavelet();
  CHECK(calderon_reproduce(GridFunction(kGrid.size(), 0.0), w).relative_residual == 0.0);
  const GridFunction f = wave_packet(kGrid, 1.0, 2.5, 0.7);
  const auto full = calderon_reproduce(f, w);
  CHECK(full.relative_residual <= 1e-6);
  // Same sums as pi_phi of the transform.
  CHECK(pi_phi(wavelet_transform(w, f), w) == full.reproduced);
  double prev = full.relative_residual;
  for (double cut : {1.0, 0.5, 0.25}) {
    const auto r = calderon_reproduce(f, w, {0.0, cut});
    CHECK(r.relative_residual >= prev);
    prev = r.relative_residual;
  }
  CHECK_THROWS_AS(calderon_reproduce(f, w, {100.0, 200.0}), PreconditionError);
}

TEST_CASE("molecules") {
  const SpatialGrid g(1, 8.0, 1024);
  const auto phi = GrowthFunction::identity(1);
  const Ball ball{{0.0, 0.0}, 1.0};
  const auto cells = g.cells_in_ball(ball);
  const double chi = g.measure(cells.size());

  SUBCASE("an odd atom inside B") {
    GridFunction a(g.size(), 0.0);
    for (std::size_t c : cells) a[c] = (g.center(c)[0] < 0 ? 1.0 : -1.0) / chi;
    const auto m = validate_molecule(g, a, ball, 2.0, 0, 1.5, phi);
    for (std::size_t j = 1; j < m.annulus_norms.size(); ++j) CHECK(m.annulus_norms[j] == 0.0);
    CHECK(m.passes());
  }
  SUBCASE("the indicator has no vanishing moment") {
    GridFunction a(g.size(), 0.0);
    for (std::size_t c : cells) a[c] = 1.0 / chi;
    CHECK_FALSE(validate_molecule(g, a, ball, 2.0, 0, 1.5, phi).passes());
  }
}

TEST_CASE("molecule to atoms on synthesised atoms") {
  const auto& w = wavelet();
  const auto phi = GrowthFunction::identity(1);
  const auto report = molecular_pipeline(packet_pair(1.0, 2.0), w, phi);
  REQUIRE(report.decomposition.atoms.size() >= 3);
  for (std::size_t a = 0; a < 3; ++a) {
    const auto& atom = report.decomposition.atoms[a];
    const GridFunction alpha = pi_phi(atom, w);
    const auto mol = validate_molecule(kGrid, alpha, atom.ball, 2.0, 1, 1.5, phi);
    CHECK(mol.passes());
    for (int s : {0, 1, 2}) {
      const auto pieces = molecule_to_atoms(kGrid, alpha, atom.ball, s);
      CHECK(pieces.reassembly_residual <= 1e-10);
      CHECK(pieces.atom_moment_residual <= 1e-10);
      CHECK(pieces.dual_basis_residual <= 1e-10);
      CHECK(pieces.piece_moment_residual <= 1e-10);
      if (s <= 1) CHECK(pieces.leading_tail <= 1e-8);
    }
  }
}

TEST_CASE("H_{phi,S} quasinorm") {
  const auto& w = wavelet();
  const auto phi = GrowthFunction::power(1, 0.5);
  CHECK(hardy_s_quasinorm(w, GridFunction(kGrid.size(), 0.0), phi) == 0.0);
  GridFunction f = packet_pair(1.2, 2.5);
  const double base = hardy_s_quasinorm(w, f, phi);
  for (double& v : f) v *= -4.0;
  CHECK(hardy_s_quasinorm(w, f, phi) == doctest::Approx(4.0 * base).epsilon(1e-9));

  const SpatialGrid fine = kGrid.refined();
  const HalfSpaceGrid fine_levels = kLevels.with_base(fine);
  const auto wf = make_admissible_wavelet(fine_levels, 1, 0.5, 2.0);
  const auto a = wave_packet(fine, 1.2, 2.5, -3.0), b = wave_packet(fine, 1.2, 2.5, 3.0);
  GridFunction g(a.size());
  for (std::size_t c = 0; c < g.size(); ++c) g[c] = a[c] - b[c];
  CHECK(hardy_s_quasinorm(wf, g, phi) == doctest::Approx(base).epsilon(0.02));
}

TEST_CASE("molecular pipeline") {
  const auto& w = wavelet();
  const auto phi = GrowthFunction::identity(1);
  const auto empty = molecular_pipeline(GridFunction(kGrid.size(), 0.0), w, phi);
  CHECK(empty.decomposition.atoms.empty());
  CHECK(empty.molecules.empty());

  double rmin = INFINITY, rmax = 0.0;
  for (double xi : {0.75, 1.0, 1.5}) {
    const auto r = molecular_pipeline(packet_pair(xi, 2.0), w, phi);
    CHECK(r.reconstruction_error <= 1e-3);
    for (const auto& m : r.molecules) CHECK(m.passes);
    rmin = std::min(rmin, r.ratio);
    rmax = std::max(rmax, r.ratio);
  }
  CHECK(rmax / rmin <= 50.0);
}

TEST_CASE("molecule to atoms near the domain edge") {
  // The outer annuli are clipped to one side; s = 2 fits stay well posed.
  const GridFunction f = wave_packet(kGrid, 1.0, 0.5, 28.0);
  const Ball edge{{28.0, 0.0}, 0.5};
  for (int s : {0, 1, 2}) {
    const auto p = molecule_to_atoms(kGrid, f, edge, s);
    CHECK(p.reassembly_residual <= 1e-10);
    CHECK(p.dual_basis_residual <= 1e-10);
    CHECK(p.atom_moment_residual <= 1e-10);
  }
}
