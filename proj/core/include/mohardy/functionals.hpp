#pragma once

#include <span>
#include <vector>

#include "mohardy/growth.hpp"
#include "mohardy/norms.hpp"

namespace mohardy {

/// Samples g(y, t) on a HalfSpaceGrid, stored level by level.
struct TentFunction {
  HalfSpaceGrid grid;
  std::vector<double> values;  // values[level * cells + cell]

  TentFunction() = default;
  explicit TentFunction(HalfSpaceGrid g)
      : grid(std::move(g)), values(grid.node_count(), 0.0) {}

  std::size_t cells() const { return grid.base().size(); }
  double& at(int level, std::size_t cell) { return values[level * cells() + cell]; }
  double at(int level, std::size_t cell) const { return values[level * cells() + cell]; }
  std::span<double> level(int m) { return {values.data() + m * cells(), cells()}; }
  std::span<const double> level(int m) const { return {values.data() + m * cells(), cells()}; }
  /// Nonzero-node mask in the same layout.
  std::vector<std::uint8_t> support() const;
  double max_abs() const;
};

/// Largest integer k with k h < nu t: cells j with |i - j| <= k lie in the
/// cone over cell i at level t.
int cone_reach(double spacing, double t, double nu = 1.0);

/// Radial wavelet whose Fourier profile is
///   A (|xi|/xi0)^{2K} exp(-K (|xi|^2/xi0^2 - 1)),   xi0 = sqrt(r_lo r_hi),
/// so all moments of order < 2K vanish and int_0^inf |hat(t xi)|^2 dt/t = 1.
/// Frequencies are in cycles per unit length.
struct AdmissibleWavelet {
  int dim = 1;
  int moments = 0;           ///< s: moments up to this order vanish
  int order = 2;             ///< K
  double r_lo = 0.0, r_hi = 0.0;
  double center_frequency = 1.0;
  double amplitude = 0.0;
  HalfSpaceGrid levels;
  double band_lo = 0.0, band_hi = 0.0;   ///< calibrated band of |xi|
  double normalization_residual = 0.0;   ///< max |level sum - 1| on the band
  double continuous_residual = 0.0;      ///< max |int dt/t - 1| on [2 r_lo, r_hi / 2]
  GridFunction samples;                  ///< phi(x) at t = 1 on the base grid
  double support_radius = 0.0;           ///< |phi| < 1e-13 max beyond this

  double fourier(double xi) const;
  /// sum_m |hat(t_m xi)|^2 ln(rho).
  double level_sum(double xi) const;
  /// int_0^inf |hat(t xi)|^2 dt/t by quadrature in ln t.
  double continuous_normalization(double xi) const;
};

/// Default profile order: high enough that the multiplier is negligible at
/// the Nyquist frequency of the finest default level, and at least
/// (moments + 1) / 2 so that the required moments vanish.
int default_wavelet_order(int moments);

AdmissibleWavelet make_admissible_wavelet(const HalfSpaceGrid& levels, int moments, double r_lo,
                                          double r_hi, int order = 0);

/// F(y, t_m) = (phi_{t_m} * f)(y) for every level.
TentFunction wavelet_transform(const AdmissibleWavelet& w, std::span<const double> f);

/// Cone square function: sum over nodes in the aperture-nu cone of
/// |g|^2 h^n ln(rho) / t^n, square-rooted.
GridFunction area_functional(const TentFunction& g, double nu = 1.0);

/// ||A(g)||_{L^p}.
double tent_norm_p(const TentFunction& g, double p);
/// ||A(g)||_{L^phi}.
double tent_norm_phi(const TentFunction& g, const GrowthFunction& phi);

/// S_alpha(f) = A_alpha(phi_t * f).
GridFunction lusin_area(const AdmissibleWavelet& w, std::span<const double> f, double alpha = 1.0);

enum class TestProfile { Gaussian, GaussianFirstDerivative, GaussianSecondDerivative, CubicBSpline };

/// Dictionary element c psi(x) with c chosen so that
/// (1 + |x|)^{(m+2)(n+1)} |d^beta (c psi)| <= 1 for |beta| <= m + 1.
struct DictionaryElement {
  TestProfile profile = TestProfile::Gaussian;
  int dim = 1;
  double scale = 1.0;        ///< c
  double measured_bound = 0.0;  ///< worst weighted derivative after rescaling
  double operator()(const Point& x) const;
};

/// Measured worst weighted derivative of c psi by finite differences.
double schwartz_class_bound(TestProfile profile, int dim, int m, double scale);

/// Gaussian, its first and second derivatives and the cubic B-spline,
/// rescaled into the normalised class and validated (NumericalError if a
/// rescaled element still violates the bound).
std::vector<DictionaryElement> make_grand_dictionary(int dim, int m);

/// max over dictionary elements, levels and |y - x| < t of |f * psi_t(y)|.
/// A lower bound for the true grand maximal function.
GridFunction grand_maximal(const HalfSpaceGrid& levels, std::span<const double> f,
                           std::span<const DictionaryElement> dictionary);

/// ||f*||_{L^phi} with the dictionary of order m.
double hphi_grand_quasinorm(const HalfSpaceGrid& levels, std::span<const double> f,
                            const GrowthFunction& phi, int m);

}  // namespace mohardy
