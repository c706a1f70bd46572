#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mohardy/ball_index.hpp"
#include "mohardy/functionals.hpp"
#include "mohardy/growth.hpp"

namespace mohardy {

/// sup over the ball family of ||chi_B||^{-1} int_B |b - b_B|, with b_B the
/// cell-weighted average over B.
double bmo_phi_norm(std::span<const double> b, const GrowthFunction& phi, const BallIndex& balls);

/// sup over the ball family of |B| / ||chi_B|| (|B|^{-1} int_B |b - b_B|^p)^{1/p}.
/// p = 1 is routed through bmo_phi_norm, so both agree bit for bit.
double bmo_phi_p_norm(std::span<const double> b, const GrowthFunction& phi, double p,
                      const BallIndex& balls);

/// A measure on the half-space grid given by its density with respect to
/// dx dt at every node.
struct CarlesonMeasure {
  HalfSpaceGrid grid;
  std::vector<double> density;  // density[level * cells + cell]
  std::string provenance;

  /// Mass carried by a node: density * h^n * t * ln(rho).
  double node_mass(int level, std::size_t cell) const;
};

/// sup over the ball family of |B|^{1/2} / ||chi_B|| (mu(tent over B))^{1/2}.
double carleson_norm(const CarlesonMeasure& mu, const GrowthFunction& phi, const BallIndex& balls);

/// Density |phi_t * b|^2 / t.
CarlesonMeasure carleson_from_bmo(std::span<const double> b, const AdmissibleWavelet& w);

struct CarlesonRow {
  std::string id;
  double bmo = 0.0;
  double carleson = 0.0;
  double ratio = 0.0;
};

struct CarlesonExperiment {
  std::vector<CarlesonRow> rows;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double spread = 0.0;  ///< max / min
  bool bounded = false; ///< all ratios finite and spread <= cap
};

struct NamedFunction {
  std::string id;
  GridFunction values;
};

/// Carleson norm of |phi_t * b|^2 dx dt / t against the BMO norm of b for a
/// family of nonconstant functions.
CarlesonExperiment carleson_experiment(std::span<const NamedFunction> family,
                                        const GrowthFunction& phi, const AdmissibleWavelet& w,
                                        const BallIndex& balls, double spread_cap = 50.0);

struct PairingResult {
  double lhs = 0.0;       ///< int f b dx
  double rhs = 0.0;       ///< sum over nodes of F_f F_b h^n ln(rho)
  double residual = 0.0;  ///< relative to |lhs|, absolute when |lhs| < 1e-14
  bool absolute = false;
};

PairingResult pairing_check(std::span<const double> f, std::span<const double> b,
                            const AdmissibleWavelet& w);

struct DistributionRow {
  double lambda = 0.0;
  double fraction = 0.0;  ///< |{x in B : |b - b_B| > lambda}| / |B|
};

struct JohnNirenbergResult {
  std::vector<DistributionRow> rows;
  double oscillation = 0.0;  ///< max over B of |b - b_B|
  double rate = 0.0;         ///< least-squares slope of ln(fraction) in lambda, negated
  bool monotone = false;
  bool decaying = false;     ///< monotone and rate > 0 (vacuous for constant b)
};

JohnNirenbergResult john_nirenberg_experiment(const SpatialGrid& grid, std::span<const double> b,
                                              const Ball& ball, std::span<const double> lambdas);

struct OscillationIntegral {
  double lhs = 0.0;         ///< quadrature over the domain
  double tail_bound = 0.0;  ///< bound for the part outside the domain
  bool tail_significant = false;  ///< tail_bound > 1e-3 lhs
  double rhs_scale = 0.0;   ///< ||chi_B0|| / |B0| * ||f||_BMO
  double ratio = 0.0;       ///< lhs / rhs_scale
  double ratio_upper = 0.0; ///< (lhs + tail_bound) / rhs_scale
  double epsilon_threshold = 0.0;
  std::optional<std::string> warning;
};

/// int delta^eps |f - f_B0| / (delta^{n+eps} + |x - x0|^{n+eps}) dx against
/// ||chi_B0|| / |B0| ||f||_BMO. Outside the domain |f - f_B0| is bounded by
/// its largest value on the grid, which gives the analytic tail bound.
OscillationIntegral oscillation_integral_check(std::span<const double> f, const Ball& ball, double epsilon,
                            const GrowthFunction& phi, const BallIndex& balls,
                            std::optional<double> bmo_norm = std::nullopt);

}  // namespace mohardy
