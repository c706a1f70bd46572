#pragma once

#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "mohardy/ball_index.hpp"
#include "mohardy/growth.hpp"

namespace mohardy {

struct LuxembourgResult {
  double norm = 0.0;
  double modular_at_norm = 0.0;
  bool modular_defined = true;  ///< false for the zero function
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
};

/// Relative bracket width at which the bisections stop.
inline constexpr double kNormTolerance = 1e-14;

/// inf{lambda > 0 : int phi(x, |f(x)| / lambda) dx <= 1}, by bisection in
/// log lambda. Returns the upper end of the final bracket, so the modular
/// there is <= 1 (the definitional infimum side of a flat spot).
LuxembourgResult luxembourg_norm(const GrowthFunction& phi, const SpatialGrid& grid,
                                 std::span<const double> f);

/// int phi(x, |f(x)| / lambda) dx.
double luxembourg_modular(const GrowthFunction& phi, const SpatialGrid& grid,
                          std::span<const double> f, double lambda);

/// ||chi_B||_{L^phi}, closed form when phi is linear in t.
double indicator_norm(const GrowthFunction& phi, const SpatialGrid& grid, const Ball& ball);

/// ||chi_B|| for every ball of an index. Product forms reduce to one scalar
/// equation per ball (closed form for power Orlicz functions).
std::vector<double> indicator_norms(const GrowthFunction& phi, const BallIndex& balls);

/// Memoises indicator_norm per ball for one (phi, grid). Thread safe.
class IndicatorNormCache {
 public:
  IndicatorNormCache(const GrowthFunction& phi, const SpatialGrid& grid) : phi_(phi), grid_(grid) {}
  double operator()(const Ball& ball);
  const GrowthFunction& phi() const { return phi_; }
  const SpatialGrid& grid() const { return grid_; }

 private:
  GrowthFunction phi_;
  SpatialGrid grid_;
  std::mutex mutex_;
  std::map<std::array<double, 3>, double> cache_;
};

/// ||f||_{L^q_phi(B)}: sup over t of [phi(B,t)^{-1} int_B |f|^q phi(., t)]^{1/q};
/// q = +inf gives the grid max over B. Product forms short-circuit the sup.
double lq_phi_ball_norm(const GrowthFunction& phi, const SpatialGrid& grid,
                        std::span<const double> f, const Ball& ball, double q,
                        std::span<const double> t_grid);

struct LambdaTerm {
  double coefficient = 0.0;
  Ball ball;
  double indicator_norm = 0.0;  ///< ||chi_B||_{L^phi}, must be > 0
};

/// inf{lambda : sum_j phi(B_j, |lambda_j| / (lambda ||chi_{B_j}||)) <= 1}.
double lambda_functional(const GrowthFunction& phi, const SpatialGrid& grid,
                         std::span<const LambdaTerm> terms);

/// Convenience: looks up the indicator norms in a cache first.
std::vector<LambdaTerm> make_lambda_terms(IndicatorNormCache& cache,
                                          std::span<const double> coefficients,
                                          std::span<const Ball> balls);

}  // namespace mohardy
