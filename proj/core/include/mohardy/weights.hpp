#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mohardy/ball_index.hpp"
#include "mohardy/growth.hpp"

namespace mohardy {

/// Sentinel returned when a constant diverges on the grid (a zero weight
/// inside some ball, or a zero average).
inline constexpr double kDivergent = std::numeric_limits<double>::infinity();

/// sup over (t, B) of the q-Muckenhoupt product
///   |B|^{-q} int_B phi(., t) (int_B phi(., t)^{-q'/q})^{q/q'}
/// and for q = 1 the average of phi times the grid max of 1/phi.
/// Product forms are evaluated at one level since the t factor cancels.
double muckenhoupt_constant(const GrowthFunction& phi, double q, const BallIndex& balls,
                            std::span<const double> t_grid);

/// sup over (t, B) of (|B|^{-1} int_B phi^q)^{1/q} / (|B|^{-1} int_B phi);
/// q = +inf uses the grid max over B.
double reverse_holder_constant(const GrowthFunction& phi, double q, const BallIndex& balls,
                               std::span<const double> t_grid);

enum class RefinementTrend { Stable, Diverging, Infinite };
std::string to_string(RefinementTrend trend);

struct IndexRow {
  std::string kind;      ///< "A" or "RH"
  double q = 0.0;
  double constant = 0.0;
  int refinement_level = 0;
  RefinementTrend trend = RefinementTrend::Stable;
};

struct IndexBracket {
  double lo = 0.0;
  double hi = 0.0;
  bool converged = false;  ///< false when the scan never stabilised
};

struct CriticalIndices {
  IndexBracket q_bracket;       ///< q(phi) lies in (lo, hi]
  double q_estimate = 0.0;      ///< hi end of the bracket
  IndexBracket r_bracket;       ///< r(phi) lies in [lo, hi)
  double r_estimate = 0.0;      ///< lo end; +inf when RH_inf is stable
  double lower_type = 0.0;      ///< estimated lower type used for m
  int m_estimated = 0;
  std::optional<int> m_declared;  ///< from declared indices, if known
  std::vector<IndexRow> rows;
};

struct IndexScanOptions {
  std::vector<double> q_scan;                 ///< increasing, all >= 1
  std::vector<double> rh_scan;                ///< increasing, > 1; +inf allowed
  BallFamilyKind family = BallFamilyKind::Dyadic;
  int refinements = 2;                        ///< grids N, 2N, ..., 2^r N
};

/// Estimates q(phi), r(phi) and m(phi). A scanned q is accepted once its
/// constant stops growing under refinement: with increments d1, d2 across
/// two successive refinements, growth is flagged when d2 >= d1 > 0.
CriticalIndices critical_indices(const GrowthFunction& phi, const SpatialGrid& grid,
                                 std::span<const double> t_grid, const IndexScanOptions& opts,
                                 std::optional<TypeExponentEstimate> types = std::nullopt);

/// floor(n (q / i - 1)) clamped at 0.
int m_index(int dim, double q_index, double lower_type);

/// q(phi) for built-in forms with a known answer: |x|^a Phi(t) has
/// q = 1 + max(a, 0) / n, and the log family lies in A_1.
std::optional<double> declared_q_index(const GrowthFunction& phi);

enum class MaximalWindows {
  Dyadic,  ///< uncentred windows (squares) of 2^k cells, any alignment
  All,     ///< every window length (n = 1), exhaustive
};

/// Uncentred Hardy-Littlewood maximal function of |f| over grid windows that
/// contain the cell and lie inside the domain. The single-cell window is
/// always included, so Mf >= |f|.
GridFunction hardy_littlewood_maximal(const SpatialGrid& grid, std::span<const double> f,
                                      MaximalWindows windows = MaximalWindows::Dyadic);

}  // namespace mohardy
