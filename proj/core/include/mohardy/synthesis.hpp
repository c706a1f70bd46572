#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mohardy/functionals.hpp"
#include "mohardy/tent_atoms.hpp"

namespace mohardy {

/// Levels used by the synthesis sums; an empty range means all levels.
struct LevelRange {
  double t_lo = 0.0;
  double t_hi = std::numeric_limits<double>::infinity();
  bool contains(double t) const { return t >= t_lo && t <= t_hi; }
};

/// sum_m (F(., t_m) * phi_{t_m}) ln(rho) over the levels in range.
GridFunction pi_phi(const TentFunction& F, const AdmissibleWavelet& w, LevelRange range = {});

/// pi_phi of a sparse atom (node ids and values).
GridFunction pi_phi(const TentAtom& atom, const AdmissibleWavelet& w);

struct CalderonResult {
  GridFunction reproduced;
  double relative_residual = 0.0;  ///< ||f - reproduced||_2 / ||f||_2 (0 for f = 0)
};

/// pi_phi(phi_t * f) over the level range; the same code path as pi_phi, so
/// both agree bit for bit.
CalderonResult calderon_reproduce(std::span<const double> f, const AdmissibleWavelet& w,
                                  LevelRange range = {});

/// Monomial exponents of total degree <= s (n <= 2), in graded order.
std::vector<std::array<int, 2>> multi_indices(int dim, int s);

struct Molecule {
  Ball ball;
  double q = 2.0;
  int s = 0;
  double epsilon = 1.0;
  std::vector<double> annulus_norms;   ///< ||alpha||_{L^q(U_j)}, j = 0..J
  std::vector<double> annulus_bounds;  ///< 2^{-j eps} |2^j B|^{1/q} / ||chi_B||
  std::vector<double> margins;
  /// |int alpha z^beta| / int |alpha| |z|^{|beta|}, z = (x - c_B) / r_B.
  std::vector<double> moment_residuals;
  double max_margin() const;
  double max_moment_residual() const;
  bool passes(double margin_cap = 10.0, double moment_tol = 1e-8) const {
    return max_margin() <= margin_cap && max_moment_residual() <= moment_tol;
  }
};

/// Annular L^q norms around B (U_0 = B, U_j = 2^j B \ 2^{j-1} B, exact ball
/// measures), their margins and the normalised moment residuals.
Molecule validate_molecule(const SpatialGrid& grid, std::span<const double> alpha, const Ball& ball,
                           double q, int s, double epsilon, const GrowthFunction& phi,
                           std::optional<double> indicator_norm = std::nullopt);

struct ProjectionPieces {
  Ball ball;
  int s = 0;
  std::vector<std::array<int, 2>> exponents;
  std::vector<GridFunction> atom_parts;      ///< alpha_k - P_k
  std::vector<GridFunction> polynomial_parts;  ///< P_k
  /// tails[k][l] = sum_{i >= k} int_{U_i} alpha z^l dx.
  std::vector<std::vector<double>> tails;
  /// telescoped[k][l] = N^{k+1}_l (e_{l,k+1} - e_{l,k}).
  std::vector<std::vector<GridFunction>> telescoped;
  GridFunction remainder;                    ///< sum_l N^0_l e_{l,0}
  double reassembly_residual = 0.0;          ///< max |sum of pieces - alpha| / max |alpha|
  double atom_moment_residual = 0.0;         ///< worst normalised moment of alpha_k - P_k
  double dual_basis_residual = 0.0;          ///< max |int z^g Q_b / |U_k| - delta|
  double piece_moment_residual = 0.0;        ///< worst normalised moment of any b^k_l
  double leading_tail = 0.0;                 ///< max_l |N^0_l| / int |alpha| |z|^{|l|}
};

/// Annulus-by-annulus projection onto polynomials of degree <= s, in ball
/// coordinates z = (x - c_B) / r_B, with the telescoped correction pieces.
ProjectionPieces molecule_to_atoms(const SpatialGrid& grid, std::span<const double> alpha,
                                   const Ball& ball, int s);

/// ||S(f)||_{L^phi}.
double hardy_s_quasinorm(const AdmissibleWavelet& w, std::span<const double> f,
                         const GrowthFunction& phi);

struct PipelineOptions {
  double gamma = 0.5;
  double threshold = 1e-9;  ///< |F| below this fraction of max |F| is dropped
  double q = 2.0;
  int s = 1;
  double epsilon = 1.5;
};

struct MoleculeRow {
  int k = 0;
  int j = 0;
  double coefficient = 0.0;
  double max_margin = 0.0;
  double max_moment_residual = 0.0;
  bool passes = false;
};

struct PipelineReport {
  DecompositionReport decomposition;
  std::vector<MoleculeRow> molecules;
  GridFunction reconstruction;
  double reconstruction_error = 0.0;  ///< relative L^2 vs f
  double calderon_residual = 0.0;
  double lambda_value = 0.0;
  double quasinorm = 0.0;             ///< ||f||_{H_{phi,S}}
  double ratio = 0.0;
  std::size_t dropped_nodes = 0;      ///< below the threshold
};

PipelineReport molecular_pipeline(std::span<const double> f, const AdmissibleWavelet& w,
                                  const GrowthFunction& phi, const PipelineOptions& opts = {});

}  // namespace mohardy
