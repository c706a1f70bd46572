#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mohardy/functionals.hpp"
#include "mohardy/halfspace.hpp"

namespace mohardy {

/// One atom a_{k,j} stored sparsely: node ids (level * cells + cell) in
/// increasing order and the atom values there.
struct TentAtom {
  int k = 0;
  int j = 0;
  WhitneyCube cube;
  Ball ball;
  double coefficient = 0.0;     ///< 2^k ||chi_B||
  double indicator_norm = 0.0;  ///< ||chi_B||_{L^phi}
  std::vector<std::size_t> nodes;
  std::vector<double> values;

  TentFunction dense(const HalfSpaceGrid& grid) const;
};

struct DecompositionReport {
  std::vector<TentAtom> atoms;          ///< k descending, then Whitney order
  double lambda_value = 0.0;
  double input_norm = 0.0;              ///< ||f||_{T_phi}
  double reconstruction_residual = 0.0; ///< max |f - sum lambda a| over nodes
  double max_abs_input = 0.0;
  double implied_constant = 0.0;        ///< lambda_value / input_norm
  double gamma = 0.5;
  int k_min = 0, k_max = 0;
  std::size_t unassigned_nodes = 0;     ///< support nodes outside every region
  std::size_t resolution_loss_cubes = 0;
  std::vector<int> node_atom;           ///< atom rank per node, -1 if none
};

/// Level sets of A(f), their density hulls, Whitney cubes, balls of radius
/// 11/2 sqrt(n) side and the atoms on the regions between consecutive hull
/// tents. Nodes of the support that fall in no region are counted in
/// unassigned_nodes and show up in the residual.
DecompositionReport decompose(const TentFunction& f, const GrowthFunction& phi, double gamma = 0.5);

struct AtomValidation {
  bool support_ok = true;
  std::vector<double> p;
  std::vector<double> norms;    ///< ||a||_{T^p_2}
  std::vector<double> bounds;   ///< |B|^{1/p} / ||chi_B||
  std::vector<double> margins;  ///< norms / bounds
  double max_margin() const;
  bool passes(double cap = 10.0) const { return support_ok && max_margin() <= cap; }
};

/// Support in the tent of B and the size condition for each p. |B| is the
/// grid measure of B; the indicator norm is computed if not supplied.
AtomValidation validate_tent_atom(const TentFunction& a, const Ball& ball, const GrowthFunction& phi,
                                  std::span<const double> p_list,
                                  std::optional<double> indicator_norm = std::nullopt);

struct TailPoint {
  std::size_t atoms_used = 0;
  double tail_phi = 0.0;  ///< ||f - partial sum||_{T_phi}
  double tail_p = 0.0;    ///< ||f - partial sum||_{T^p_2}
};

struct TailProfile {
  std::vector<TailPoint> points;
  bool monotone = true;
};

/// Tails after the first N atoms in canonical order, at up to `checkpoints`
/// evenly spaced N (always including 0 and the full count).
TailProfile convergence_check(const DecompositionReport& report, const TentFunction& f,
                              const GrowthFunction& phi, double p, int checkpoints = 16);

struct InclusionRecord {
  double t22 = 0.0;
  double t_phi = 0.0;
  std::optional<double> ratio;  ///< empty when ||f||_{T_phi} = 0
};

InclusionRecord inclusion_check(const TentFunction& f, const GrowthFunction& phi);

}  // namespace mohardy
