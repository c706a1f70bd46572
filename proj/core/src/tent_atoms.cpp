#include "mohardy/tent_atoms.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mohardy/error.hpp"
#include "mohardy/parallel.hpp"

namespace mohardy {

TentFunction TentAtom::dense(const HalfSpaceGrid& grid) const {
  TentFunction out(grid);
  for (std::size_t i = 0; i < nodes.size(); ++i) out.values[nodes[i]] = values[i];
  return out;
}

namespace {

struct Level {
  int k = 0;
  std::vector<double> distance;   // to the complement of the hull
  std::vector<WhitneyCube> cubes;
  std::vector<int> cube_of_cell;  // -1 off the hull
};

}  // namespace

DecompositionReport decompose(const TentFunction& f, const GrowthFunction& phi, double gamma) {
  const HalfSpaceGrid& hs = f.grid;
  const SpatialGrid& grid = hs.base();
  const std::size_t cells = grid.size();
  DecompositionReport report;
  report.gamma = gamma;
  report.node_atom.assign(f.values.size(), -1);
  report.max_abs_input = f.max_abs();

  const GridFunction area = area_functional(f);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double v : area) {
    if (v > 0.0) lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == 0.0) {
    // The area functional only vanishes identically when f does.
    for (double v : f.values) {
      if (v != 0.0) ++report.unassigned_nodes;
    }
    report.reconstruction_residual = report.max_abs_input;
    return report;
  }
  report.input_norm = luxembourg_norm(phi, grid, area).norm;
  report.k_min = static_cast<int>(std::floor(std::log2(lo))) - 1;
  report.k_max = static_cast<int>(std::ceil(std::log2(hi)));

  const int count = report.k_max - report.k_min + 1;
  std::vector<Level> levels(static_cast<std::size_t>(count));
  parallel_for(levels.size(), [&](std::size_t i) {
    Level& L = levels[i];
    L.k = report.k_min + static_cast<int>(i);
    const double threshold = std::ldexp(1.0, L.k);
    CellMask o(cells, 0);
    bool any = false;
    for (std::size_t c = 0; c < cells; ++c) {
      o[c] = area[c] > threshold ? 1 : 0;
      any = any || o[c];
    }
    L.distance.assign(cells, 0.0);
    L.cube_of_cell.assign(cells, -1);
    if (!any) return;
    const CellMask hull = gamma_density_complement(grid, o, gamma);
    L.distance = distance_to_complement(grid, hull);
    L.cubes = whitney_decomposition(grid, hull, L.k);
    for (std::size_t q = 0; q < L.cubes.size(); ++q) {
      for (std::size_t c : cube_cells(grid, L.cubes[q])) L.cube_of_cell[c] = static_cast<int>(q);
    }
  });
  for (const Level& L : levels) {
    for (const auto& q : L.cubes) {
      if (q.resolution_loss) ++report.resolution_loss_cubes;
    }
  }

  const double root_n = std::sqrt(static_cast<double>(grid.dim()));
  auto ball_of = [&](const WhitneyCube& q) { return Ball{q.center, 5.5 * root_n * q.side}; };

  // Node -> (level index, cube) -> atom slot.
  std::map<std::pair<int, int>, std::vector<std::size_t>> members;
  for (int m = 0; m < hs.levels(); ++m) {
    const double t = hs.t(m);
    for (std::size_t c = 0; c < cells; ++c) {
      const std::size_t node = static_cast<std::size_t>(m) * cells + c;
      if (f.values[node] == 0.0) continue;
      int chosen = -1;
      for (int i = count - 1; i >= 0; --i) {
        if (in_set_tent(levels[static_cast<std::size_t>(i)].distance[c], t)) {
          chosen = i;
          break;
        }
      }
      if (chosen < 0) {
        ++report.unassigned_nodes;
        continue;
      }
      const Level& L = levels[static_cast<std::size_t>(chosen)];
      const int q = L.cube_of_cell[c];
      if (q < 0 || !in_tent(ball_of(L.cubes[static_cast<std::size_t>(q)]), grid.center(c), t)) {
        ++report.unassigned_nodes;
        continue;
      }
      members[{-chosen, q}].push_back(node);  // k descending, then cube order
    }
  }

  IndicatorNormCache cache(phi, grid);
  report.atoms.reserve(members.size());
  for (auto& [key, nodes] : members) {
    const Level& L = levels[static_cast<std::size_t>(-key.first)];
    TentAtom a;
    a.k = L.k;
    a.j = key.second;
    a.cube = L.cubes[static_cast<std::size_t>(key.second)];
    a.ball = ball_of(a.cube);
    a.nodes = std::move(nodes);
    report.atoms.push_back(std::move(a));
  }
  parallel_for(report.atoms.size(), [&](std::size_t i) {
    TentAtom& a = report.atoms[i];
    a.indicator_norm = cache(a.ball);
    const double scale = std::ldexp(1.0, -a.k) / a.indicator_norm;
    a.coefficient = std::ldexp(a.indicator_norm, a.k);
    a.values.resize(a.nodes.size());
    for (std::size_t n = 0; n < a.nodes.size(); ++n) a.values[n] = scale * f.values[a.nodes[n]];
  });

  std::vector<double> recon(f.values.size(), 0.0);
  for (std::size_t i = 0; i < report.atoms.size(); ++i) {
    const TentAtom& a = report.atoms[i];
    for (std::size_t n = 0; n < a.nodes.size(); ++n) {
      report.node_atom[a.nodes[n]] = static_cast<int>(i);
      recon[a.nodes[n]] += a.coefficient * a.values[n];
    }
  }
  for (std::size_t node = 0; node < recon.size(); ++node) {
    report.reconstruction_residual =
        std::max(report.reconstruction_residual, std::abs(f.values[node] - recon[node]));
  }

  std::vector<LambdaTerm> terms;
  terms.reserve(report.atoms.size());
  for (const auto& a : report.atoms) terms.push_back({a.coefficient, a.ball, a.indicator_norm});
  report.lambda_value = lambda_functional(phi, grid, terms);
  report.implied_constant = report.lambda_value / report.input_norm;
  return report;
}

double AtomValidation::max_margin() const {
  double m = 0.0;
  for (double v : margins) m = std::max(m, v);
  return m;
}

AtomValidation validate_tent_atom(const TentFunction& a, const Ball& ball, const GrowthFunction& phi,
                                  std::span<const double> p_list,
                                  std::optional<double> indicator_norm_value) {
  const HalfSpaceGrid& hs = a.grid;
  const SpatialGrid& grid = hs.base();
  AtomValidation v;
  for (int m = 0; m < hs.levels() && v.support_ok; ++m) {
    const auto row = a.level(m);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] != 0.0 && !in_tent(ball, grid.center(c), hs.t(m))) {
        v.support_ok = false;
        break;
      }
    }
  }
  const double chi = indicator_norm_value ? *indicator_norm_value : indicator_norm(phi, grid, ball);
  const double measure = grid.measure(grid.cells_in_ball(ball).size());
  for (double p : p_list) {
    const double norm = tent_norm_p(a, p);
    const double bound = std::pow(measure, 1.0 / p) / chi;
    v.p.push_back(p);
    v.norms.push_back(norm);
    v.bounds.push_back(bound);
    v.margins.push_back(norm / bound);
  }
  return v;
}

TailProfile convergence_check(const DecompositionReport& report, const TentFunction& f,
                              const GrowthFunction& phi, double p, int checkpoints) {
  const std::size_t total = report.atoms.size();
  std::vector<std::size_t> stops;
  const int pieces = std::max(1, checkpoints - 1);
  for (int i = 0; i <= pieces; ++i) stops.push_back(total * static_cast<std::size_t>(i) / pieces);
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  // Value left at a node once its atom is included.
  std::vector<double> after(f.values.size());
  for (std::size_t node = 0; node < after.size(); ++node) after[node] = f.values[node];
  for (const auto& a : report.atoms) {
    for (std::size_t n = 0; n < a.nodes.size(); ++n) {
      after[a.nodes[n]] = f.values[a.nodes[n]] - a.coefficient * a.values[n];
    }
  }
  TailProfile out;
  out.points.resize(stops.size());
  parallel_for(stops.size(), [&](std::size_t s) {
    TentFunction tail(f.grid);
    for (std::size_t node = 0; node < tail.values.size(); ++node) {
      const int rank = report.node_atom[node];
      const bool used = rank >= 0 && static_cast<std::size_t>(rank) < stops[s];
      tail.values[node] = used ? after[node] : f.values[node];
    }
    out.points[s] = {stops[s], tent_norm_phi(tail, phi), tent_norm_p(tail, p)};
  });
  for (std::size_t s = 1; s < out.points.size(); ++s) {
    const auto& a = out.points[s - 1];
    const auto& b = out.points[s];
    if (b.tail_phi > a.tail_phi * (1 + 1e-12) || b.tail_p > a.tail_p * (1 + 1e-12)) {
      out.monotone = false;
    }
  }
  return out;
}

InclusionRecord inclusion_check(const TentFunction& f, const GrowthFunction& phi) {
  InclusionRecord r;
  r.t22 = tent_norm_p(f, 2.0);
  r.t_phi = tent_norm_phi(f, phi);
  if (r.t_phi > 0.0) r.ratio = r.t22 / r.t_phi;
  return r;
}

}  // namespace mohardy
