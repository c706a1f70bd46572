#include "mohardy/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "mohardy/error.hpp"
#include "mohardy/parallel.hpp"
#include "mohardy/summation.hpp"
#include "spectral.hpp"

namespace mohardy {

namespace {

void accumulate_level(const AdmissibleWavelet& w, const detail::SpectralGrid& spec,
                      const detail::Spectrum& values, double t, detail::Spectrum& acc) {
  const auto radial = spec.radial_frequency();
  const double lr = w.levels.log_ratio();
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += values[k] * (w.fourier(t * radial[k]) * lr);
}

double l2(std::span<const double> v) {
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = v[i] * v[i];
  return std::sqrt(pairwise_sum(sq));
}

}  // namespace

GridFunction pi_phi(const TentFunction& F, const AdmissibleWavelet& w, LevelRange range) {
  if (!(F.grid == w.levels)) throw PreconditionError("pi_phi: tent function and wavelet grids differ");
  const detail::SpectralGrid spec(w.levels.base());
  const int levels = w.levels.levels();
  std::vector<detail::Spectrum> per_level(static_cast<std::size_t>(levels));
  parallel_for(per_level.size(), [&](std::size_t ms) {
    const int m = static_cast<int>(ms);
    const double t = w.levels.t(m);
    if (!range.contains(t)) return;
    const auto row = F.level(m);
    if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) return;
    detail::Spectrum acc(spec.spectrum_size());
    accumulate_level(w, spec, spec.forward(row), t, acc);
    per_level[ms] = std::move(acc);
  });
  detail::Spectrum total(spec.spectrum_size());
  for (const auto& s : per_level) {
    if (s.empty()) continue;
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += s[k];
  }
  return spec.inverse(total);
}

GridFunction pi_phi(const TentAtom& atom, const AdmissibleWavelet& w) {
  const detail::SpectralGrid spec(w.levels.base());
  const std::size_t cells = w.levels.base().size();
  detail::Spectrum total(spec.spectrum_size());
  std::size_t i = 0;
  while (i < atom.nodes.size()) {
    const std::size_t level = atom.nodes[i] / cells;
    std::vector<double> padded(spec.real_size(), 0.0);
    while (i < atom.nodes.size() && atom.nodes[i] / cells == level) {
      padded[spec.padded_index(atom.nodes[i] % cells)] = atom.values[i];
      ++i;
    }
    accumulate_level(w, spec, spec.forward_padded(padded), w.levels.t(static_cast<int>(level)), total);
  }
  return spec.inverse(total);
}

CalderonResult calderon_reproduce(std::span<const double> f, const AdmissibleWavelet& w,
                                  LevelRange range) {
  bool any = false;
  for (double t : w.levels.t_values()) any = any || range.contains(t);
  if (!any) throw PreconditionError("calderon_reproduce: empty level range");
  CalderonResult r;
  r.reproduced = pi_phi(wavelet_transform(w, f), w, range);
  const double norm = l2(f);
  if (norm > 0.0) {
    std::vector<double> diff(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) diff[i] = f[i] - r.reproduced[i];
    r.relative_residual = l2(diff) / norm;
  }
  return r;
}

std::vector<std::array<int, 2>> multi_indices(int dim, int s) {
  std::vector<std::array<int, 2>> out;
  for (int d = 0; d <= s; ++d) {
    if (dim == 1) {
      out.push_back({d, 0});
    } else {
      for (int a = d; a >= 0; --a) out.push_back({a, d - a});
    }
  }
  return out;
}

namespace {

double monomial(const Point& z, const std::array<int, 2>& e) {
  double v = 1.0;
  for (int i = 0; i < e[0]; ++i) v *= z[0];
  for (int i = 0; i < e[1]; ++i) v *= z[1];
  return v;
}

int degree(const std::array<int, 2>& e) { return e[0] + e[1]; }

Point ball_coordinates(const Point& x, const Ball& b) {
  return {(x[0] - b.center[0]) / b.radius, (x[1] - b.center[1]) / b.radius};
}

// U_0 = B, U_j = 2^j B \ 2^{j-1} B for open balls.
int annulus_index(double distance, double radius) {
  if (distance < radius) return 0;
  int j = 1;
  while (distance >= std::ldexp(radius, j)) ++j;
  return j;
}

std::vector<int> annuli(const SpatialGrid& grid, const Ball& ball) {
  std::vector<int> a(grid.size());
  for (std::size_t c = 0; c < a.size(); ++c) {
    a[c] = annulus_index(distance(grid.center(c), ball.center), ball.radius);
  }
  return a;
}

// Worst |int v z^b| / int |v| |z|^{|b|} over the exponents.
double normalised_moments(const SpatialGrid& grid, std::span<const double> v, const Ball& ball,
                          const std::vector<std::array<int, 2>>& exps, std::vector<double>* each) {
  double worst = 0.0;
  std::vector<double> num(v.size()), den(v.size());
  for (const auto& e : exps) {
    for (std::size_t c = 0; c < v.size(); ++c) {
      const Point z = ball_coordinates(grid.center(c), ball);
      num[c] = v[c] * monomial(z, e);
      den[c] = std::abs(v[c]) * std::pow(std::hypot(z[0], z[1]), degree(e));
    }
    const double d = pairwise_sum(den);
    const double r = d > 0.0 ? std::abs(pairwise_sum(num)) / d : 0.0;
    if (each) each->push_back(r);
    worst = std::max(worst, r);
  }
  return worst;
}

// Dual basis of the monomials cols[g] under <u, v> = weight * sum u v: the
// functions Q_b in their span with <cols[g], Q_b> = delta_{gb}. Uses a QR
// factorisation (Gram-Schmidt with one reorthogonalisation pass) rather than
// the normal equations, whose conditioning is squared on clipped annuli.
std::vector<std::vector<double>> dual_basis(const std::vector<std::vector<double>>& cols,
                                            double weight, int annulus) {
  const std::size_t n = cols.size();
  const std::size_t len = cols.empty() ? 0 : cols[0].size();
  auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<double> buf(len);
    for (std::size_t i = 0; i < len; ++i) buf[i] = u[i] * v[i];
    return pairwise_sum(buf) * weight;
  };
  std::vector<std::vector<double>> q(n);
  std::vector<double> r(n * n, 0.0);  // cols = q r, r upper triangular
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> v = cols[j];
    const double original = std::sqrt(dot(v, v));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const double c = dot(q[i], v);
        r[i * n + j] += c;
        for (std::size_t t = 0; t < len; ++t) v[t] -= c * q[i][t];
      }
    }
    const double norm = std::sqrt(dot(v, v));
    if (!(norm > 1e-12 * original)) {
      throw NumericalError("molecule_to_atoms: singular Gram system on annulus " +
                           std::to_string(annulus));
    }
    r[j * n + j] = norm;
    for (double& x : v) x /= norm;
    q[j] = std::move(v);
  }
  // Q_b = sum_i q_i (r^{-1})_{b i}; r^{-1} is upper triangular.
  std::vector<double> rinv(n * n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    rinv[c * n + c] = 1.0 / r[c * n + c];
    for (std::size_t i = c; i-- > 0;) {
      double s = 0.0;
      for (std::size_t t = i + 1; t <= c; ++t) s += r[i * n + t] * rinv[t * n + c];
      rinv[i * n + c] = -s / r[i * n + i];
    }
  }
  std::vector<std::vector<double>> dual(n, std::vector<double>(len, 0.0));
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t i = 0; i < n; ++i) {
      const double c = rinv[b * n + i];
      if (c == 0.0) continue;
      for (std::size_t t = 0; t < len; ++t) dual[b][t] += c * q[i][t];
    }
  return dual;
}

}  // namespace

double Molecule::max_margin() const {
  double m = 0.0;
  for (double v : margins) m = std::max(m, v);
  return m;
}

double Molecule::max_moment_residual() const {
  double m = 0.0;
  for (double v : moment_residuals) m = std::max(m, v);
  return m;
}

Molecule validate_molecule(const SpatialGrid& grid, std::span<const double> alpha, const Ball& ball,
                           double q, int s, double epsilon, const GrowthFunction& phi,
                           std::optional<double> indicator_norm_value) {
  if (alpha.size() != grid.size()) throw PreconditionError("validate_molecule: size mismatch");
  if (!(q >= 1.0)) throw DomainError("validate_molecule: q must be >= 1");
  Molecule mol;
  mol.ball = ball;
  mol.q = q;
  mol.s = s;
  mol.epsilon = epsilon;
  const double chi = indicator_norm_value ? *indicator_norm_value : indicator_norm(phi, grid, ball);
  const auto index = annuli(grid, ball);
  const int J = *std::max_element(index.begin(), index.end());
  std::vector<std::vector<double>> terms(static_cast<std::size_t>(J) + 1);
  std::vector<double> peak(static_cast<std::size_t>(J) + 1, 0.0);
  for (std::size_t c = 0; c < alpha.size(); ++c) {
    const auto j = static_cast<std::size_t>(index[c]);
    if (std::isinf(q)) {
      peak[j] = std::max(peak[j], std::abs(alpha[c]));
    } else {
      terms[j].push_back(std::pow(std::abs(alpha[c]), q));
    }
  }
  const double vol = unit_ball_volume(grid.dim());
  for (int j = 0; j <= J; ++j) {
    const auto js = static_cast<std::size_t>(j);
    const double norm = std::isinf(q) ? peak[js]
                                      : std::pow(pairwise_sum(terms[js]) * grid.cell_volume(), 1.0 / q);
    const double measure = vol * std::pow(std::ldexp(ball.radius, j), grid.dim());
    const double bound = std::exp2(-j * epsilon) *
                         (std::isinf(q) ? 1.0 : std::pow(measure, 1.0 / q)) / chi;
    mol.annulus_norms.push_back(norm);
    mol.annulus_bounds.push_back(bound);
    mol.margins.push_back(norm / bound);
  }
  normalised_moments(grid, alpha, ball, multi_indices(grid.dim(), s), &mol.moment_residuals);
  return mol;
}

ProjectionPieces molecule_to_atoms(const SpatialGrid& grid, std::span<const double> alpha,
                                   const Ball& ball, int s) {
  if (alpha.size() != grid.size()) throw PreconditionError("molecule_to_atoms: size mismatch");
  if (s < 0 || s > 2) throw DomainError("molecule_to_atoms: supported moment orders are 0, 1, 2");
  ProjectionPieces out;
  out.ball = ball;
  out.s = s;
  out.exponents = multi_indices(grid.dim(), s);
  const auto& exps = out.exponents;
  const std::size_t nb = exps.size();
  const auto index = annuli(grid, ball);
  const int J = *std::max_element(index.begin(), index.end());
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(J) + 1);
  for (std::size_t c = 0; c < index.size(); ++c) members[static_cast<std::size_t>(index[c])].push_back(c);
  // The domain edge can clip the outermost annulus to a sliver too thin to
  // carry a polynomial fit; fold it into its inner neighbour.
  while (members.size() > 1 && members.back().size() < 2 * nb) {
    auto& inner = members[members.size() - 2];
    inner.insert(inner.end(), members.back().begin(), members.back().end());
    std::sort(inner.begin(), inner.end());
    members.pop_back();
  }
  const std::size_t K = members.size();
  const double dv = grid.cell_volume();

  std::vector<Point> z(grid.size());
  for (std::size_t c = 0; c < z.size(); ++c) z[c] = ball_coordinates(grid.center(c), ball);

  // e[k][b] = Q_{b,k} chi_{U_k} / |U_k| on the grid; m[k][b] = int_{U_k} alpha z^b.
  std::vector<std::vector<GridFunction>> e(K, std::vector<GridFunction>(nb));
  std::vector<std::vector<double>> m(K, std::vector<double>(nb, 0.0));
  for (std::size_t k = 0; k < K; ++k) {
    const auto& cells = members[k];
    for (auto& v : e[k]) v.assign(grid.size(), 0.0);
    if (cells.empty()) continue;
    const double measure = grid.measure(cells.size());
    const double shrink = std::ldexp(1.0, -static_cast<int>(k));  // w = z / 2^k
    std::vector<std::vector<double>> wpow(nb, std::vector<double>(cells.size()));
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const Point& zz = z[cells[i]];
        wpow[b][i] = monomial({zz[0] * shrink, zz[1] * shrink}, exps[b]);
      }
    }
    const auto dual = dual_basis(wpow, dv / measure, static_cast<int>(k));
    std::vector<double> buf(cells.size());
    for (std::size_t b = 0; b < nb; ++b) {
      // Q_b = 2^{-k|b|} Q~_b(z / 2^k).
      const double rescale = std::pow(shrink, degree(exps[b]));
      for (std::size_t i = 0; i < cells.size(); ++i) e[k][b][cells[i]] = rescale * dual[b][i] / measure;
      for (std::size_t g = 0; g < nb; ++g) {
        // (1/|U|) int w^g Q~_b - delta
        for (std::size_t i = 0; i < cells.size(); ++i) buf[i] = wpow[g][i] * dual[b][i];
        const double v = pairwise_sum(buf) * dv / measure - (g == b ? 1.0 : 0.0);
        out.dual_basis_residual = std::max(out.dual_basis_residual, std::abs(v));
      }
      for (std::size_t i = 0; i < cells.size(); ++i) buf[i] = alpha[cells[i]] * monomial(z[cells[i]], exps[b]);
      m[k][b] = pairwise_sum(buf) * dv;
    }
  }

  out.atom_parts.assign(K, GridFunction(grid.size(), 0.0));
  out.polynomial_parts.assign(K, GridFunction(grid.size(), 0.0));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t c : members[k]) {
      double p = 0.0;
      for (std::size_t b = 0; b < nb; ++b) p += m[k][b] * e[k][b][c];
      out.polynomial_parts[k][c] = p;
      out.atom_parts[k][c] = alpha[c] - p;
    }
    if (!members[k].empty()) {
      out.atom_moment_residual = std::max(
          out.atom_moment_residual, normalised_moments(grid, out.atom_parts[k], ball, exps, nullptr));
    }
  }

  out.tails.assign(K + 1, std::vector<double>(nb, 0.0));
  for (std::size_t k = K; k-- > 0;) {
    for (std::size_t b = 0; b < nb; ++b) out.tails[k][b] = out.tails[k + 1][b] + m[k][b];
  }
  out.telescoped.assign(K, std::vector<GridFunction>(nb));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t b = 0; b < nb; ++b) {
      GridFunction piece(grid.size(), 0.0);
      if (k + 1 < K) {
        const double n = out.tails[k + 1][b];
        for (std::size_t c = 0; c < piece.size(); ++c) piece[c] = n * (e[k + 1][b][c] - e[k][b][c]);
        out.piece_moment_residual =
            std::max(out.piece_moment_residual, normalised_moments(grid, piece, ball, exps, nullptr));
      }
      out.telescoped[k][b] = std::move(piece);
    }
  }
  out.remainder.assign(grid.size(), 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t c = 0; c < grid.size(); ++c) out.remainder[c] += out.tails[0][b] * e[0][b][c];
  }

  double amax = 0.0, worst = 0.0;
  for (double v : alpha) amax = std::max(amax, std::abs(v));
  for (std::size_t c = 0; c < grid.size(); ++c) {
    double sum = out.remainder[c];
    for (std::size_t k = 0; k < K; ++k) {
      sum += out.atom_parts[k][c];
      for (std::size_t b = 0; b < nb; ++b) sum += out.telescoped[k][b][c];
    }
    worst = std::max(worst, std::abs(sum - alpha[c]));
  }
  out.reassembly_residual = amax > 0.0 ? worst / amax : worst;

  std::vector<double> den(grid.size());
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t c = 0; c < grid.size(); ++c) {
      den[c] = std::abs(alpha[c]) * std::pow(std::hypot(z[c][0], z[c][1]), degree(exps[b]));
    }
    const double d = pairwise_sum(den) * dv;
    if (d > 0.0) out.leading_tail = std::max(out.leading_tail, std::abs(out.tails[0][b]) / d);
  }
  return out;
}

double hardy_s_quasinorm(const AdmissibleWavelet& w, std::span<const double> f,
                         const GrowthFunction& phi) {
  return luxembourg_norm(phi, w.levels.base(), lusin_area(w, f)).norm;
}

PipelineReport molecular_pipeline(std::span<const double> f, const AdmissibleWavelet& w,
                                  const GrowthFunction& phi, const PipelineOptions& opts) {
  const SpatialGrid& grid = w.levels.base();
  if (f.size() != grid.size()) throw PreconditionError("molecular_pipeline: size mismatch");
  PipelineReport report;
  report.reconstruction.assign(grid.size(), 0.0);
  const double fnorm = l2(f);
  if (fnorm == 0.0) return report;

  TentFunction F = wavelet_transform(w, f);
  report.calderon_residual = calderon_reproduce(f, w).relative_residual;
  const double cut = opts.threshold * F.max_abs();
  for (double& v : F.values) {
    if (v != 0.0 && std::abs(v) < cut) {
      v = 0.0;
      ++report.dropped_nodes;
    }
  }
  report.decomposition = decompose(F, phi, opts.gamma);
  const auto& atoms = report.decomposition.atoms;

  std::vector<GridFunction> molecules(atoms.size());
  report.molecules.resize(atoms.size());
  parallel_for(atoms.size(), [&](std::size_t i) {
    molecules[i] = pi_phi(atoms[i], w);
    const Molecule mol = validate_molecule(grid, molecules[i], atoms[i].ball, opts.q, opts.s,
                                           opts.epsilon, phi, atoms[i].indicator_norm);
    report.molecules[i] = {atoms[i].k, atoms[i].j, atoms[i].coefficient, mol.max_margin(),
                           mol.max_moment_residual(), mol.passes()};
  });
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t c = 0; c < grid.size(); ++c) {
      report.reconstruction[c] += atoms[i].coefficient * molecules[i][c];
    }
  }
  std::vector<double> diff(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) diff[c] = f[c] - report.reconstruction[c];
  report.reconstruction_error = l2(diff) / fnorm;

  std::vector<LambdaTerm> terms;
  for (const auto& a : atoms) terms.push_back({a.coefficient, a.ball, a.indicator_norm});
  report.lambda_value = lambda_functional(phi, grid, terms);
  report.quasinorm = hardy_s_quasinorm(w, f, phi);
  report.ratio = report.quasinorm > 0.0 ? report.lambda_value / report.quasinorm : 0.0;
  return report;
}

}  // namespace mohardy
