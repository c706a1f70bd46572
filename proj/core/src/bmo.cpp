#include "mohardy/bmo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mohardy/error.hpp"
#include "mohardy/halfspace.hpp"
#include "mohardy/norms.hpp"
#include "mohardy/parallel.hpp"
#include "mohardy/summation.hpp"
#include "mohardy/weights.hpp"

namespace mohardy {

namespace {

// Differences against the first sample: a constant shift of b cancels before
// any averaging takes place.
GridFunction anchored(std::span<const double> b) {
  GridFunction d(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) d[i] = b[i] - b[0];
  return d;
}

// (|B|^{-1} int_B |d - d_B|^p)^{1/p} over the cells of one ball.
double mean_oscillation(std::span<const double> d, const std::vector<std::size_t>& cells, double p,
                        std::vector<double>& scratch) {
  scratch.resize(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) scratch[i] = d[cells[i]];
  const double mean = pairwise_sum(scratch) / static_cast<double>(cells.size());
  for (double& v : scratch) v = p == 1.0 ? std::abs(v - mean) : std::pow(std::abs(v - mean), p);
  const double avg = pairwise_sum(scratch) / static_cast<double>(cells.size());
  return p == 1.0 ? avg : std::pow(avg, 1.0 / p);
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace

double bmo_phi_norm(std::span<const double> b, const GrowthFunction& phi, const BallIndex& balls) {
  return bmo_phi_p_norm(b, phi, 1.0, balls);
}

double bmo_phi_p_norm(std::span<const double> b, const GrowthFunction& phi, double p,
                      const BallIndex& balls) {
  if (!(p >= 1.0)) throw DomainError("bmo_phi_p_norm: p must be >= 1");
  if (b.size() != balls.grid().size()) throw PreconditionError("bmo_phi_p_norm: size mismatch");
  if (b.empty()) return 0.0;
  const GridFunction d = anchored(b);
  const auto norms = indicator_norms(phi, balls);
  std::vector<double> value(balls.size(), 0.0);
  parallel_for(balls.size(), [&](std::size_t k) {
    const auto cells = balls.cells(k);
    if (cells.empty()) return;
    std::vector<double> scratch;
    value[k] = balls.measure(k) / norms[k] * mean_oscillation(d, cells, p, scratch);
  });
  return max_of(value);
}

double CarlesonMeasure::node_mass(int level, std::size_t cell) const {
  const SpatialGrid& g = grid.base();
  return density[static_cast<std::size_t>(level) * g.size() + cell] * g.cell_volume() *
         grid.t(level) * grid.log_ratio();
}

double carleson_norm(const CarlesonMeasure& mu, const GrowthFunction& phi, const BallIndex& balls) {
  const HalfSpaceGrid& hs = mu.grid;
  const SpatialGrid& grid = hs.base();
  if (!(grid == balls.grid())) throw PreconditionError("carleson_norm: grid mismatch");
  if (mu.density.size() != hs.node_count()) throw PreconditionError("carleson_norm: size mismatch");
  const std::size_t cells = grid.size();
  const int levels = hs.levels();

  // Per-level prefix sums of node masses (1-D).
  std::vector<std::vector<long double>> prefix;
  if (grid.dim() == 1) {
    prefix.assign(static_cast<std::size_t>(levels), std::vector<long double>(cells + 1, 0.0L));
    parallel_for(static_cast<std::size_t>(levels), [&](std::size_t m) {
      for (std::size_t i = 0; i < cells; ++i)
        prefix[m][i + 1] = prefix[m][i] + mu.node_mass(static_cast<int>(m), i);
    });
  }
  const auto norms = indicator_norms(phi, balls);
  const double h = grid.spacing();
  const double L = grid.half_width();
  const int n = grid.cells_per_axis();

  std::vector<double> value(balls.size(), 0.0);
  parallel_for(balls.size(), [&](std::size_t k) {
    const Ball& ball = balls.ball(k);
    if (balls.cell_count(k) == 0) return;
    long double mass = 0.0L;
    if (grid.dim() == 1) {
      const double c = ball.center[0];
      for (int m = 0; m < levels; ++m) {
        const double t = hs.t(m);
        const double reach = ball.radius - t;
        if (reach < 0.0) break;
        int lo = std::max(0, static_cast<int>(std::ceil((c - reach + L) / h - 0.5)) - 1);
        int hi = std::min(n - 1, static_cast<int>(std::floor((c + reach + L) / h - 0.5)) + 1);
        while (lo <= hi && !in_tent(ball, {grid.axis_center(lo), 0.0}, t)) ++lo;
        while (hi >= lo && !in_tent(ball, {grid.axis_center(hi), 0.0}, t)) --hi;
        if (lo > hi) continue;
        const auto& pm = prefix[static_cast<std::size_t>(m)];
        mass += pm[static_cast<std::size_t>(hi) + 1] - pm[static_cast<std::size_t>(lo)];
      }
    } else {
      const auto members = balls.cells(k);
      for (int m = 0; m < levels; ++m) {
        const double t = hs.t(m);
        if (ball.radius < t) break;
        for (std::size_t cell : members)
          if (in_tent(ball, grid.center(cell), t)) mass += mu.node_mass(m, cell);
      }
    }
    const double total = std::max(0.0, static_cast<double>(mass));
    value[k] = std::sqrt(balls.measure(k) * total) / norms[k];
  });
  return max_of(value);
}

CarlesonMeasure carleson_from_bmo(std::span<const double> b, const AdmissibleWavelet& w) {
  const TentFunction F = wavelet_transform(w, b);
  CarlesonMeasure mu{w.levels, std::vector<double>(F.values.size()), "|phi_t * b|^2 / t"};
  const std::size_t cells = F.cells();
  for (int m = 0; m < w.levels.levels(); ++m) {
    const double t = w.levels.t(m);
    for (std::size_t c = 0; c < cells; ++c) {
      const double v = F.at(m, c);
      mu.density[static_cast<std::size_t>(m) * cells + c] = v * v / t;
    }
  }
  return mu;
}

CarlesonExperiment carleson_experiment(std::span<const NamedFunction> family,
                                        const GrowthFunction& phi, const AdmissibleWavelet& w,
                                        const BallIndex& balls, double spread_cap) {
  CarlesonExperiment out;
  out.max_ratio = 0.0;
  out.min_ratio = std::numeric_limits<double>::infinity();
  bool finite = true;
  for (const auto& f : family) {
    CarlesonRow row{f.id, bmo_phi_norm(f.values, phi, balls), 0.0, 0.0};
    if (row.bmo == 0.0) throw PreconditionError("carleson_experiment: constant function " + f.id);
    row.carleson = carleson_norm(carleson_from_bmo(f.values, w), phi, balls);
    row.ratio = row.carleson / row.bmo;
    finite = finite && std::isfinite(row.ratio) && row.ratio > 0.0;
    out.max_ratio = std::max(out.max_ratio, row.ratio);
    out.min_ratio = std::min(out.min_ratio, row.ratio);
    out.rows.push_back(std::move(row));
  }
  out.spread = out.rows.empty() ? 0.0 : out.max_ratio / out.min_ratio;
  out.bounded = finite && !out.rows.empty() && out.spread <= spread_cap;
  return out;
}

PairingResult pairing_check(std::span<const double> f, std::span<const double> b,
                            const AdmissibleWavelet& w) {
  const SpatialGrid& grid = w.levels.base();
  if (f.size() != grid.size() || b.size() != grid.size())
    throw PreconditionError("pairing_check: size mismatch");
  std::vector<double> prod(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) prod[i] = f[i] * b[i];
  PairingResult r;
  r.lhs = pairwise_sum(prod) * grid.cell_volume();

  const TentFunction Ff = wavelet_transform(w, f);
  const TentFunction Fb = wavelet_transform(w, b);
  std::vector<double> level_sums(static_cast<std::size_t>(w.levels.levels()));
  parallel_for(level_sums.size(), [&](std::size_t m) {
    const auto a = Ff.level(static_cast<int>(m));
    const auto c = Fb.level(static_cast<int>(m));
    std::vector<double> p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * c[i];
    level_sums[m] = pairwise_sum(p);
  });
  r.rhs = pairwise_sum(level_sums) * grid.cell_volume() * w.levels.log_ratio();
  const double diff = std::abs(r.lhs - r.rhs);
  r.absolute = std::abs(r.lhs) < 1e-14;
  r.residual = r.absolute ? diff : diff / std::abs(r.lhs);
  return r;
}

JohnNirenbergResult john_nirenberg_experiment(const SpatialGrid& grid, std::span<const double> b,
                                              const Ball& ball, std::span<const double> lambdas) {
  if (b.size() != grid.size()) throw PreconditionError("john_nirenberg_experiment: size mismatch");
  const auto cells = grid.cells_in_ball(ball);
  if (cells.empty()) throw PreconditionError("john_nirenberg_experiment: empty ball");
  const GridFunction d = anchored(b);
  std::vector<double> dev(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) dev[i] = d[cells[i]];
  const double mean = pairwise_sum(dev) / static_cast<double>(dev.size());
  for (double& v : dev) v = std::abs(v - mean);

  JohnNirenbergResult out;
  out.oscillation = *std::max_element(dev.begin(), dev.end());
  out.monotone = true;
  double prev = 1.0;
  std::vector<double> xs, ys;
  for (double lambda : lambdas) {
    const auto count = std::count_if(dev.begin(), dev.end(), [&](double v) { return v > lambda; });
    const double frac = static_cast<double>(count) / static_cast<double>(dev.size());
    out.rows.push_back({lambda, frac});
    if (frac > prev) out.monotone = false;
    prev = frac;
    if (frac > 0.0) {
      xs.push_back(lambda);
      ys.push_back(std::log(frac));
    }
  }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    out.rate = den > 0.0 ? -(n * sxy - sx * sy) / den : 0.0;
  }
  const bool constant = out.oscillation == 0.0;
  out.decaying = out.monotone && (constant || out.rate > 0.0);
  return out;
}

OscillationIntegral oscillation_integral_check(std::span<const double> f, const Ball& ball, double epsilon,
                            const GrowthFunction& phi, const BallIndex& balls,
                            std::optional<double> bmo_norm) {
  const SpatialGrid& grid = balls.grid();
  if (f.size() != grid.size()) throw PreconditionError("oscillation_integral_check: size mismatch");
  if (!(epsilon > 0.0)) throw DomainError("oscillation_integral_check: epsilon must be positive");
  const int n = grid.dim();
  const auto cells = grid.cells_in_ball(ball);
  if (cells.empty()) throw PreconditionError("oscillation_integral_check: empty ball");

  OscillationIntegral r;
  const double q = declared_q_index(phi).value_or(1.0);
  r.epsilon_threshold = n * (q / phi.nominal_lower_type() - 1.0);
  if (!(epsilon > r.epsilon_threshold)) r.warning = "epsilon below the admissible threshold";

  const GridFunction d = anchored(f);
  std::vector<double> inside(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) inside[i] = d[cells[i]];
  const double mean = pairwise_sum(inside) / static_cast<double>(inside.size());

  const double delta = ball.radius;
  const double de = std::pow(delta, epsilon);
  const double dne = std::pow(delta, n + epsilon);
  std::vector<double> terms(grid.size());
  double osc = 0.0;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const double dev = std::abs(d[c] - mean);
    osc = std::max(osc, dev);
    const double dist = distance(grid.center(c), ball.center);
    terms[c] = de * dev / (dne + std::pow(dist, n + epsilon));
  }
  r.lhs = pairwise_sum(terms) * grid.cell_volume();

  // Outside the domain: |x - x0| >= R with R the distance from x0 to the
  // boundary, kernel <= delta^eps |x - x0|^{-(n+eps)}.
  double R = grid.half_width();
  for (int k = 0; k < n; ++k) R = std::min(R, grid.half_width() - std::abs(ball.center[k]));
  const double sphere = n == 1 ? 2.0 : 2.0 * std::numbers::pi;
  r.tail_bound = R > 0.0 ? osc * de * sphere * std::pow(R, -epsilon) / epsilon
                         : std::numeric_limits<double>::infinity();
  r.tail_significant = r.tail_bound > 1e-3 * r.lhs;

  const double bmo = bmo_norm ? *bmo_norm : bmo_phi_norm(f, phi, balls);
  r.rhs_scale = indicator_norm(phi, grid, ball) / grid.measure(cells.size()) * bmo;
  r.ratio = r.rhs_scale > 0.0 ? r.lhs / r.rhs_scale : 0.0;
  r.ratio_upper = r.rhs_scale > 0.0 ? (r.lhs + r.tail_bound) / r.rhs_scale : 0.0;
  return r;
}

}  // namespace mohardy
