#include "mohardy/norms.hpp"

#include <algorithm>
#include <cmath>

#include "mohardy/error.hpp"
#include "mohardy/parallel.hpp"
#include "mohardy/summation.hpp"

namespace mohardy {

namespace {

struct Bisection {
  double lo = 0.0, hi = 0.0, value_at_hi = 0.0;
  int iterations = 0;
};

// Smallest lambda with modular(lambda) <= 1 for a nonincreasing modular that
// tends to 0 at infinity and exceeds 1 near 0.
template <class Modular>
Bisection solve_unit_level(Modular&& modular) {
  Bisection b;
  double lo = 1.0, hi = 1.0;
  double at_hi = modular(hi);
  if (at_hi <= 1.0) {
    lo = 0.5;
    while (modular(lo) <= 1.0) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) throw NumericalError("norm bisection: no lower bracket");
    }
    at_hi = modular(hi);
  } else {
    while (at_hi > 1.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) throw NumericalError("norm bisection: no upper bracket");
      at_hi = modular(hi);
    }
  }
  while (hi / lo - 1.0 > kNormTolerance) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    const double v = modular(mid);
    if (v <= 1.0) {
      hi = mid;
      at_hi = v;
    } else {
      lo = mid;
    }
    ++b.iterations;
  }
  b.lo = lo;
  b.hi = hi;
  b.value_at_hi = at_hi;
  return b;
}

}  // namespace

double luxembourg_modular(const GrowthFunction& phi, const SpatialGrid& grid,
                          std::span<const double> f, double lambda) {
  std::vector<double> terms(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    terms[c] = f[c] == 0.0 ? 0.0 : phi(grid.center(c), std::abs(f[c]) / lambda);
  }
  return pairwise_sum(terms) * grid.cell_volume();
}

LuxembourgResult luxembourg_norm(const GrowthFunction& phi, const SpatialGrid& grid,
                                 std::span<const double> f) {
  if (f.size() != grid.size()) throw PreconditionError("luxembourg_norm: size mismatch");
  std::vector<std::size_t> support;
  for (std::size_t c = 0; c < f.size(); ++c) {
    if (!std::isfinite(f[c])) throw DomainError("luxembourg_norm: non-finite sample");
    if (f[c] != 0.0) support.push_back(c);
  }
  LuxembourgResult out;
  if (support.empty()) {
    out.modular_defined = false;
    return out;
  }
  // Only the support contributes; keep its points and magnitudes.
  std::vector<Point> x(support.size());
  std::vector<double> a(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    x[i] = grid.center(support[i]);
    a[i] = std::abs(f[support[i]]);
  }
  std::vector<double> terms(support.size());
  const double dv = grid.cell_volume();
  auto modular = [&](double lambda) {
    for (std::size_t i = 0; i < a.size(); ++i) terms[i] = phi(x[i], a[i] / lambda);
    return pairwise_sum(terms) * dv;
  };
  const Bisection b = solve_unit_level(modular);
  out.norm = b.hi;
  out.modular_at_norm = b.value_at_hi;
  out.bracket_lo = b.lo;
  out.bracket_hi = b.hi;
  out.iterations = b.iterations;
  return out;
}

namespace {

// Solves W Phi(1 / lambda) = 1 for the product form w(x) Phi(t), where W is
// the weighted measure of the set.
double product_indicator_norm(const OrliczFunction& orlicz, double weighted_measure) {
  if (orlicz.shape == OrliczShape::Power) return std::pow(weighted_measure, 1.0 / orlicz.p);
  return solve_unit_level([&](double lambda) { return weighted_measure * orlicz(1.0 / lambda); }).hi;
}

}  // namespace

double indicator_norm(const GrowthFunction& phi, const SpatialGrid& grid, const Ball& ball) {
  const auto cells = grid.cells_in_ball(ball);
  if (cells.empty()) throw PreconditionError("indicator_norm: ball contains no grid cell");
  if (const auto* p = std::get_if<ProductForm>(&phi.form())) {
    std::vector<double> w(cells.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = p->weight(grid.center(cells[i]), phi.dim());
    return product_indicator_norm(p->orlicz, pairwise_sum(w) * grid.cell_volume());
  }
  const Bisection b =
      solve_unit_level([&](double lambda) { return modular_over_set(phi, grid, cells, 1.0 / lambda); });
  return b.hi;
}

std::vector<double> indicator_norms(const GrowthFunction& phi, const BallIndex& balls) {
  const SpatialGrid& grid = balls.grid();
  std::vector<double> out(balls.size());
  if (const auto* p = std::get_if<ProductForm>(&phi.form())) {
    GridFunction w(grid.size());
    for (std::size_t c = 0; c < w.size(); ++c) w[c] = p->weight(grid.center(c), phi.dim());
    const auto sums = balls.sums(w);
    parallel_for(out.size(), [&](std::size_t b) {
      if (balls.cell_count(b) == 0) throw PreconditionError("indicator_norms: empty ball");
      out[b] = product_indicator_norm(p->orlicz, sums[b] * grid.cell_volume());
    });
    return out;
  }
  parallel_for(out.size(), [&](std::size_t b) { out[b] = indicator_norm(phi, grid, balls.ball(b)); });
  return out;
}

double IndicatorNormCache::operator()(const Ball& ball) {
  const std::array<double, 3> key{ball.center[0], ball.center[1], ball.radius};
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double v = indicator_norm(phi_, grid_, ball);
  std::lock_guard lock(mutex_);
  cache_.emplace(key, v);
  return v;
}

double lq_phi_ball_norm(const GrowthFunction& phi, const SpatialGrid& grid,
                        std::span<const double> f, const Ball& ball, double q,
                        std::span<const double> t_grid) {
  if (!(q >= 1.0)) throw DomainError("lq_phi_ball_norm: q must be >= 1");
  if (f.size() != grid.size()) throw PreconditionError("lq_phi_ball_norm: size mismatch");
  const auto cells = grid.cells_in_ball(ball);
  {
    CellMask inside(grid.size(), 0);
    for (std::size_t c : cells) inside[c] = 1;
    for (std::size_t c = 0; c < f.size(); ++c) {
      if (f[c] != 0.0 && !inside[c]) {
        throw PreconditionError("lq_phi_ball_norm: f is not supported in the ball");
      }
    }
  }
  if (cells.empty()) return 0.0;
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t c : cells) m = std::max(m, std::abs(f[c]));
    return m;
  }
  std::vector<double> levels;
  if (phi.is_product()) {
    levels = {1.0};
  } else {
    if (t_grid.empty()) throw DomainError("lq_phi_ball_norm: empty t grid");
    levels.assign(t_grid.begin(), t_grid.end());
  }
  std::vector<double> num(cells.size()), den(cells.size());
  double best = 0.0;
  for (double t : levels) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double w = phi(grid.center(cells[i]), t);
      den[i] = w;
      num[i] = std::pow(std::abs(f[cells[i]]), q) * w;
    }
    const double d = pairwise_sum(den);
    if (!(d > 0.0)) continue;
    best = std::max(best, pairwise_sum(num) / d);
  }
  return std::pow(best, 1.0 / q);
}

double lambda_functional(const GrowthFunction& phi, const SpatialGrid& grid,
                         std::span<const LambdaTerm> terms) {
  struct Prepared {
    double coefficient;
    std::vector<Point> points;
    double weight_sum;  // product forms: sum of w over the ball
  };
  std::vector<Prepared> prepared;
  for (const auto& term : terms) {
    if (term.coefficient == 0.0) continue;
    if (!(term.indicator_norm > 0.0)) {
      throw PreconditionError("lambda_functional: indicator norm must be positive");
    }
    Prepared p{std::abs(term.coefficient) / term.indicator_norm, {}, 0.0};
    for (std::size_t c : grid.cells_in_ball(term.ball)) p.points.push_back(grid.center(c));
    prepared.push_back(std::move(p));
  }
  if (prepared.empty()) return 0.0;

  const ProductForm* product = std::get_if<ProductForm>(&phi.form());
  const double dv = grid.cell_volume();
  if (product != nullptr) {
    for (auto& p : prepared) {
      std::vector<double> w(p.points.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = product->weight(p.points[i], phi.dim());
      p.weight_sum = pairwise_sum(w) * dv;
    }
  }
  std::vector<double> contributions(prepared.size());
  auto modular = [&](double lambda) {
    parallel_for(prepared.size(), [&](std::size_t j) {
      const auto& p = prepared[j];
      const double t = p.coefficient / lambda;
      if (product != nullptr) {
        contributions[j] = p.weight_sum * product->orlicz(t);
      } else {
        std::vector<double> v(p.points.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = phi(p.points[i], t);
        contributions[j] = pairwise_sum(v) * dv;
      }
    });
    return pairwise_sum(contributions);
  };
  return solve_unit_level(modular).hi;
}

std::vector<LambdaTerm> make_lambda_terms(IndicatorNormCache& cache,
                                          std::span<const double> coefficients,
                                          std::span<const Ball> balls) {
  if (coefficients.size() != balls.size()) {
    throw PreconditionError("make_lambda_terms: coefficient and ball counts differ");
  }
  std::vector<LambdaTerm> out(balls.size());
  for (std::size_t j = 0; j < balls.size(); ++j) {
    out[j] = {coefficients[j], balls[j], cache(balls[j])};
  }
  return out;
}

}  // namespace mohardy
