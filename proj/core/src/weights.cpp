#include "mohardy/weights.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "mohardy/error.hpp"
#include "mohardy/parallel.hpp"

namespace mohardy {

namespace {

std::vector<double> levels_for(const GrowthFunction& phi, std::span<const double> t_grid) {
  // phi = w(x) Phi(t): the Phi(t) factor cancels in every ratio.
  if (phi.is_product()) return {1.0};
  if (t_grid.empty()) throw DomainError("weight constants: empty t grid");
  return {t_grid.begin(), t_grid.end()};
}

GridFunction sample_level(const GrowthFunction& phi, const SpatialGrid& grid, double t) {
  GridFunction w(grid.size());
  for (std::size_t c = 0; c < w.size(); ++c) w[c] = phi(grid.center(c), t);
  return w;
}

std::vector<double> counts(const BallIndex& balls) {
  std::vector<double> n(balls.size());
  for (std::size_t b = 0; b < n.size(); ++b) n[b] = static_cast<double>(balls.cell_count(b));
  return n;
}

}  // namespace

double muckenhoupt_constant(const GrowthFunction& phi, double q, const BallIndex& balls,
                            std::span<const double> t_grid) {
  if (!(q >= 1.0)) throw DomainError("muckenhoupt_constant: q must be >= 1");
  if (balls.size() == 0) throw DomainError("muckenhoupt_constant: empty ball family");
  const auto n = counts(balls);
  double worst = 0.0;
  for (double t : levels_for(phi, t_grid)) {
    const GridFunction w = sample_level(phi, balls.grid(), t);
    GridFunction zero(w.size()), dual(w.size());
    for (std::size_t c = 0; c < w.size(); ++c) {
      zero[c] = w[c] > 0.0 ? 0.0 : 1.0;
      if (q == 1.0) {
        dual[c] = w[c] > 0.0 ? 1.0 / w[c] : 0.0;
      } else {
        dual[c] = w[c] > 0.0 ? std::pow(w[c], -1.0 / (q - 1.0)) : 0.0;
      }
    }
    const auto zeros = balls.sums(zero);
    const auto s = balls.sums(w);
    const auto d = q == 1.0 ? balls.maxima(dual) : balls.sums(dual);
    for (std::size_t b = 0; b < balls.size(); ++b) {
      if (n[b] == 0.0) continue;
      if (zeros[b] > 0.0) return kDivergent;
      const double mean = s[b] / n[b];
      const double value = q == 1.0 ? mean * d[b] : mean * std::pow(d[b] / n[b], q - 1.0);
      worst = std::max(worst, value);
    }
  }
  return worst;
}

double reverse_holder_constant(const GrowthFunction& phi, double q, const BallIndex& balls,
                               std::span<const double> t_grid) {
  if (!(q > 1.0)) throw DomainError("reverse_holder_constant: q must exceed 1");
  if (balls.size() == 0) throw DomainError("reverse_holder_constant: empty ball family");
  const auto n = counts(balls);
  const bool sup_norm = std::isinf(q);
  double worst = 0.0;
  for (double t : levels_for(phi, t_grid)) {
    const GridFunction w = sample_level(phi, balls.grid(), t);
    GridFunction powered(w.size());
    if (!sup_norm) {
      for (std::size_t c = 0; c < w.size(); ++c) powered[c] = std::pow(w[c], q);
    }
    const auto s = balls.sums(w);
    const auto top = sup_norm ? balls.maxima(w) : balls.sums(powered);
    for (std::size_t b = 0; b < balls.size(); ++b) {
      if (n[b] == 0.0) continue;
      const double mean = s[b] / n[b];
      if (!(mean > 0.0)) return kDivergent;
      const double upper = sup_norm ? top[b] : std::pow(top[b] / n[b], 1.0 / q);
      worst = std::max(worst, upper / mean);
    }
  }
  return worst;
}

std::string to_string(RefinementTrend trend) {
  switch (trend) {
    case RefinementTrend::Stable: return "stable";
    case RefinementTrend::Diverging: return "diverging";
    case RefinementTrend::Infinite: return "infinite";
  }
  return "stable";
}

namespace {

RefinementTrend classify(const std::vector<double>& c) {
  for (double v : c) {
    if (std::isinf(v)) return RefinementTrend::Infinite;
  }
  const double scale = std::max(1.0, c.back());
  const double tol = 1e-9 * scale;
  if (c.size() == 2) {
    return c[1] - c[0] > tol && c[1] > 2.0 * c[0] ? RefinementTrend::Diverging
                                                   : RefinementTrend::Stable;
  }
  const std::size_t k = c.size();
  const double d1 = c[k - 2] - c[k - 3];
  const double d2 = c[k - 1] - c[k - 2];
  return d1 > tol && d2 > tol && d2 >= d1 ? RefinementTrend::Diverging : RefinementTrend::Stable;
}

}  // namespace

CriticalIndices critical_indices(const GrowthFunction& phi, const SpatialGrid& grid,
                                 std::span<const double> t_grid, const IndexScanOptions& opts,
                                 std::optional<TypeExponentEstimate> types) {
  if (opts.q_scan.empty()) throw DomainError("critical_indices: empty q scan");
  if (opts.refinements < 1) throw DomainError("critical_indices: need at least one refinement");
  for (std::size_t i = 0; i < opts.q_scan.size(); ++i) {
    if (opts.q_scan[i] < 1.0 || (i > 0 && !(opts.q_scan[i] > opts.q_scan[i - 1]))) {
      throw DomainError("critical_indices: q scan must be increasing and >= 1");
    }
  }
  for (std::size_t i = 0; i < opts.rh_scan.size(); ++i) {
    if (!(opts.rh_scan[i] > 1.0) || (i > 0 && !(opts.rh_scan[i] > opts.rh_scan[i - 1]))) {
      throw DomainError("critical_indices: reverse Holder scan must be increasing and > 1");
    }
  }

  std::vector<BallIndex> indices;
  for (int r = 0; r <= opts.refinements; ++r) {
    const SpatialGrid g = grid.refined(1 << r);
    indices.emplace_back(g, ball_family(g, opts.family));
  }

  CriticalIndices out;
  auto sweep = [&](const std::vector<double>& scan, const char* kind, bool reverse) {
    std::vector<RefinementTrend> trends;
    for (double q : scan) {
      std::vector<double> c(indices.size());
      parallel_for(indices.size(), [&](std::size_t r) {
        c[r] = reverse ? reverse_holder_constant(phi, q, indices[r], t_grid)
                       : muckenhoupt_constant(phi, q, indices[r], t_grid);
      });
      const RefinementTrend trend = classify(c);
      trends.push_back(trend);
      for (std::size_t r = 0; r < c.size(); ++r) {
        out.rows.push_back({kind, q, c[r], static_cast<int>(r), trend});
      }
    }
    return trends;
  };

  const auto a_trends = sweep(opts.q_scan, "A", false);
  out.q_bracket = {opts.q_scan.back(), kDivergent, false};
  for (std::size_t i = 0; i < a_trends.size(); ++i) {
    if (a_trends[i] == RefinementTrend::Stable) {
      out.q_bracket = {i == 0 ? std::min(1.0, opts.q_scan[0]) : opts.q_scan[i - 1],
                       opts.q_scan[i], true};
      break;
    }
  }
  out.q_estimate = out.q_bracket.hi;

  if (!opts.rh_scan.empty()) {
    const auto rh_trends = sweep(opts.rh_scan, "RH", true);
    std::size_t stable = 0;
    while (stable < rh_trends.size() && rh_trends[stable] == RefinementTrend::Stable) ++stable;
    if (stable == 0) {
      out.r_bracket = {1.0, opts.rh_scan[0], false};
    } else {
      out.r_bracket = {opts.rh_scan[stable - 1],
                       stable < opts.rh_scan.size() ? opts.rh_scan[stable] : kDivergent, true};
    }
    out.r_estimate = out.r_bracket.lo;
  }

  const TypeExponentEstimate est =
      types ? *types : estimate_type_exponents(phi, default_type_scan(phi.dim()));
  out.lower_type = est.lower_p;
  const int n = phi.dim();
  out.m_estimated = std::isinf(out.q_estimate) || !(est.lower_p > 0.0)
                        ? 0
                        : m_index(n, out.q_estimate, est.lower_p);
  if (const auto declared = declared_q_index(phi)) {
    out.m_declared = m_index(n, *declared, phi.nominal_lower_type());
  }
  return out;
}

int m_index(int dim, double q_index, double lower_type) {
  if (!(lower_type > 0.0)) throw DomainError("m_index: lower type must be positive");
  const double v = dim * (q_index / lower_type - 1.0);
  return std::max(0, static_cast<int>(std::floor(v + 1e-9)));
}

std::optional<double> declared_q_index(const GrowthFunction& phi) {
  if (const auto* p = std::get_if<ProductForm>(&phi.form())) {
    return 1.0 + std::max(p->weight.exponent, 0.0) / phi.dim();
  }
  if (std::holds_alternative<LogFamilyForm>(phi.form())) return 1.0;
  return std::nullopt;
}

namespace {

// out[i] = max(out[i], max of avg[a] over window starts a in [i-w+1, i]).
void sliding_max_into(std::span<const double> avg, int w, int n, std::span<double> out,
                      std::size_t stride, std::size_t offset) {
  std::deque<int> dq;
  const int starts = n - w + 1;
  int next = 0;
  for (int i = 0; i < n; ++i) {
    // admit starts a <= i
    while (next <= i && next < starts) {
      while (!dq.empty() && avg[static_cast<std::size_t>(dq.back())] <= avg[static_cast<std::size_t>(next)]) {
        dq.pop_back();
      }
      dq.push_back(next++);
    }
    while (!dq.empty() && dq.front() < i - w + 1) dq.pop_front();
    if (!dq.empty()) {
      double& slot = out[offset + static_cast<std::size_t>(i) * stride];
      slot = std::max(slot, avg[static_cast<std::size_t>(dq.front())]);
    }
  }
}

GridFunction maximal_1d(std::span<const double> a, MaximalWindows windows) {
  const int n = static_cast<int>(a.size());
  std::vector<long double> prefix(a.size() + 1, 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i) prefix[i + 1] = prefix[i] + a[i];
  GridFunction out(a.begin(), a.end());
  std::vector<double> avg(a.size());
  auto run = [&](int w) {
    const int starts = n - w + 1;
    for (int s = 0; s < starts; ++s) {
      avg[static_cast<std::size_t>(s)] = static_cast<double>(
          (prefix[static_cast<std::size_t>(s + w)] - prefix[static_cast<std::size_t>(s)]) / w);
    }
    sliding_max_into(avg, w, n, out, 1, 0);
  };
  if (windows == MaximalWindows::All) {
    for (int w = 2; w <= n; ++w) run(w);
  } else {
    for (int w = 2; w <= n; w *= 2) run(w);
  }
  return out;
}

GridFunction maximal_2d(const SpatialGrid& grid, std::span<const double> a) {
  const int n = grid.cells_per_axis();
  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  std::vector<long double> prefix(stride * stride, 0.0L);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      prefix[(j + 1) * stride + i + 1] = a[grid.index(i, j)] + prefix[j * stride + i + 1] +
                                         prefix[(j + 1) * stride + i] - prefix[j * stride + i];
    }
  }
  GridFunction out(a.begin(), a.end());
  for (int w = 2; w <= n; w *= 2) {
    const int starts = n - w + 1;
    // Square averages indexed by lower-left start (sx, sy).
    std::vector<double> avg(static_cast<std::size_t>(starts) * starts);
    const long double area = static_cast<long double>(w) * w;
    for (int sy = 0; sy < starts; ++sy) {
      for (int sx = 0; sx < starts; ++sx) {
        const long double s = prefix[(sy + w) * stride + sx + w] - prefix[sy * stride + sx + w] -
                              prefix[(sy + w) * stride + sx] + prefix[sy * stride + sx];
        avg[static_cast<std::size_t>(sy) * starts + sx] = static_cast<double>(s / area);
      }
    }
    // Max over start rows first (for each start column), then over columns.
    std::vector<double> row_max(static_cast<std::size_t>(n) * starts,
                                -std::numeric_limits<double>::infinity());
    std::vector<double> column(static_cast<std::size_t>(starts));
    for (int sx = 0; sx < starts; ++sx) {
      for (int sy = 0; sy < starts; ++sy) column[sy] = avg[static_cast<std::size_t>(sy) * starts + sx];
      sliding_max_into(column, w, n, row_max, static_cast<std::size_t>(starts), sx);
    }
    for (int j = 0; j < n; ++j) {
      std::span<const double> line(row_max.data() + static_cast<std::size_t>(j) * starts,
                                   static_cast<std::size_t>(starts));
      std::vector<double> tmp(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
      sliding_max_into(line, w, n, tmp, 1, 0);
      for (int i = 0; i < n; ++i) {
        double& slot = out[grid.index(i, j)];
        slot = std::max(slot, tmp[static_cast<std::size_t>(i)]);
      }
    }
  }
  return out;
}

}  // namespace

GridFunction hardy_littlewood_maximal(const SpatialGrid& grid, std::span<const double> f,
                                      MaximalWindows windows) {
  if (f.size() != grid.size()) throw PreconditionError("hardy_littlewood_maximal: size mismatch");
  GridFunction a(f.size());
  for (std::size_t c = 0; c < a.size(); ++c) a[c] = std::abs(f[c]);
  if (grid.dim() == 1) return maximal_1d(a, windows);
  if (windows == MaximalWindows::All) {
    throw DomainError("hardy_littlewood_maximal: exhaustive windows need n = 1");
  }
  return maximal_2d(grid, a);
}

}  // namespace mohardy
