#include "mohardy/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "mohardy/bmo.hpp"
#include "mohardy/csv.hpp"
#include "mohardy/error.hpp"
#include "mohardy/families.hpp"
#include "mohardy/norms.hpp"
#include "mohardy/summation.hpp"
#include "mohardy/synthesis.hpp"
#include "mohardy/tent_atoms.hpp"
#include "mohardy/weights.hpp"

namespace mohardy {

namespace {

namespace fs = std::filesystem;

struct Context {
  const ExperimentConfig& cfg;
  ExperimentOutcome& outcome;

  fs::path table(const std::string& name) {
    const fs::path p = cfg.out / (cfg.experiment + "_" + name + ".csv");
    outcome.files.push_back(p);
    return p;
  }
  void series(const std::string& name, std::span<const double> x, std::span<const double> y) {
    write_series(table("series_" + name), x, y);
  }
  void check(std::string name, bool passed, std::string detail) {
    outcome.checks.push_back({std::move(name), passed, std::move(detail)});
  }
  int samples(int fallback) const { return cfg.samples > 0 ? cfg.samples : fallback; }
};

std::string fmt(double v) { return format_double(v); }

std::vector<double> x_axis(const SpatialGrid& grid) {
  std::vector<double> x(grid.size());
  for (std::size_t c = 0; c < x.size(); ++c) x[c] = grid.center(c)[0];
  return x;
}

double l2_norm(const SpatialGrid& grid, std::span<const double> f) {
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
  return std::sqrt(pairwise_sum(sq) * grid.cell_volume());
}

std::string band_text(const AdmissibleWavelet& w) {
  return "[" + fmt(w.band_lo) + ";" + fmt(w.band_hi) + "]";
}

std::string grid_text(const SpatialGrid& g) {
  return "n=" + std::to_string(g.dim()) + " L=" + fmt(g.half_width()) +
         " N=" + std::to_string(g.cells_per_axis());
}

// Growth functions used when an experiment sweeps "every built-in phi".
std::vector<std::pair<std::string, GrowthFunction>> builtin_growths(int dim) {
  return {
      {"t", GrowthFunction::identity(dim)},
      {"t^0.5", GrowthFunction::power(dim, 0.5)},
      {"|x|^0.5 t", GrowthFunction::product(dim, PowerWeight{0.5}, OrliczFunction{})},
      {"t/ln(e+t)", GrowthFunction::product(dim, PowerWeight{}, {OrliczShape::PowerOverLog, 1.0})},
      {"t^0.5 ln(e+t)",
       GrowthFunction::product(dim, PowerWeight{}, {OrliczShape::PowerTimesLog, 0.5})},
      {"log family", GrowthFunction::log_family(dim, 1.0, 1.0, 1.0)},
  };
}

// ---------------------------------------------------------------------------

void run_indices(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const SpatialGrid grid = make_grid(cfg);
  const GrowthFunction phi = make_growth(cfg);
  const std::vector<double> t_grid = geometric_grid(1.0 / 16, 2.0, 9);
  IndexScanOptions opts;
  opts.q_scan = {1.0, 1.25, 1.5, 2.0, 3.0, 4.0};
  opts.rh_scan = {2.0, 4.0, 8.0, std::numeric_limits<double>::infinity()};
  opts.family = cfg.balls;
  opts.refinements = 2;
  const CriticalIndices ci = critical_indices(phi, grid, t_grid, opts);

  CsvWriter rows(ctx.table("rows"), {"kind", "q", "constant", "refinement", "trend"});
  for (const auto& r : ci.rows)
    rows.row({r.kind, r.q, r.constant, std::int64_t{r.refinement_level}, to_string(r.trend)});

  const auto declared = declared_q_index(phi);
  CsvWriter sum(ctx.table("summary"),
                {"phi", "grid", "q_lo", "q_hi", "q_converged", "q_estimate", "r_lo", "r_hi",
                 "r_estimate", "lower_type", "m_estimated", "m_declared", "q_declared"});
  sum.row({phi.describe(), grid_text(grid), ci.q_bracket.lo, ci.q_bracket.hi,
           std::int64_t{ci.q_bracket.converged}, ci.q_estimate, ci.r_bracket.lo, ci.r_bracket.hi,
           ci.r_estimate, ci.lower_type, std::int64_t{ci.m_estimated},
           std::int64_t{ci.m_declared.value_or(-1)}, declared.value_or(std::nan(""))});

  bool finite_rows = !ci.rows.empty();
  for (const auto& r : ci.rows)
    if (r.trend != RefinementTrend::Infinite && !std::isfinite(r.constant)) finite_rows = false;
  ctx.check("rows recorded", finite_rows, std::to_string(ci.rows.size()) + " rows");
  if (declared) {
    const bool ok = ci.q_bracket.converged && *declared >= ci.q_bracket.lo &&
                    *declared <= ci.q_bracket.hi;
    ctx.check("declared q in bracket", ok,
              "q=" + fmt(*declared) + " bracket (" + fmt(ci.q_bracket.lo) + ", " +
                  fmt(ci.q_bracket.hi) + "]");
  }
}

// ---------------------------------------------------------------------------

void run_luxembourg(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const SpatialGrid grid = make_grid(cfg);
  const int count = ctx.samples(100);
  std::mt19937_64 rng(cfg.seed);
  std::vector<GridFunction> fs_;
  for (int i = 0; i < count; ++i) {
    const double scale = std::exp(uniform_draw(rng, -5.0, 5.0));
    const double density = uniform_draw(rng, 0.05, 1.0);
    GridFunction f(grid.size());
    for (double& v : f) {
      const double keep = uniform_draw(rng, 0.0, 1.0);
      const double val = uniform_draw(rng, -1.0, 1.0) * scale;
      v = keep < density ? val : 0.0;
    }
    if (std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; })) f[0] = scale;
    fs_.push_back(std::move(f));
  }

  CsvWriter out(ctx.table("norms"),
                {"phi", "sample", "norm", "modular_at_norm", "lp_norm", "lp_rel_diff"});
  double worst_modular = 0.0, worst_lp = 0.0, worst_homog = 0.0;
  for (const auto& [name, phi] : builtin_growths(grid.dim())) {
    const auto* pf = std::get_if<ProductForm>(&phi.form());
    const bool pure_power = pf && pf->weight.exponent == 0.0 && pf->orlicz.shape == OrliczShape::Power;
    std::vector<LuxembourgResult> res(fs_.size());
    for (std::size_t i = 0; i < fs_.size(); ++i) res[i] = luxembourg_norm(phi, grid, fs_[i]);
    for (std::size_t i = 0; i < fs_.size(); ++i) {
      double lp = std::nan(""), diff = std::nan("");
      if (pure_power) {
        const double p = pf->orlicz.p;
        std::vector<double> a(fs_[i].size());
        for (std::size_t c = 0; c < a.size(); ++c) a[c] = std::pow(std::abs(fs_[i][c]), p);
        lp = std::pow(pairwise_sum(a) * grid.cell_volume(), 1.0 / p);
        diff = std::abs(res[i].norm - lp) / lp;
        worst_lp = std::max(worst_lp, diff);
      }
      worst_modular = std::max(worst_modular, std::abs(res[i].modular_at_norm - 1.0));
      out.row({name, std::int64_t(i), res[i].norm, res[i].modular_at_norm, lp, diff});
    }
    // Homogeneity on the first few samples.
    for (std::size_t i = 0; i < std::min<std::size_t>(5, fs_.size()); ++i) {
      GridFunction g = fs_[i];
      for (double& v : g) v *= -3.5;
      const double n2 = luxembourg_norm(phi, grid, g).norm;
      worst_homog = std::max(worst_homog, std::abs(n2 - 3.5 * res[i].norm) / (3.5 * res[i].norm));
    }
  }
  ctx.check("modular at norm equals 1", worst_modular <= 1e-6, "max dev " + fmt(worst_modular));
  ctx.check("power growth matches L^p norm", worst_lp <= 1e-8, "max rel diff " + fmt(worst_lp));
  ctx.check("homogeneity", worst_homog <= 1e-8, "max rel diff " + fmt(worst_homog));
}

// ---------------------------------------------------------------------------

TentFunction fixture_tent_function(const HalfSpaceGrid& hs) {
  // A roof (1 - (|y| + t) / R)_+ over the tent of B(0, R), times a cosine.
  TentFunction f(hs);
  const SpatialGrid& g = hs.base();
  const double R = std::min(4.0, 0.5 * g.half_width());
  for (int m = 0; m < hs.levels(); ++m) {
    const double t = hs.t(m);
    for (std::size_t c = 0; c < g.size(); ++c) {
      const Point y = g.center(c);
      const double r = std::sqrt(y[0] * y[0] + y[1] * y[1]);
      if (r <= R - t) f.at(m, c) = (1.0 - (r + t) / R) * std::cos(3.0 * y[0]);
    }
  }
  return f;
}

void run_tent_decompose(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const HalfSpaceGrid hs = make_levels(cfg);
  const GrowthFunction phi = make_growth(cfg);
  std::vector<std::pair<std::string, TentFunction>> family;
  family.emplace_back("fixture", fixture_tent_function(hs));
  auto random = random_tent_functions(hs, ctx.samples(10), cfg.seed);
  for (std::size_t i = 0; i < random.size(); ++i)
    family.emplace_back("random" + std::to_string(i), std::move(random[i]));

  CsvWriter rep(ctx.table("reports"),
                {"function", "atoms", "k_min", "k_max", "lambda", "input_norm", "implied_constant",
                 "reconstruction_residual", "max_abs_input", "unassigned_nodes",
                 "resolution_loss_cubes", "gamma", "grid"});
  CsvWriter atoms(ctx.table("atoms"),
                  {"function", "k", "j", "ball_center", "ball_radius", "coefficient",
                   "indicator_norm", "nodes", "margin_p2", "margin_p4"});
  const std::vector<double> p_list = {2.0, 4.0};
  double worst_residual = 0.0, worst_margin = 0.0;
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
  bool support_ok = true;
  std::size_t unassigned = 0;
  for (const auto& [id, f] : family) {
    const DecompositionReport r = decompose(f, phi, cfg.gamma);
    rep.row({id, std::int64_t(r.atoms.size()), std::int64_t{r.k_min}, std::int64_t{r.k_max},
             r.lambda_value, r.input_norm, r.implied_constant, r.reconstruction_residual,
             r.max_abs_input, std::int64_t(r.unassigned_nodes),
             std::int64_t(r.resolution_loss_cubes), r.gamma, grid_text(hs.base())});
    worst_residual = std::max(worst_residual, r.reconstruction_residual / r.max_abs_input);
    unassigned += r.unassigned_nodes;
    if (r.input_norm > 0.0) {
      cmin = std::min(cmin, r.implied_constant);
      cmax = std::max(cmax, r.implied_constant);
    }
    for (const auto& a : r.atoms) {
      const auto v = validate_tent_atom(a.dense(hs), a.ball, phi, p_list, a.indicator_norm);
      support_ok = support_ok && v.support_ok;
      worst_margin = std::max(worst_margin, v.max_margin());
      atoms.row({id, std::int64_t{a.k}, std::int64_t{a.j}, a.ball.center[0], a.ball.radius,
                 a.coefficient, a.indicator_norm, std::int64_t(a.nodes.size()), v.margins[0],
                 v.margins[1]});
    }
  }
  ctx.check("reconstruction", worst_residual <= 1e-12,
            "max residual / max|f| " + fmt(worst_residual) + ", unassigned " +
                std::to_string(unassigned));
  ctx.check("atom support", support_ok, "");
  ctx.check("atom size margins <= 10", worst_margin <= 10.0, "max margin " + fmt(worst_margin));
  const double spread = cmax / cmin;
  ctx.check("lambda / tent norm bounded", std::isfinite(spread) && spread <= 50.0,
            "max/min " + fmt(spread));
}

// ---------------------------------------------------------------------------

void run_calderon(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const HalfSpaceGrid hs = make_levels(cfg);
  const AdmissibleWavelet w = make_wavelet(cfg, hs);
  const auto family = band_limited_family(hs.base(), ctx.samples(10), cfg.seed);
  CsvWriter out(ctx.table("residuals"), {"function", "relative_residual", "band", "grid"});
  double worst = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const CalderonResult r = calderon_reproduce(family[i].values, w);
    worst = std::max(worst, r.relative_residual);
    out.row({family[i].id, r.relative_residual, band_text(w), grid_text(hs.base())});
    if (i == 0) {
      const auto x = x_axis(hs.base());
      ctx.series("input", x, family[i].values);
      ctx.series("reproduced", x, r.reproduced);
    }
  }
  ctx.check("reproduction", worst <= 1e-6, "max relative L2 residual " + fmt(worst));
}

// ---------------------------------------------------------------------------

void run_pipeline(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const HalfSpaceGrid hs = make_levels(cfg);
  const AdmissibleWavelet w = make_wavelet(cfg, hs);
  const GrowthFunction phi = make_growth(cfg);
  const auto family = pipeline_family(hs.base(), ctx.samples(20));
  PipelineOptions opts;
  opts.gamma = cfg.gamma;

  CsvWriter out(ctx.table("reports"),
                {"function", "atoms", "reconstruction_error", "calderon_residual", "lambda",
                 "quasinorm", "ratio", "dropped_nodes", "band", "gamma"});
  CsvWriter mol(ctx.table("molecules"),
                {"function", "k", "j", "coefficient", "max_margin", "max_moment_residual", "passes"});
  double worst_err = 0.0, worst_margin = 0.0, worst_moment = 0.0;
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  bool all_pass = true;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const PipelineReport r = molecular_pipeline(family[i].values, w, phi, opts);
    out.row({family[i].id, std::int64_t(r.decomposition.atoms.size()), r.reconstruction_error,
             r.calderon_residual, r.lambda_value, r.quasinorm, r.ratio,
             std::int64_t(r.dropped_nodes), band_text(w), opts.gamma});
    worst_err = std::max(worst_err, r.reconstruction_error);
    rmin = std::min(rmin, r.ratio);
    rmax = std::max(rmax, r.ratio);
    for (const auto& m : r.molecules) {
      mol.row({family[i].id, std::int64_t{m.k}, std::int64_t{m.j}, m.coefficient, m.max_margin,
               m.max_moment_residual, std::int64_t{m.passes}});
      all_pass = all_pass && m.passes;
      worst_margin = std::max(worst_margin, m.max_margin);
      worst_moment = std::max(worst_moment, m.max_moment_residual);
    }
    if (i == 0) {
      const auto x = x_axis(hs.base());
      ctx.series("input", x, family[i].values);
      ctx.series("reconstruction", x, r.reconstruction);
    }
  }
  ctx.check("reconstruction", worst_err <= 1e-3, "max relative L2 error " + fmt(worst_err));
  ctx.check("molecules", all_pass,
            "max margin " + fmt(worst_margin) + ", max moment residual " + fmt(worst_moment));
  const double spread = rmax / rmin;
  ctx.check("lambda / H_S quasinorm bounded", std::isfinite(spread) && spread <= 50.0,
            "max/min " + fmt(spread));
}

// ---------------------------------------------------------------------------

CarlesonExperiment carleson_on(const ExperimentConfig& cfg, const HalfSpaceGrid& hs,
                               const GrowthFunction& phi) {
  const AdmissibleWavelet w = make_wavelet(cfg, hs);
  const BallIndex balls(hs.base(), ball_family(hs.base(), cfg.balls));
  const auto family = bmo_family(hs.base(), 5, cfg.seed);
  return carleson_experiment(family, phi, w, balls);
}

void run_carleson(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const HalfSpaceGrid hs = make_levels(cfg);
  const GrowthFunction phi = make_growth(cfg);
  const CarlesonExperiment coarse = carleson_on(cfg, hs, phi);
  std::optional<CarlesonExperiment> fine;
  if (cfg.refine) fine = carleson_on(cfg, hs.with_base(hs.base().refined()), phi);

  CsvWriter out(ctx.table("ratios"),
                {"function", "grid", "bmo_norm", "carleson_norm", "ratio", "band"});
  const AdmissibleWavelet w = make_wavelet(cfg, hs);
  auto emit = [&](const CarlesonExperiment& e, const SpatialGrid& g) {
    for (const auto& r : e.rows) out.row({r.id, grid_text(g), r.bmo, r.carleson, r.ratio, band_text(w)});
  };
  emit(coarse, hs.base());
  if (fine) emit(*fine, hs.base().refined());

  ctx.check("ratios finite and bounded", coarse.bounded && (!fine || fine->bounded),
            "max " + fmt(coarse.max_ratio) + ", spread " + fmt(coarse.spread));
  if (fine) {
    double worst = 0.0;
    for (std::size_t i = 0; i < coarse.rows.size(); ++i)
      worst = std::max(worst, std::abs(fine->rows[i].ratio / coarse.rows[i].ratio - 1.0));
    ctx.check("stable under refinement", worst <= 0.1, "max relative change " + fmt(worst));
  }
}

// ---------------------------------------------------------------------------

void run_pairing(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const HalfSpaceGrid hs = make_levels(cfg);
  const AdmissibleWavelet w = make_wavelet(cfg, hs);
  const SpatialGrid& g = hs.base();
  std::mt19937_64 rng(cfg.seed);
  CsvWriter out(ctx.table("pairs"), {"pair", "lhs", "rhs", "residual", "absolute", "band"});
  double worst = 0.0;
  const int count = ctx.samples(10);
  for (int i = 0; i < count; ++i) {
    const double xi = uniform_draw(rng, 0.75, 1.5);
    const double s1 = uniform_draw(rng, -4.0, 4.0);
    const double s2 = s1 + uniform_draw(rng, -1.0, 1.0);
    const double w1 = uniform_draw(rng, 2.0, 3.0), w2 = uniform_draw(rng, 2.0, 3.0);
    const GridFunction f = wave_packet(g, xi, w1, s1);
    const GridFunction b = i == 0 ? f : wave_packet(g, xi, w2, s2);
    const PairingResult r = pairing_check(f, b, w);
    worst = std::max(worst, r.residual);
    out.row({"pair" + std::to_string(i), r.lhs, r.rhs, r.residual, std::int64_t{r.absolute},
             band_text(w)});
  }
  ctx.check("pairing identity", worst <= 1e-6, "max residual " + fmt(worst));
}

// ---------------------------------------------------------------------------

void run_jn(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const SpatialGrid grid = make_grid(cfg);
  const GridFunction b = bmo_family(grid, 0, cfg.seed)[1].values;  // truncated log
  const Ball ball{{0.0, 0.0}, 1.0};
  std::vector<double> lambdas;
  const int steps = ctx.samples(40);
  for (int i = 0; i <= steps; ++i) lambdas.push_back(3.5 * i / steps);
  const JohnNirenbergResult r = john_nirenberg_experiment(grid, b, ball, lambdas);
  CsvWriter out(ctx.table("distribution"), {"lambda", "fraction"});
  std::vector<double> xs, ys;
  for (const auto& row : r.rows) {
    out.row({row.lambda, row.fraction});
    xs.push_back(row.lambda);
    ys.push_back(row.fraction);
  }
  ctx.series("distribution", xs, ys);
  CsvWriter sum(ctx.table("summary"), {"function", "oscillation", "rate", "monotone"});
  sum.row({"log", r.oscillation, r.rate, std::int64_t{r.monotone}});
  ctx.check("distribution decays", r.decaying,
            "rate " + fmt(r.rate) + ", oscillation " + fmt(r.oscillation));
  bool hits_zero = true;
  for (const auto& row : r.rows)
    if (row.lambda >= r.oscillation && row.fraction != 0.0) hits_zero = false;
  ctx.check("zero beyond the oscillation", hits_zero, "");
}

// ---------------------------------------------------------------------------

std::vector<OscillationIntegral> oscillation_sweep(const SpatialGrid& grid, const GrowthFunction& phi,
                                         double eps, const std::vector<Ball>& balls_list,
                                         BallFamilyKind kind) {
  const BallIndex balls(grid, ball_family(grid, kind));
  const GridFunction f = bmo_family(grid, 0, 0)[0].values;  // sign
  const double bmo = bmo_phi_norm(f, phi, balls);
  std::vector<OscillationIntegral> out;
  for (const auto& b : balls_list) out.push_back(oscillation_integral_check(f, b, eps, phi, balls, bmo));
  return out;
}

void run_oscillation_integral(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const SpatialGrid grid = make_grid(cfg);
  const GrowthFunction phi = make_growth(cfg);
  std::vector<Ball> balls_list;
  for (double c : {0.0, 0.5, -1.5, 3.0})
    for (double r : {0.25, 0.5, 1.0, 2.0}) balls_list.push_back({{c, 0.0}, r});
  const auto coarse = oscillation_sweep(grid, phi, cfg.epsilon, balls_list, cfg.balls);
  std::vector<OscillationIntegral> fine;
  if (cfg.refine) fine = oscillation_sweep(grid.refined(), phi, cfg.epsilon, balls_list, cfg.balls);

  CsvWriter out(ctx.table("ratios"),
                {"center", "radius", "lhs", "tail_bound", "rhs_scale", "ratio", "ratio_upper",
                 "refined_ratio", "warning"});
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0, worst_change = 0.0;
  bool finite = true, warned = false;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const auto& r = coarse[i];
    const double refined = fine.empty() ? std::nan("") : fine[i].ratio;
    out.row({balls_list[i].center[0], balls_list[i].radius, r.lhs, r.tail_bound, r.rhs_scale,
             r.ratio, r.ratio_upper, refined, r.warning.value_or("")});
    finite = finite && std::isfinite(r.ratio_upper) && r.ratio > 0.0;
    warned = warned || r.warning.has_value();
    rmin = std::min(rmin, r.ratio);
    rmax = std::max(rmax, r.ratio_upper);
    if (!fine.empty()) worst_change = std::max(worst_change, std::abs(refined / r.ratio - 1.0));
  }
  ctx.check("epsilon above threshold", !warned,
            "threshold " + fmt(coarse.empty() ? 0.0 : coarse[0].epsilon_threshold));
  ctx.check("ratios finite and bounded", finite && rmax / rmin <= 50.0,
            "min " + fmt(rmin) + ", max (with tail) " + fmt(rmax));
  if (!fine.empty())
    ctx.check("stable under refinement", worst_change <= 0.1,
              "max relative change " + fmt(worst_change));
}

// ---------------------------------------------------------------------------

void run_plancherel(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const HalfSpaceGrid hs = make_levels(cfg);
  const AdmissibleWavelet w = make_wavelet(cfg, hs);
  const auto family = band_limited_family(hs.base(), ctx.samples(10), cfg.seed);
  const double expected = unit_ball_volume(hs.base().dim());
  CsvWriter out(ctx.table("ratios"), {"function", "square_function_l2", "f_l2", "ratio", "band"});
  double worst = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const GridFunction S = lusin_area(w, family[i].values);
    const double a = l2_norm(hs.base(), S), b = l2_norm(hs.base(), family[i].values);
    const double ratio = (a * a) / (b * b);
    worst = std::max(worst, std::abs(ratio / expected - 1.0));
    out.row({family[i].id, a, b, ratio, band_text(w)});
    if (i == 0) ctx.series("square_function", x_axis(hs.base()), S);
  }
  // Wavelet export: the profile at t = 1 and its radial Fourier data on the
  // DFT frequencies of the grid.
  const SpatialGrid& g = hs.base();
  ctx.series("wavelet", x_axis(g), w.samples);
  std::vector<double> xi(static_cast<std::size_t>(g.cells_per_axis() / 2 + 1)), hat(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) {
    xi[k] = static_cast<double>(k) / (2.0 * g.half_width());
    hat[k] = w.fourier(xi[k]);
  }
  ctx.series("wavelet_fourier", xi, hat);
  ctx.check("square function factor", worst <= 0.01,
            "expected " + fmt(expected) + ", max relative deviation " + fmt(worst));
}

struct Entry {
  ExperimentInfo info;
  std::function<void(Context&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> list = {
      {{"indices", "critical indices q, r, m from Muckenhoupt and reverse Hoelder scans"}, run_indices},
      {{"luxembourg", "Luxembourg norms: modular identity, L^p reduction, homogeneity"}, run_luxembourg},
      {{"tent-decompose", "atomic decomposition of tent functions with atom validation"}, run_tent_decompose},
      {{"calderon", "Calderon reproducing formula on band-limited inputs"}, run_calderon},
      {{"pipeline", "tent atoms to molecules to reconstruction, with quasinorm ratios"}, run_pipeline},
      {{"carleson", "Carleson norm of |phi_t * b|^2 dx dt / t against the BMO norm of b"}, run_carleson},
      {{"pairing", "pairing identity int f b = int phi_t*f phi_t*b dx dt / t"}, run_pairing},
      {{"jn", "John-Nirenberg distribution of a truncated logarithm"}, run_jn},
      {{"lemma52", "weighted oscillation integral against the BMO scale"}, run_oscillation_integral},
      {{"plancherel", "square function L^2 factor on band-limited inputs"}, run_plancherel},
  };
  return list;
}

}  // namespace

bool ExperimentOutcome::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

std::string list_experiments() {
  std::string out;
  for (const auto& e : experiment_registry()) out += e.name + "  " + e.description + "\n";
  return out;
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  const auto& list = entries();
  const auto it = std::find_if(list.begin(), list.end(),
                               [&](const Entry& e) { return e.info.name == cfg.experiment; });
  if (it == list.end()) throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.out.string());
  ExperimentOutcome outcome;
  outcome.experiment = cfg.experiment;
  Context ctx{cfg, outcome};
  it->run(ctx);
  CsvWriter checks(ctx.table("checks"), {"check", "passed", "detail"});
  for (const auto& c : outcome.checks) checks.row({c.name, std::int64_t{c.passed}, c.detail});
  return outcome;
}

int run_from_file(const fs::path& config_path, const std::optional<fs::path>& out_override,
                  const std::optional<std::uint64_t>& seed_override, std::ostream& log) {
  ExperimentOutcome outcome;
  try {
    ExperimentConfig cfg = load_config(config_path);
    if (out_override) cfg.out = *out_override;
    if (seed_override) cfg.seed = *seed_override;
    outcome = run_experiment(cfg);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  for (const auto& c : outcome.checks)
    log << (c.passed ? "ok   " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": ") << c.detail
        << "\n";
  for (const auto& f : outcome.files) log << "wrote " << f.string() << "\n";
  return outcome.passed() ? kExitOk : kExitAssertionFailed;
}

}  // namespace mohardy
