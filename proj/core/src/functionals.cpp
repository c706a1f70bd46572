#include "mohardy/functionals.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <deque>
#include <numbers>

#include "mohardy/error.hpp"
#include "mohardy/parallel.hpp"
#include "mohardy/summation.hpp"
#include "spectral.hpp"

namespace mohardy {

std::vector<std::uint8_t> TentFunction::support() const {
  std::vector<std::uint8_t> s(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) s[i] = values[i] != 0.0 ? 1 : 0;
  return s;
}

double TentFunction::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

int cone_reach(double spacing, double t, double nu) {
  const double r = nu * t;
  int k = static_cast<int>(std::floor(r / spacing));
  while (k > 0 && k * spacing >= r) --k;
  while ((k + 1) * spacing < r) ++k;
  return k;
}

// ---------------------------------------------------------------------------
// Wavelet

double AdmissibleWavelet::fourier(double xi) const {
  const double r = std::abs(xi) / center_frequency;
  if (r == 0.0) return 0.0;
  const double log_value = 2.0 * order * std::log(r) - order * (r * r - 1.0);
  return amplitude * std::exp(log_value);
}

double AdmissibleWavelet::level_sum(double xi) const {
  double s = 0.0;
  for (double t : levels.t_values()) {
    const double v = fourier(t * xi);
    s += v * v;
  }
  return s * levels.log_ratio();
}

double AdmissibleWavelet::continuous_normalization(double xi) const {
  if (xi == 0.0) return 0.0;
  const double mid = std::log(center_frequency / std::abs(xi));
  auto integrand = [&](double u) {
    const double v = fourier(std::exp(u) * xi);
    return v * v;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, mid - 40.0,
                                                                       mid + 6.0, 15, 1e-15);
}

int default_wavelet_order(int moments) { return std::max(6, (moments + 2) / 2); }

AdmissibleWavelet make_admissible_wavelet(const HalfSpaceGrid& levels, int moments, double r_lo,
                                          double r_hi, int order) {
  if (!(r_lo > 0.0)) throw DomainError("make_admissible_wavelet: band must stay away from 0");
  if (!(r_hi > r_lo)) throw DomainError("make_admissible_wavelet: need r_lo < r_hi");
  if (moments < 0) throw DomainError("make_admissible_wavelet: moment order must be >= 0");
  AdmissibleWavelet w;
  w.dim = levels.base().dim();
  w.moments = moments;
  if (order != 0 && 2 * order <= moments) {
    throw DomainError("make_admissible_wavelet: order too low for the requested moments");
  }
  w.order = order == 0 ? default_wavelet_order(moments) : order;
  w.r_lo = r_lo;
  w.r_hi = r_hi;
  w.center_frequency = std::sqrt(r_lo * r_hi);
  w.levels = levels;
  const double two_k = 2.0 * w.order;
  // A^2 int_0^inf r^{4K} e^{-2K(r^2-1)} dr/r = 1.
  w.amplitude = std::sqrt(2.0 * std::exp(two_k * std::log(two_k) - two_k - std::lgamma(two_k)));

  // Calibrated band: the contiguous range of |xi| around the geometric middle
  // of the covered scales where the discrete level sum equals 1 to 1e-10.
  const double middle = w.center_frequency / std::sqrt(levels.t_min() * levels.t_max());
  const double step = std::exp2(1.0 / 64.0);
  auto ok = [&](double xi) { return std::abs(w.level_sum(xi) - 1.0) <= 1e-10; };
  if (!ok(middle)) throw NumericalError("make_admissible_wavelet: level range too short to calibrate");
  double lo = middle, hi = middle;
  while (ok(lo / step) && lo > 1e-12) lo /= step;
  while (ok(hi * step) && hi < 1e12) hi *= step;
  w.band_lo = lo;
  w.band_hi = hi;
  double residual = 0.0;
  for (double xi = lo; xi <= hi * (1 + 1e-12); xi *= std::exp2(1.0 / 256.0)) {
    residual = std::max(residual, std::abs(w.level_sum(xi) - 1.0));
  }
  w.normalization_residual = residual;
  double cont = 0.0;
  for (double xi = 2.0 * r_lo; xi <= 0.5 * r_hi * (1 + 1e-12); xi *= std::exp2(1.0 / 8.0)) {
    cont = std::max(cont, std::abs(w.continuous_normalization(xi) - 1.0));
  }
  w.continuous_residual = cont;

  // Physical samples at the cell centres through the inverse transform.
  const SpatialGrid& grid = levels.base();
  detail::SpectralGrid spec(grid);
  const int p = spec.padded();
  const double h = grid.spacing();
  const double offset = -grid.half_width() + 0.5 * h;
  const double unit = 1.0 / (p * h);
  detail::Spectrum s(spec.spectrum_size());
  const auto radial = spec.radial_frequency();
  auto phase = [&](double f) { return std::polar(1.0, 2.0 * std::numbers::pi * f * offset); };
  const double jac = 1.0 / std::pow(h, grid.dim());
  if (grid.dim() == 1) {
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = jac * w.fourier(radial[k]) * phase(k * unit);
  } else {
    const std::size_t half = static_cast<std::size_t>(p) / 2 + 1;
    for (std::size_t r = 0; r < static_cast<std::size_t>(p); ++r) {
      const double fy = (r <= static_cast<std::size_t>(p) / 2 ? static_cast<double>(r)
                                                              : static_cast<double>(r) - p) * unit;
      for (std::size_t k = 0; k < half; ++k) {
        s[r * half + k] = jac * w.fourier(radial[r * half + k]) * phase(k * unit) * phase(fy);
      }
    }
  }
  w.samples = spec.inverse(s);
  double peak = 0.0;
  for (double v : w.samples) peak = std::max(peak, std::abs(v));
  for (std::size_t c = 0; c < w.samples.size(); ++c) {
    if (std::abs(w.samples[c]) >= 1e-13 * peak) {
      const Point x = grid.center(c);
      w.support_radius = std::max(w.support_radius, std::hypot(x[0], x[1]));
    }
  }
  return w;
}

namespace {

std::vector<double> multiplier(const AdmissibleWavelet& w, const detail::SpectralGrid& spec,
                               double t) {
  const auto radial = spec.radial_frequency();
  std::vector<double> m(radial.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = w.fourier(t * radial[k]);
  return m;
}

}  // namespace

TentFunction wavelet_transform(const AdmissibleWavelet& w, std::span<const double> f) {
  const SpatialGrid& grid = w.levels.base();
  if (f.size() != grid.size()) throw PreconditionError("wavelet_transform: size mismatch");
  detail::SpectralGrid spec(grid);
  const detail::Spectrum fh = spec.forward(f);
  TentFunction out(w.levels);
  parallel_for(static_cast<std::size_t>(w.levels.levels()), [&](std::size_t m) {
    const auto mult = multiplier(w, spec, w.levels.t(static_cast<int>(m)));
    detail::Spectrum s(fh.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = fh[k] * mult[k];
    const GridFunction g = spec.inverse(s);
    std::copy(g.begin(), g.end(), out.level(static_cast<int>(m)).begin());
  });
  return out;
}

// ---------------------------------------------------------------------------
// Area functional

GridFunction area_functional(const TentFunction& g, double nu) {
  if (!(nu > 0.0)) throw DomainError("area_functional: aperture must be positive");
  const HalfSpaceGrid& hs = g.grid;
  const SpatialGrid& grid = hs.base();
  const std::size_t cells = grid.size();
  const int levels = hs.levels();
  const int n = grid.cells_per_axis();
  const double h = grid.spacing();
  // Per-level contribution to A^2, written level by level and then summed
  // over levels in a fixed order per cell.
  std::vector<double> contrib(static_cast<std::size_t>(levels) * cells, 0.0);
  parallel_for(static_cast<std::size_t>(levels), [&](std::size_t ms) {
    const int m = static_cast<int>(ms);
    const double t = hs.t(m);
    const auto row = g.level(m);
    const int k = cone_reach(h, t, nu);
    const double weight = std::pow(h, grid.dim()) * hs.log_ratio() / std::pow(t, grid.dim());
    double* out = contrib.data() + ms * cells;
    if (grid.dim() == 1) {
      std::vector<long double> prefix(cells + 1, 0.0L);
      for (std::size_t i = 0; i < cells; ++i) prefix[i + 1] = prefix[i] + row[i] * row[i];
      for (int i = 0; i < n; ++i) {
        const int a = std::max(0, i - k), b = std::min(n, i + k + 1);
        out[i] = static_cast<double>(prefix[static_cast<std::size_t>(b)] -
                                     prefix[static_cast<std::size_t>(a)]) *
                 weight;
      }
      return;
    }
    const std::size_t stride = static_cast<std::size_t>(n) + 1;
    std::vector<long double> prefix(stride * n, 0.0L);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double v = row[grid.index(i, j)];
        prefix[j * stride + i + 1] = prefix[j * stride + i] + v * v;
      }
    }
    const double r = nu * t;
    std::vector<int> chord(static_cast<std::size_t>(k) + 1);
    for (int dy = 0; dy <= k; ++dy) {
      int kx = k;
      while (kx >= 0 && (kx * h) * (kx * h) + (dy * h) * (dy * h) >= r * r) --kx;
      chord[static_cast<std::size_t>(dy)] = kx;
    }
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        long double s = 0.0L;
        for (int dy = -k; dy <= k; ++dy) {
          const int y = j + dy;
          const int kx = chord[static_cast<std::size_t>(std::abs(dy))];
          if (y < 0 || y >= n || kx < 0) continue;
          const int a = std::max(0, i - kx), b = std::min(n, i + kx + 1);
          s += prefix[y * stride + b] - prefix[y * stride + a];
        }
        out[grid.index(i, j)] = static_cast<double>(s) * weight;
      }
    }
  });
  GridFunction a(cells);
  parallel_for(cells, [&](std::size_t c) {
    double s = 0.0;
    for (int m = 0; m < levels; ++m) s += contrib[static_cast<std::size_t>(m) * cells + c];
    a[c] = std::sqrt(s);
  });
  return a;
}

double tent_norm_p(const TentFunction& g, double p) {
  if (!(p > 0.0)) throw DomainError("tent_norm_p: p must be positive");
  const GridFunction a = area_functional(g);
  std::vector<double> terms(a.size());
  for (std::size_t c = 0; c < a.size(); ++c) terms[c] = std::pow(a[c], p);
  return std::pow(pairwise_sum(terms) * g.grid.base().cell_volume(), 1.0 / p);
}

double tent_norm_phi(const TentFunction& g, const GrowthFunction& phi) {
  const GridFunction a = area_functional(g);
  return luxembourg_norm(phi, g.grid.base(), a).norm;
}

GridFunction lusin_area(const AdmissibleWavelet& w, std::span<const double> f, double alpha) {
  return area_functional(wavelet_transform(w, f), alpha);
}

// ---------------------------------------------------------------------------
// Grand maximal dictionary

namespace {

double profile_1d(TestProfile p, double x) {
  const double g = std::exp(-0.5 * x * x);
  switch (p) {
    case TestProfile::Gaussian: return g;
    case TestProfile::GaussianFirstDerivative: return -x * g;
    case TestProfile::GaussianSecondDerivative: return (x * x - 1.0) * g;
    case TestProfile::CubicBSpline: {
      const double a = std::abs(x);
      if (a >= 2.0) return 0.0;
      if (a >= 1.0) return (2.0 - a) * (2.0 - a) * (2.0 - a) / 6.0;
      return (4.0 - 6.0 * a * a + 3.0 * a * a * a) / 6.0;
    }
  }
  return 0.0;
}

double profile_value(TestProfile p, int dim, const Point& x) {
  if (dim == 1) return profile_1d(p, x[0]);
  // Derivative profiles differentiate along the first axis only.
  const double other = p == TestProfile::CubicBSpline ? profile_1d(p, x[1])
                                                      : profile_1d(TestProfile::Gaussian, x[1]);
  return profile_1d(p, x[0]) * other;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double DictionaryElement::operator()(const Point& x) const { return scale * profile_value(profile, dim, x); }

double schwartz_class_bound(TestProfile p, int dim, int m, double scale) {
  const int order = m + 1;
  const double power = (m + 2.0) * (dim + 1.0);
  const double reach = 14.0;
  const double delta = dim == 1 ? 1.0 / 64.0 : 1.0 / 16.0;
  const double fd = 1e-2;  // difference step
  const int count = static_cast<int>(std::lround(2.0 * reach / delta)) + 1;
  double worst = 0.0;
  auto derivative = [&](const Point& x, int bx, int by) {
    double s = 0.0;
    for (int a = 0; a <= bx; ++a) {
      for (int b = 0; b <= by; ++b) {
        const Point y{x[0] + (0.5 * bx - a) * fd, x[1] + (0.5 * by - b) * fd};
        const double sign = ((a + b) % 2 == 0) ? 1.0 : -1.0;
        s += sign * binomial(bx, a) * binomial(by, b) * profile_value(p, dim, y);
      }
    }
    return s / std::pow(fd, bx + by);
  };
  const int ny = dim == 1 ? 1 : count;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < count; ++i) {
      const Point x{-reach + i * delta, dim == 1 ? 0.0 : -reach + j * delta};
      const double w = std::pow(1.0 + std::hypot(x[0], x[1]), power);
      for (int bx = 0; bx <= order; ++bx) {
        for (int by = 0; by <= (dim == 1 ? 0 : order - bx); ++by) {
          worst = std::max(worst, w * std::abs(scale * derivative(x, bx, by)));
        }
      }
    }
  }
  return worst;
}

std::vector<DictionaryElement> make_grand_dictionary(int dim, int m) {
  if (m < 0) throw DomainError("make_grand_dictionary: order must be >= 0");
  std::vector<DictionaryElement> out;
  for (TestProfile p : {TestProfile::Gaussian, TestProfile::GaussianFirstDerivative,
                        TestProfile::GaussianSecondDerivative, TestProfile::CubicBSpline}) {
    const double raw = schwartz_class_bound(p, dim, m, 1.0);
    DictionaryElement e{p, dim, 1.0 / (raw * (1.0 + 1e-9)), 0.0};
    e.measured_bound = schwartz_class_bound(p, dim, m, e.scale);
    if (!(e.measured_bound <= 1.0)) {
      throw NumericalError("make_grand_dictionary: rescaled element violates the class bound");
    }
    out.push_back(e);
  }
  return out;
}

namespace {

// out[i] = max of v over |i - j| <= k.
void centred_window_max(std::span<const double> v, int k, std::span<double> out) {
  const int n = static_cast<int>(v.size());
  std::deque<int> dq;
  int next = 0;
  for (int i = 0; i < n; ++i) {
    while (next < n && next <= i + k) {
      while (!dq.empty() && v[dq.back()] <= v[next]) dq.pop_back();
      dq.push_back(next++);
    }
    while (dq.front() < i - k) dq.pop_front();
    out[i] = std::max(out[i], v[dq.front()]);
  }
}

}  // namespace

GridFunction grand_maximal(const HalfSpaceGrid& levels, std::span<const double> f,
                           std::span<const DictionaryElement> dictionary) {
  const SpatialGrid& grid = levels.base();
  if (f.size() != grid.size()) throw PreconditionError("grand_maximal: size mismatch");
  detail::SpectralGrid spec(grid);
  const detail::Spectrum fh = spec.forward(f);
  const int p = spec.padded();
  const double h = grid.spacing();
  const std::size_t jobs = dictionary.size() * static_cast<std::size_t>(levels.levels());
  std::vector<GridFunction> partial(jobs);
  parallel_for(jobs, [&](std::size_t job) {
    const DictionaryElement& e = dictionary[job / levels.levels()];
    const int m = static_cast<int>(job % levels.levels());
    const double t = levels.t(m);
    const double norm = std::pow(h / t, grid.dim());
    // Kernel psi_t(offset) h^n on the padded periodic layout.
    std::vector<double> kernel(spec.real_size(), 0.0);
    auto offset = [&](int k) { return (k < p / 2 ? k : k - p) * h; };
    if (grid.dim() == 1) {
      for (int k = 0; k < p; ++k) kernel[k] = norm * e({offset(k) / t, 0.0});
    } else {
      for (int r = 0; r < p; ++r) {
        for (int k = 0; k < p; ++k) {
          kernel[static_cast<std::size_t>(r) * p + k] = norm * e({offset(k) / t, offset(r) / t});
        }
      }
    }
    const detail::Spectrum kh = spec.forward_padded(kernel);
    detail::Spectrum s(fh.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = fh[k] * kh[k];
    GridFunction g = spec.inverse(s);
    for (double& v : g) v = std::abs(v);
    GridFunction out(g.size(), 0.0);
    const int reach = cone_reach(h, t);
    if (grid.dim() == 1) {
      centred_window_max(g, reach, out);
    } else {
      const int n = grid.cells_per_axis();
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          double best = 0.0;
          for (int dy = -reach; dy <= reach; ++dy) {
            for (int dx = -reach; dx <= reach; ++dx) {
              const int a = i + dx, b = j + dy;
              if (a < 0 || a >= n || b < 0 || b >= n) continue;
              if ((dx * h) * (dx * h) + (dy * h) * (dy * h) >= t * t) continue;
              best = std::max(best, g[grid.index(a, b)]);
            }
          }
          out[grid.index(i, j)] = best;
        }
      }
    }
    partial[job] = std::move(out);
  });
  GridFunction result(grid.size(), 0.0);
  for (const auto& part : partial) {
    for (std::size_t c = 0; c < result.size(); ++c) result[c] = std::max(result[c], part[c]);
  }
  return result;
}

double hphi_grand_quasinorm(const HalfSpaceGrid& levels, std::span<const double> f,
                            const GrowthFunction& phi, int m) {
  const auto dictionary = make_grand_dictionary(levels.base().dim(), m);
  const GridFunction star = grand_maximal(levels, f, dictionary);
  return luxembourg_norm(phi, levels.base(), star).norm;
}

}  // namespace mohardy
