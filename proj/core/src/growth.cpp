#include "mohardy/growth.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mohardy/error.hpp"
#include "mohardy/summation.hpp"

namespace mohardy {

double PowerWeight::operator()(const Point& x, int dim) const {
  if (exponent == 0.0) return 1.0;
  const double r = dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
  return std::pow(r, exponent);
}

double OrliczFunction::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  const double base = p == 1.0 ? t : std::pow(t, p);
  switch (shape) {
    case OrliczShape::Power:
      return base;
    case OrliczShape::PowerOverLog:
      return base / std::log(std::numbers::e + t);
    case OrliczShape::PowerTimesLog:
      return base * std::log(std::numbers::e + t);
  }
  return base;
}

namespace {

void validate(const LogFamilyForm& f) {
  if (!(f.alpha > 0.0 && f.alpha <= 1.0)) throw DomainError("log family: alpha must lie in (0, 1]");
  if (!(f.beta >= 0.0)) throw DomainError("log family: beta must be >= 0");
  const double gmax = 2.0 * f.alpha * (1.0 + std::numbers::ln2);
  if (!(f.gamma >= 0.0 && f.gamma <= gmax)) {
    throw DomainError("log family: gamma must lie in [0, 2 alpha (1 + ln 2)]");
  }
}

void validate(const TabulatedForm& f) {
  const std::size_t k = f.t_nodes.size();
  if (k == 0) throw DomainError("tabulated growth function: empty t table");
  if (f.values.size() != k * f.grid.size()) {
    throw DomainError("tabulated growth function: table size does not match grid");
  }
  if (!(f.t_nodes.front() > 0.0)) throw DomainError("tabulated growth function: t nodes must be positive");
  for (std::size_t i = 1; i < k; ++i) {
    if (!(f.t_nodes[i] > f.t_nodes[i - 1])) {
      throw DomainError("tabulated growth function: t nodes must increase");
    }
  }
  for (std::size_t c = 0; c < f.grid.size(); ++c) {
    for (std::size_t i = 0; i < k; ++i) {
      const double v = f.values[c * k + i];
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("tabulated growth function: values must be positive and finite");
      }
      if (i > 0 && v < f.values[c * k + i - 1]) {
        throw DomainError("tabulated growth function: values must be nondecreasing in t");
      }
    }
  }
}

}  // namespace

GrowthFunction::GrowthFunction(int dim, Form form, double nominal_lower_type)
    : dim_(dim), form_(std::move(form)), lower_type_(nominal_lower_type) {
  if (dim != 1 && dim != 2) throw DomainError("GrowthFunction: dimension must be 1 or 2");
  if (!(nominal_lower_type > 0.0 && nominal_lower_type <= 1.0)) {
    throw DomainError("GrowthFunction: nominal lower type must lie in (0, 1]");
  }
  if (const auto* lf = std::get_if<LogFamilyForm>(&form_)) validate(*lf);
  if (const auto* tf = std::get_if<TabulatedForm>(&form_)) validate(*tf);
  if (const auto* pf = std::get_if<ProductForm>(&form_)) {
    if (!(pf->orlicz.p > 0.0)) throw DomainError("GrowthFunction: Orlicz exponent must be positive");
  }
}

GrowthFunction GrowthFunction::identity(int dim) {
  return GrowthFunction(dim, ProductForm{}, 1.0);
}

GrowthFunction GrowthFunction::power(int dim, double p) {
  return GrowthFunction(dim, ProductForm{{}, {OrliczShape::Power, p}}, p);
}

GrowthFunction GrowthFunction::product(int dim, PowerWeight weight, OrliczFunction orlicz) {
  return GrowthFunction(dim, ProductForm{weight, orlicz}, std::min(orlicz.p, 1.0));
}

GrowthFunction GrowthFunction::log_family(int dim, double alpha, double beta, double gamma) {
  return GrowthFunction(dim, LogFamilyForm{alpha, beta, gamma}, alpha);
}

GrowthFunction GrowthFunction::tabulated(TabulatedForm table, double nominal_lower_type) {
  const int dim = table.grid.dim();
  return GrowthFunction(dim, std::move(table), nominal_lower_type);
}

double GrowthFunction::operator()(const Point& x, double t) const {
  if (t <= 0.0) return 0.0;
  return std::visit(
      [&](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, ProductForm>) {
          return f.weight(x, dim_) * f.orlicz(t);
        } else if constexpr (std::is_same_v<F, LogFamilyForm>) {
          const double r = dim_ == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
          const double num = f.alpha == 1.0 ? t : std::pow(t, f.alpha);
          const double den = std::pow(std::log(std::numbers::e + r), f.beta) +
                             std::pow(std::log(std::numbers::e + t), f.gamma);
          return num / den;
        } else {
          const std::size_t k = f.t_nodes.size();
          const std::size_t cell = f.grid.locate(x);
          const double* row = f.values.data() + cell * k;
          if (t <= f.t_nodes.front()) return row[0] * t / f.t_nodes.front();
          if (t >= f.t_nodes.back()) return row[k - 1];
          const auto it = std::upper_bound(f.t_nodes.begin(), f.t_nodes.end(), t);
          const std::size_t hi = static_cast<std::size_t>(it - f.t_nodes.begin());
          const std::size_t lo = hi - 1;
          const double w = (t - f.t_nodes[lo]) / (f.t_nodes[hi] - f.t_nodes[lo]);
          return row[lo] + w * (row[hi] - row[lo]);
        }
      },
      form_);
}

bool GrowthFunction::beyond_table(double t) const {
  const auto* tf = std::get_if<TabulatedForm>(&form_);
  return tf != nullptr && t > tf->t_nodes.back();
}

std::string GrowthFunction::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, ProductForm>) {
          os << "product(weight=|x|^" << f.weight.exponent << ", orlicz=";
          switch (f.orlicz.shape) {
            case OrliczShape::Power: os << "t^" << f.orlicz.p; break;
            case OrliczShape::PowerOverLog: os << "t^" << f.orlicz.p << "/ln(e+t)"; break;
            case OrliczShape::PowerTimesLog: os << "t^" << f.orlicz.p << "*ln(e+t)"; break;
          }
          os << ")";
        } else if constexpr (std::is_same_v<F, LogFamilyForm>) {
          os << "log_family(alpha=" << f.alpha << ", beta=" << f.beta << ", gamma=" << f.gamma << ")";
        } else {
          os << "tabulated(" << f.t_nodes.size() << " levels)";
        }
      },
      form_);
  return os.str();
}

double evaluate(const GrowthFunction& phi, const Point& x, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evaluate: level t must be finite and >= 0");
  return phi(x, t);
}

TypeScan default_type_scan(int dim) {
  TypeScan scan;
  scan.s_values = geometric_grid(std::ldexp(1.0, -20), std::exp2(1.0 / 8.0), 321);
  scan.t_values = scan.s_values;
  if (dim == 1) {
    scan.x_points = {{0.0, 0.0}, {0.5, 0.0}, {3.0, 0.0}, {20.0, 0.0}};
  } else {
    scan.x_points = {{0.0, 0.0}, {0.5, 0.25}, {3.0, -1.0}, {20.0, 5.0}};
  }
  return scan;
}

TypeExponentEstimate estimate_type_exponents(const GrowthFunction& phi, const TypeScan& scan) {
  if (scan.s_values.empty() || scan.t_values.empty() || scan.x_points.empty()) {
    throw DomainError("estimate_type_exponents: empty scan grid");
  }
  // (ln s, ln phi(x,st) - ln phi(x,t)) pairs split by the sign of ln s.
  std::vector<std::array<double, 2>> below, above;
  for (const Point& x : scan.x_points) {
    for (double t : scan.t_values) {
      const double base = phi(x, t);
      if (!(base > 0.0) || !std::isfinite(base)) continue;
      const double lb = std::log(base);
      for (double s : scan.s_values) {
        if (s == 1.0) continue;
        const double v = phi(x, s * t);
        if (!(v > 0.0) || !std::isfinite(v)) continue;
        const std::array<double, 2> sample{std::log(s), std::log(v) - lb};
        (s < 1.0 ? below : above).push_back(sample);
      }
    }
  }
  if (below.empty() || above.empty()) {
    throw NumericalError("estimate_type_exponents: phi vanishes on the scan or s grid is one-sided");
  }
  auto worst = [](const std::vector<std::array<double, 2>>& samples, double p) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& [ls, r] : samples) m = std::max(m, r - p * ls);
    return m;
  };
  const double log_cap = std::log(scan.cap);
  constexpr double kPmax = 4.0;

  // Lower type: worst(below, p) is nondecreasing in p.
  double lo = 0.0, hi = kPmax;
  if (worst(below, 0.0) > log_cap) {
    hi = 0.0;
  } else if (worst(below, kPmax) <= log_cap) {
    lo = kPmax;
  } else {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (worst(below, mid) <= log_cap ? lo : hi) = mid;
    }
  }
  TypeExponentEstimate est;
  est.lower_p = lo;
  est.lower_constant = std::exp(worst(below, lo));

  // Upper type: worst(above, p) is nonincreasing in p.
  lo = 0.0;
  hi = kPmax;
  if (worst(above, 0.0) <= log_cap) {
    hi = 0.0;
  } else {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (worst(above, mid) <= log_cap ? hi : lo) = mid;
    }
  }
  est.upper_p = hi;
  est.upper_constant = std::exp(worst(above, hi));
  est.worst_constant = std::max(est.lower_constant, est.upper_constant);
  est.s_min = *std::min_element(scan.s_values.begin(), scan.s_values.end());
  est.s_max = *std::max_element(scan.s_values.begin(), scan.s_values.end());
  est.t_min = *std::min_element(scan.t_values.begin(), scan.t_values.end());
  est.t_max = *std::max_element(scan.t_values.begin(), scan.t_values.end());
  est.x_count = scan.x_points.size();
  return est;
}

namespace {

// int_{a}^{b} phi(x, s) ds / s = int_{ln a}^{ln b} phi(x, e^u) du.
double log_segment(const GrowthFunction& phi, const Point& x, double a, double b) {
  const double ua = std::log(a), ub = std::log(b);
  return boost::math::quadrature::gauss<double, 8>::integrate(
      [&](double u) { return phi(x, std::exp(u)); }, ua, ub);
}

}  // namespace

GrowthFunction regularize(const GrowthFunction& phi, const SpatialGrid& grid,
                          std::span<const double> t_nodes) {
  if (t_nodes.size() < 2) throw DomainError("regularize: need at least two t nodes");
  if (!(t_nodes.front() > 0.0)) throw DomainError("regularize: t grid must start above 0");
  const double ratio = t_nodes[1] / t_nodes[0];
  for (std::size_t k = 1; k < t_nodes.size(); ++k) {
    if (!(t_nodes[k] > t_nodes[k - 1]) ||
        std::abs(t_nodes[k] / t_nodes[k - 1] - ratio) > 1e-9 * ratio) {
      throw DomainError("regularize: t grid must be geometric");
    }
  }
  const std::size_t k = t_nodes.size();
  TabulatedForm table{grid, std::vector<double>(t_nodes.begin(), t_nodes.end()),
                      std::vector<double>(grid.size() * k)};
  constexpr int kHeadSegments = 80;  // 40 octaves in half-octave steps
  const double p_low = phi.nominal_lower_type();
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const Point x = grid.center(c);
    double s_hi = t_nodes[0];
    double head = 0.0;
    for (int i = 0; i < kHeadSegments; ++i) {
      const double s_lo = s_hi / std::numbers::sqrt2;
      head += log_segment(phi, x, s_lo, s_hi);
      s_hi = s_lo;
    }
    head += phi(x, s_hi) / p_low;
    double acc = head;
    double* row = table.values.data() + c * k;
    row[0] = acc;
    for (std::size_t i = 1; i < k; ++i) {
      acc += log_segment(phi, x, t_nodes[i - 1], t_nodes[i]);
      row[i] = acc;
    }
  }
  return GrowthFunction::tabulated(std::move(table), p_low);
}

double modular_over_set(const GrowthFunction& phi, const SpatialGrid& grid,
                        std::span<const std::size_t> cells, double t) {
  if (cells.empty()) return 0.0;
  std::vector<double> terms(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) terms[i] = phi(grid.center(cells[i]), t);
  return pairwise_sum(terms) * grid.cell_volume();
}

double modular_over_ball(const GrowthFunction& phi, const SpatialGrid& grid, const Ball& ball,
                         double t) {
  const auto cells = grid.cells_in_ball(ball);
  return modular_over_set(phi, grid, cells, t);
}

}  // namespace mohardy
