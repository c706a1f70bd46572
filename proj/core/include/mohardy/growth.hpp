#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mohardy/grid.hpp"

namespace mohardy {

/// Spatial weight |x|^a (a = 0 gives the unit weight).
struct PowerWeight {
  double exponent = 0.0;
  double operator()(const Point& x, int dim) const;
};

enum class OrliczShape {
  Power,          ///< t^p
  PowerOverLog,   ///< t^p / ln(e + t)
  PowerTimesLog,  ///< t^p ln(e + t)
};

/// One-variable Orlicz function Phi(t).
struct OrliczFunction {
  OrliczShape shape = OrliczShape::Power;
  double p = 1.0;
  double operator()(double t) const;
};

/// phi(x, t) = w(x) Phi(t).
struct ProductForm {
  PowerWeight weight;
  OrliczFunction orlicz;
};

/// phi(x, t) = t^alpha / ([ln(e+|x|)]^beta + [ln(e+t)]^gamma).
struct LogFamilyForm {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// phi sampled per grid cell on an increasing table of levels. Linear in t
/// between nodes, linear to the origin below the first node and constant
/// above the last one.
struct TabulatedForm {
  SpatialGrid grid;
  std::vector<double> t_nodes;
  std::vector<double> values;  // values[cell * t_nodes.size() + k]
};

/// A Musielak-Orlicz growth function phi(x, t). Immutable once built.
class GrowthFunction {
 public:
  using Form = std::variant<ProductForm, LogFamilyForm, TabulatedForm>;

  GrowthFunction(int dim, Form form, double nominal_lower_type);

  /// phi(x, t) = t.
  static GrowthFunction identity(int dim);
  /// phi(x, t) = t^p.
  static GrowthFunction power(int dim, double p);
  /// phi(x, t) = |x|^a Phi(t).
  static GrowthFunction product(int dim, PowerWeight weight, OrliczFunction orlicz);
  static GrowthFunction log_family(int dim, double alpha, double beta, double gamma);
  static GrowthFunction tabulated(TabulatedForm table, double nominal_lower_type);

  double operator()(const Point& x, double t) const;

  int dim() const { return dim_; }
  const Form& form() const { return form_; }
  bool is_product() const { return std::holds_alternative<ProductForm>(form_); }
  /// Declared lower type p in (0, 1]; for families whose index is not
  /// attained this is the index itself.
  double nominal_lower_type() const { return lower_type_; }
  double nominal_upper_type() const { return 1.0; }
  /// True when t lies above the last tabulated node (value is held constant).
  bool beyond_table(double t) const;
  std::string describe() const;

 private:
  int dim_ = 1;
  Form form_;
  double lower_type_ = 1.0;
};

/// Checked evaluation: negative or non-finite t raises DomainError.
double evaluate(const GrowthFunction& phi, const Point& x, double t);

struct TypeScan {
  std::vector<double> s_values;   ///< must contain values below and above 1
  std::vector<double> t_values;
  std::vector<Point> x_points;
  double cap = 1.25;              ///< admissible worst constant
};

/// Default scan: s, t geometric with ratio 2^{1/8} on [2^-20, 2^20].
TypeScan default_type_scan(int dim);

struct TypeExponentEstimate {
  double lower_p = 0.0;
  double upper_p = 0.0;
  double lower_constant = 0.0;  ///< sup phi(x,st) / (s^p phi(x,t)) over s <= 1 at lower_p
  double upper_constant = 0.0;  ///< same over s >= 1 at upper_p
  double worst_constant = 0.0;  ///< max of the two
  double s_min = 0.0, s_max = 0.0, t_min = 0.0, t_max = 0.0;
  std::size_t x_count = 0;
};

/// Largest p with sup_{s<=1} phi(x,st)/(s^p phi(x,t)) <= cap, and smallest p
/// with the s >= 1 analogue, over the scan.
TypeExponentEstimate estimate_type_exponents(const GrowthFunction& phi, const TypeScan& scan);

/// phi~(x, t) = int_0^t phi(x, s) ds / s, tabulated on a geometric t grid for
/// every cell of `grid`. Each geometric level is integrated with 8-point
/// Gauss-Legendre in ln s; the head (0, t_0) is integrated over 40 further
/// octaves and closed with phi(x, s_low) / p_lower.
GrowthFunction regularize(const GrowthFunction& phi, const SpatialGrid& grid,
                          std::span<const double> t_nodes);

/// phi(E, t) = int_E phi(x, t) dx as a cell-weighted Riemann sum.
double modular_over_set(const GrowthFunction& phi, const SpatialGrid& grid,
                        std::span<const std::size_t> cells, double t);

/// Same over the cells of an open ball.
double modular_over_ball(const GrowthFunction& phi, const SpatialGrid& grid, const Ball& ball,
                         double t);

}  // namespace mohardy
