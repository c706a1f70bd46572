#include <doctest.h>

#include <cmath>
#include <random>

#include "mohardy/error.hpp"
#include "mohardy/norms.hpp"

using namespace mohardy;

namespace {

std::vector<GrowthFunction> builtins() {
  return {GrowthFunction::identity(1),
          GrowthFunction::power(1, 0.5),
          GrowthFunction::product(1, PowerWeight{0.5}, OrliczFunction{}),
          GrowthFunction::product(1, PowerWeight{}, {OrliczShape::PowerOverLog, 1.0}),
          GrowthFunction::product(1, PowerWeight{}, {OrliczShape::PowerTimesLog, 0.5}),
          GrowthFunction::log_family(1, 1.0, 1.0, 1.0)};
}

GridFunction random_function(const SpatialGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), scale(-4.0, 4.0);
  const double s = std::exp(scale(rng));
  GridFunction f(g.size());
  for (double& v : f) v = u(rng) > 0.3 ? s * u(rng) : 0.0;
  f[g.size() / 2] = s;
  return f;
}

}  // namespace

TEST_CASE("luxembourg: closed form for t^{1/2} and an indicator") {
  const SpatialGrid g(1, 4.0, 512);
  const GridFunction f = g.sample([](const Point& x) { return x[0] > 0 && x[0] < 2 ? 1.0 : 0.0; });
  const auto r = luxembourg_norm(GrowthFunction::power(1, 0.5), g, f);
  CHECK(r.norm == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.modular_at_norm <= 1.0);
}

TEST_CASE("luxembourg: zero function") {
  const SpatialGrid g(1, 1.0, 16);
  const auto r = luxembourg_norm(GrowthFunction::identity(1), g, GridFunction(16, 0.0));
  CHECK(r.norm == 0.0);
  CHECK_FALSE(r.modular_defined);
  GridFunction bad(16, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(luxembourg_norm(GrowthFunction::identity(1), g, bad), DomainError);
}

TEST_CASE("luxembourg: modular identity and homogeneity") {
  const SpatialGrid g(1, 2.0, 256);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> cdist(-10.0, 10.0);
  for (const auto& phi : builtins()) {
    for (int i = 0; i < 100; ++i) {
      const GridFunction f = random_function(g, rng);
      const auto r = luxembourg_norm(phi, g, f);
      CHECK(std::abs(r.modular_at_norm - 1.0) <= 1e-8);
      if (i < 10) {
        const double c = cdist(rng);
        GridFunction cf = f;
        for (double& v : cf) v *= c;
        CHECK(luxembourg_norm(phi, g, cf).norm == doctest::Approx(std::abs(c) * r.norm).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("luxembourg: quasi-triangle constant stays bounded") {
  const SpatialGrid g(1, 2.0, 128);
  std::mt19937_64 rng(9);
  const auto phi = GrowthFunction::power(1, 0.5);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const GridFunction f = random_function(g, rng), h = random_function(g, rng);
    GridFunction s(f.size());
    for (std::size_t c = 0; c < s.size(); ++c) s[c] = f[c] + h[c];
    worst = std::max(worst, luxembourg_norm(phi, g, s).norm /
                                (luxembourg_norm(phi, g, f).norm + luxembourg_norm(phi, g, h).norm));
  }
  CHECK(worst <= 2.0 + 1e-12);  // 2^{1/p - 1} for p = 1/2
}

TEST_CASE("indicator norms agree with the Luxembourg norm of the indicator") {
  const SpatialGrid g(1, 2.0, 256);
  const BallIndex balls(g, {{{0.1, 0.0}, 0.3}, {{-1.0, 0.0}, 0.7}, {{1.5, 0.0}, 2.0}});
  for (const auto& phi : builtins()) {
    const auto batch = indicator_norms(phi, balls);
    for (std::size_t b = 0; b < balls.size(); ++b) {
      GridFunction chi(g.size(), 0.0);
      for (std::size_t c : g.cells_in_ball(balls.ball(b))) chi[c] = 1.0;
      const double direct = luxembourg_norm(phi, g, chi).norm;
      CHECK(batch[b] == doctest::Approx(direct).epsilon(1e-12));
      CHECK(indicator_norm(phi, g, balls.ball(b)) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
  IndicatorNormCache cache(GrowthFunction::identity(1), g);
  const Ball b{{0.0, 0.0}, 0.5};
  CHECK(cache(b) == doctest::Approx(g.measure(g.cells_in_ball(b).size())));
}

TEST_CASE("lq_phi_ball_norm") {
  const SpatialGrid g(1, 2.0, 512);
  const std::vector<double> t_grid = {0.01, 0.1, 1.0, 10.0, 100.0};
  const Ball ball{{0.5, 0.0}, 0.5};
  const auto cells = g.cells_in_ball(ball);
  GridFunction f(g.size(), 0.0);
  for (std::size_t c : cells) f[c] = g.center(c)[0];

  SUBCASE("unit weight is the normalised L^q average") {
    double s = 0.0;
    for (std::size_t c : cells) s += std::pow(f[c], 3.0);
    CHECK(lq_phi_ball_norm(GrowthFunction::identity(1), g, f, ball, 3.0, t_grid) ==
          doctest::Approx(std::cbrt(s / cells.size())).epsilon(1e-12));
  }
  SUBCASE("indicator gives 1") {
    GridFunction chi(g.size(), 0.0);
    for (std::size_t c : cells) chi[c] = 1.0;
    for (const auto& phi : builtins())
      CHECK(lq_phi_ball_norm(phi, g, chi, ball, 2.0, t_grid) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("|x|^{1/2} weight against direct quadrature") {
    const auto phi = GrowthFunction::product(1, PowerWeight{0.5}, OrliczFunction{});
    double num = 0.0, den = 0.0;
    for (std::size_t c : cells) {
      const double x = g.center(c)[0];
      num += x * x * std::sqrt(x);
      den += std::sqrt(x);
    }
    CHECK(lq_phi_ball_norm(phi, g, f, ball, 2.0, t_grid) ==
          doctest::Approx(std::sqrt(num / den)).epsilon(1e-8));
  }
  SUBCASE("q = inf and support violations") {
    CHECK(lq_phi_ball_norm(GrowthFunction::identity(1), g, f, ball,
                           std::numeric_limits<double>::infinity(), t_grid) == doctest::Approx(f[cells.back()]));
    GridFunction outside = f;
    outside[0] = 1.0;
    CHECK_THROWS_AS(lq_phi_ball_norm(GrowthFunction::identity(1), g, outside, ball, 2.0, t_grid),
                    PreconditionError);
  }
}

TEST_CASE("lambda functional") {
  const SpatialGrid g(1, 2.0, 256);
  IndicatorNormCache cache(GrowthFunction::identity(1), g);
  const std::vector<Ball> balls = {{{0.0, 0.0}, 0.5}, {{1.0, 0.0}, 0.25}, {{-1.0, 0.0}, 0.75}};
  const std::vector<double> coeffs = {1.5, -0.25, 3.0};
  const auto terms = make_lambda_terms(cache, coeffs, balls);
  CHECK(lambda_functional(GrowthFunction::identity(1), g, terms) ==
        doctest::Approx(4.75).epsilon(1e-10));
  CHECK(lambda_functional(GrowthFunction::identity(1), g, {}) == 0.0);

  // Single term with coefficient ||chi_B|| c: Lambda = c |B|.
  const Ball b{{0.2, 0.0}, 0.6};
  const double c = 0.7;
  const double measure = g.measure(g.cells_in_ball(b).size());
  const std::vector<LambdaTerm> single = {{cache(b) * c, b, cache(b)}};
  CHECK(lambda_functional(GrowthFunction::identity(1), g, single) ==
        doctest::Approx(c * measure).epsilon(1e-10));

  // Doubling the coefficients does not decrease Lambda.
  const auto phi = GrowthFunction::power(1, 0.5);
  IndicatorNormCache cache2(phi, g);
  const auto t1 = make_lambda_terms(cache2, coeffs, balls);
  std::vector<double> doubled = coeffs;
  for (double& v : doubled) v *= 2.0;
  const auto t2 = make_lambda_terms(cache2, doubled, balls);
  CHECK(lambda_functional(phi, g, t2) >= lambda_functional(phi, g, t1));
}
