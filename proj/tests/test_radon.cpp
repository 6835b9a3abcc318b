#include <cmath>

#include "doctest.h"
#include "odegeom/radon.hpp"
#include "odegeom/suites.hpp"

using namespace odegeom;

namespace {

// Compares conic coefficients up to scale.
void check_proportional(const ConicCoefficients& c, std::array<double, 6> expected) {
  double n = 0;
  for (double v : expected) n += v * v;
  n = std::sqrt(n);
  double dot = 0;
  for (std::size_t i = 0; i < 6; ++i) dot += c.c[i] * expected[i] / n;
  const double sign = dot < 0 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < 6; ++i) CHECK(c.c[i] == doctest::Approx(sign * expected[i] / n).epsilon(1e-12));
}

Jet5 gn5_solution(double x) {
  // y = 1 + x^2 + (1 + x)^{3/2}
  const double u = 1 + x;
  return {1 + x * x + std::pow(u, 1.5), 2 * x + 1.5 * std::sqrt(u), 2 + 0.75 / std::sqrt(u),
          -0.375 * std::pow(u, -1.5), 0.5625 * std::pow(u, -2.5)};
}

}  // namespace

TEST_CASE("conic through the jet of the unit circle") {
  const ConicCoefficients c = conic_from_jet({1, 0, -1, 0, -3});
  check_proportional(c, {1, 0, 1, 0, 0, -1});
  double n = 0;
  for (double v : c.c) n += v * v;
  CHECK(n == doctest::Approx(1.0));
}

TEST_CASE("conic through the jet of y = x^2") {
  check_proportional(conic_from_jet({0, 0, 2, 0, 0}), {1, 0, 0, 0, -0.5, 0});
}

TEST_CASE("conic away from the origin reproduces its jet") {
  const Jet5 X{0.3, -0.2, 1.4, 0.5, -0.7};
  for (double x0 : {0.0, 0.8, -1.5}) {
    const ConicCoefficients c = conic_from_jet(X, x0);
    const Jet5 back = jet_at(c, select_branch(c, x0, X[0]), x0);
    for (std::size_t i = 0; i < 5; ++i) CHECK(back[i] == doctest::Approx(X[i]).epsilon(1e-10));
  }
}

TEST_CASE("degenerate jets are rejected") {
  CHECK_THROWS_AS(conic_from_jet({0, 0, 0, 0, 0}), RadonError);
  CHECK_THROWS_AS(conic_from_jet({1, 2, 0, 1, 1}), RadonError);
}

TEST_CASE("eval_Z on the circle and the parabola") {
  const ConicCoefficients circle = conic_from_jet({1, 0, -1, 0, -3});
  const Branch up = select_branch(circle, 0, 1);
  const ZValue z = eval_Z(circle, up, 0);
  CHECK(z.y == doctest::Approx(1.0));
  CHECK(z.q == doctest::Approx(-1.0));
  const ZValue z2 = eval_Z(circle, up, 0.6);
  CHECK(z2.y == doctest::Approx(0.8));
  CHECK(z2.q == doctest::Approx(-1.0 / (0.8 * 0.8 * 0.8)));
  CHECK_THROWS_AS(eval_Z(circle, up, 2.0), RadonError);
  CHECK_THROWS_AS(eval_Z(circle, up, 1.0), RadonError);  // vertical tangent

  const ConicCoefficients parabola = conic_from_jet({0, 0, 2, 0, 0});
  const ZValue zp = eval_Z(parabola, select_branch(parabola, 0, 0), 1.0);
  CHECK(zp.y == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(zp.q == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("jet_at matches hand derivatives of the circle") {
  const ConicCoefficients c = conic_from_jet({1, 0, -1, 0, -3});
  const double x = 0.6, y = 0.8;
  const Jet5 j = jet_at(c, select_branch(c, 0, 1), x);
  CHECK(j[0] == doctest::Approx(y));
  CHECK(j[1] == doctest::Approx(-x / y));
  CHECK(j[2] == doctest::Approx(-1 / std::pow(y, 3)));
  CHECK(j[3] == doctest::Approx(-3 * x / std::pow(y, 5)));
  CHECK(j[4] == doctest::Approx(-3 / std::pow(y, 5) - 15 * x * x / std::pow(y, 7)));
}

TEST_CASE("ODE integration against closed forms") {
  const JetOde conics = builtin("conics5");
  const Jet5 X{1, 0, -1, 0, -3};
  const ConicCoefficients c = conic_from_jet(X);
  const Jet5 num = integrate_ode(conics, X, 0, 0.3);
  const Jet5 exact = jet_at(c, select_branch(c, 0, 1), 0.3);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(num[i] - exact[i]) < 1e-8 * (1 + std::abs(exact[i])));

  const Jet5 g = integrate_ode(builtin("gn5"), gn5_solution(0), 0, 0.5);
  const Jet5 ge = gn5_solution(0.5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(g[i] - ge[i]) < 1e-8 * (1 + std::abs(ge[i])));
  const Jet5 back = integrate_ode(builtin("gn5"), gn5_solution(0), 0, -0.4);
  CHECK(back[0] == doctest::Approx(gn5_solution(-0.4)[0]).epsilon(1e-9));

  CHECK(integrate_ode(conics, X, 0.2, 0.2) == X);
  CHECK_THROWS_AS(integrate_ode(builtin("conics4"), X, 0, 1), RadonError);
}

TEST_CASE("Gauss-Legendre rule") {
  const QuadratureRule r = gauss_legendre(5, -1, 3);
  double w = 0, m9 = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    w += r.weights[i];
    m9 += r.weights[i] * std::pow(r.nodes[i], 9);
  }
  CHECK(w == doctest::Approx(4.0));
  CHECK(m9 == doctest::Approx((std::pow(3.0, 10) - 1) / 10).epsilon(1e-13));  // exact to degree 9
  CHECK_THROWS_AS(gauss_legendre(0, 0, 1), RadonError);
}

TEST_CASE("Radon integral on the parabola") {
  RadonConfig cfg;
  cfg.x_a = -1;
  cfg.x_b = 1;
  CHECK(radon_F(cfg, Jet5{0, 0, 2, 0, 0}) == doctest::Approx(2 * std::cbrt(2.0)).epsilon(1e-14));
  cfg.f = Expr(Var::x);
  CHECK(std::abs(radon_F(cfg, Jet5{0, 0, 2, 0, 0})) < 1e-14);
  cfg.f = Expr(Var::q);
  CHECK_THROWS_AS(radon_F(cfg, Jet5{0, 0, 2, 0, 0}), RadonError);
}

TEST_CASE("Radon integral requires a usable interval") {
  RadonConfig cfg;
  cfg.x_a = -2;
  cfg.x_b = 0.5;
  CHECK_THROWS_AS(radon_F(cfg, Jet5{1, 0, -1, 0, -3}), RadonError);  // leaves the circle
  cfg.x_a = 0.5;
  cfg.x_b = 0.5;
  CHECK_THROWS_AS(radon_F(cfg, Jet5{1, 0, -1, 0, -3}), RadonError);
}

TEST_CASE("F depends on the conic, not the base point of the jet") {
  const Jet5 X{0.1, 0.2, 1, 0.3, -0.2};
  const ConicCoefficients c = conic_from_jet(X);
  RadonConfig a;
  RadonConfig b = a;
  b.x0 = 0.15;
  const Jet5 Y = jet_at(c, select_branch(c, 0, X[0]), b.x0);
  CHECK(radon_F(b, Y) == doctest::Approx(radon_F(a, X)).epsilon(1e-13));
  // Control: the unmoved jet read at the moved base point is another conic.
  CHECK(std::abs(radon_F(b, X) - radon_F(a, X)) > 1e-3);
}

TEST_CASE("finite differences of F") {
  RadonConfig cfg;
  cfg.f = Expr(Var::y);
  const Jet5 X{0.1, 0.2, 1, 0.3, -0.2};
  const FdDerivatives d1 = fd_derivatives(cfg, X, 1e-3), d2 = fd_derivatives(cfg, X, 5e-4);
  for (std::size_t i = 0; i < 5; ++i) CHECK(d1.grad[i] == doctest::Approx(d2.grad[i]).epsilon(1e-8));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(d1.hessian[i * 5 + j] == d1.hessian[j * 5 + i]);
  // dF/dy for f = y is the integral of q^{1/3} times dZ/dy along the conic; compare with a wide difference.
  Jet5 Xp = X, Xm = X;
  Xp[0] += 1e-2;
  Xm[0] -= 1e-2;
  CHECK(d1.grad[0] == doctest::Approx((radon_F(cfg, Xp) - radon_F(cfg, Xm)) / 2e-2).epsilon(1e-3));
  CHECK_THROWS_AS(fd_derivatives(cfg, X, 0.0), RadonError);
}

TEST_CASE("integral formula solves the system with lambda = 1/3") {
  const JetOde ode = builtin("conics5");
  const PentadData pd = solve_pentad(ode);
  const MetricField m = metric_from_frame(pd);
  const CurvatureEngine engine(m);
  const So3Engine se(build_G(pd, m), engine);
  RadonSuiteOptions ro;
  const auto pts = radon_points(ro, 3, kDefaultSeed);
  REQUIRE(pts.size() == 3);
  for (const Expr& f : {Expr(1), Expr(Var::x) * Expr(Var::y)}) {
    RadonConfig cfg;
    cfg.f = f;
    cfg.x_a = ro.x_a;
    cfg.x_b = ro.x_b;
    const RadonVerification v = verify_system(cfg, pts, se, -60.0);
    CHECK(v.max_residual < 1e-4);
    CHECK(v.lambda == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
    CHECK(v.mu == doctest::Approx(-16.0 / 3.0).epsilon(1e-4));
    CHECK(v.mu_error < 1e-3);
  }
  RadonConfig cfg;
  CHECK_THROWS_AS(verify_system(cfg, std::span<const Assignment>(pts.data(), 1), se, -60.0), RadonError);
}
