#include <cmath>

#include "doctest.h"
#include "odegeom/connection.hpp"
#include "odegeom/geom.hpp"
#include "odegeom/reference.hpp"
#include "odegeom/so3.hpp"

using namespace odegeom;

namespace {

MetricField diagonal(std::vector<Var> coords, const Expr& conformal) {
  const std::size_t n = coords.size();
  MetricField m;
  m.coords = std::move(coords);
  m.lower = ExprMatrix(n, n);
  for (std::size_t a = 0; a < n; ++a) m.lower(a, a) = conformal;
  m.upper = cofactor_inverse(m.lower);
  return m;
}

const MetricField& conics5_metric() {
  static const MetricField m = metric_from_frame(solve_pentad(builtin("conics5")));
  return m;
}

}  // namespace

TEST_CASE("hyperbolic plane has scalar curvature -2") {
  const MetricField m = diagonal({Var::p, Var::q}, pow(Expr(Var::q), Rational(-2)));
  const CurvatureEngine engine(m);
  const auto c = engine.at({{Var::p, 0.3}, {Var::q, 1.7}});
  CHECK(c.scalar == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(riemann_symmetry_residual(c) < 1e-12);
}

TEST_CASE("unit 3-sphere has scalar curvature 6 and Ricci 2g") {
  // Stereographic coordinates: g = 4 / (1 + |u|^2)^2 delta.
  const Expr u2 = parse("p^2 + q^2 + r^2");
  const MetricField m = diagonal({Var::p, Var::q, Var::r}, Expr(4) * pow(Expr(1) + u2, Rational(-2)));
  const CurvatureEngine engine(m);
  for (const Assignment& a : {Assignment{{Var::p, 0.1}, {Var::q, -0.4}, {Var::r, 0.7}},
                              Assignment{{Var::p, 1.3}, {Var::q, 0.2}, {Var::r, -0.9}}}) {
    const auto c = engine.at(a);
    CHECK(c.scalar == doctest::Approx(6.0).epsilon(1e-12));
    for (std::size_t i = 0; i < 9; ++i) CHECK(c.ricci[i] == doctest::Approx(2.0 * c.g[i]).epsilon(1e-12));
    CHECK(signature(c) == std::pair<int, int>{3, 0});
  }
}

TEST_CASE("frame pairing") {
  CHECK(frame_pairing(0, 4) == Rational(1));
  CHECK(frame_pairing(1, 3) == Rational(-4));
  CHECK(frame_pairing(2, 2) == Rational(6));
  CHECK(frame_pairing(0, 0) == Rational(0));
  CHECK(frame_pairing(1, 2) == Rational(0));
}

TEST_CASE("conic metric: routes, curvature and signature") {
  const MetricField& m = conics5_metric();
  const PentadData pd = solve_pentad(builtin("conics5"));
  const SampleDomain dom = default_domain(builtin("conics5"));
  CHECK(combine(equiv_batch(metric_upper_from_rows(pd).entries(), m.upper.entries(), dom)).pass);
  const CurvatureEngine engine(m);
  const auto pts = dom.sample_points(8, 5);
  for (const auto& c : engine.at_points(pts)) {
    CHECK(c.scalar == doctest::Approx(-60.0).epsilon(1e-9));
    CHECK(harmonic_residual(c) < 1e-8);
    CHECK(signature(c) == std::pair<int, int>{3, 2});
  }
}

TEST_CASE("parallel curvature batch is identical to the serial one") {
  const CurvatureEngine engine(conics5_metric());
  const auto pts = default_domain(builtin("conics5")).sample_points(16, 9);
  const auto par = engine.at_points(pts);
  const auto ser = engine.at_points_serial(pts);
  REQUIRE(par.size() == ser.size());
  for (std::size_t k = 0; k < par.size(); ++k) {
    CHECK(par[k].scalar == ser[k].scalar);
    CHECK(par[k].riemann == ser[k].riemann);
  }
}

TEST_CASE("gn5 is scalar-flat but not Ricci-flat") {
  const JetOde ode = builtin("gn5");
  const CurvatureEngine engine(metric_from_frame(solve_pentad(ode)));
  const auto c = engine.at(default_domain(ode).sample_points(1, 3)[0]);
  CHECK(std::abs(c.scalar) < 1e-9);
  double ric = 0;
  for (double v : c.ricci) ric = std::max(ric, std::abs(v));
  CHECK(ric > 1e-3);
}

TEST_CASE("frame law coefficients match the Leibniz expansion") {
  for (int m = 0; m <= 4; ++m) {
    const FrameLaw a = frame_law(m), b = frame_law_by_expansion(m);
    CHECK(a.phi == b.phi);
    CHECK(a.psi == b.psi);
    CHECK(a.chi == b.chi);
  }
  CHECK(frame_law(0).phi == -4);  // grad y = ... - 4 phi y
}

TEST_CASE("epsilon metric equals the pairing") {
  const auto g = frame_metric_tensor();
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(g[ix(5, i, j)] == frame_pairing(i, j));
}

TEST_CASE("structure tensor frame components") {
  const auto G = frame_structure_tensor();
  CHECK(G[ix(5, 0, 2, 4)] == Rational(1));
  CHECK(G[ix(5, 0, 3, 3)] == Rational(-2));
  CHECK(G[ix(5, 1, 1, 4)] == Rational(-2));
  CHECK(G[ix(5, 1, 2, 3)] == Rational(2));
  CHECK(G[ix(5, 2, 2, 2)] == Rational(-6));
  CHECK(G[ix(5, 4, 2, 0)] == Rational(1));
  CHECK(G[ix(5, 0, 0, 0)] == Rational(0));
}

TEST_CASE("mu from lambda") {
  CHECK(mu_lambda(0, -60) == doctest::Approx(-6));
  CHECK(mu_lambda(1, -60) == doctest::Approx(0));
  CHECK(mu_lambda(0, 0) == doctest::Approx(0));
}

TEST_CASE("SO(3) identities at a point") {
  const JetOde ode = builtin("conics5");
  const PentadData pd = solve_pentad(ode);
  const MetricField& m = conics5_metric();
  const CurvatureEngine engine(m);
  const So3Engine se(build_G(pd, m), engine);
  const auto r = so3_residuals(se.at(default_domain(ode).sample_points(1, 21)[0]));
  CHECK(r.g0 < 1e-10);
  CHECK(r.nabla_G < 1e-8);
  CHECK(r.g1 < 1e-8);
  CHECK(r.g2 < 1e-8);
  CHECK(r.g4 < 1e-8);
  CHECK(r.trace_7_12 < 1e-10);
  CHECK(r.trace_35_12 < 1e-10);
}

TEST_CASE("errata are demonstrated, not assumed") {
  const SampleDomain dom = default_domain(builtin("gn5"));
  const auto printed = *reference::metric("gn5");
  const MetricField m = metric_from_frame(solve_pentad(builtin("gn5")));
  CHECK_FALSE(equiv(m.upper(3, 4), printed.upper(3, 4), dom).pass);
  CHECK(equiv(m.upper(3, 4), reference::corrected(printed.upper, "gn5", "metric_upper")(3, 4), dom).pass);
  CHECK_FALSE(combine(equiv_batch((printed.lower * printed.upper).entries(), ExprMatrix::identity(5).entries(), dom))
                  .pass);
}
