#include <cmath>

#include "doctest.h"
#include "odegeom/equiv.hpp"
#include "odegeom/expr.hpp"
#include "odegeom/jet.hpp"

using namespace odegeom;

namespace {

SampleDomain box() {
  SampleDomain d;
  d.set(Var::x, {0.5, 2}).set(Var::y, {-1, 1}).set(Var::p, {-1, 1});
  d.set(Var::q, {0.5, 2}).set(Var::r, {0.5, 2}).set(Var::s, {-1, 1});
  return d;
}

// Central difference of e in v at a point.
double numeric_partial(const Expr& e, Var v, Assignment a) {
  const double h = 1e-5, x = a.get(v);
  a.set(v, x + h);
  const double fp = eval(e, a);
  a.set(v, x - h);
  const double fm = eval(e, a);
  return (fp - fm) / (2 * h);
}

}  // namespace

TEST_CASE("conic right-hand side at q, r, s = 1, 3, 2") {
  const Expr rhs = builtin("conics5").rhs();
  Assignment a{{Var::x, 0}, {Var::y, 0}, {Var::p, 0}, {Var::q, 1}, {Var::r, 3}, {Var::s, 2}};
  CHECK(eval(rhs, a) == doctest::Approx(-90.0).epsilon(1e-15));
}

TEST_CASE("smart constructors fold constants and merge powers") {
  const Expr q(Var::q);
  CHECK((Expr(2) + Expr(3)).is_constant());
  CHECK((Expr(2) + Expr(3)).value() == Rational(5));
  CHECK((q * q) == pow(q, Rational(2)));
  CHECK((q - q).is_zero());
  CHECK((Expr(0) * q).is_zero());
  CHECK((Expr(1) * q) == q);
}

TEST_CASE("print then parse gives the same expression") {
  for (const char* text : {"-(40/9)*r^3/q^2 + 5*r*s/q", "(5/3)*s^2/r", "q^(4/9)*(x*q + p + 2)^(1/3)",
                           "r^2/(48*q^(5/2)) - s", "-(y - x)^(-2)*p"}) {
    const Expr e = parse(text);
    const Expr back = parse(to_string(e));
    CHECK(to_string(back) == to_string(e));
    CHECK(equiv(e, back, box()).pass);
  }
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse("q^"), ParseError);
  CHECK_THROWS_AS(parse("(q + r"), ParseError);
  CHECK_THROWS_AS(parse("z + 1"), ParseError);
  CHECK_THROWS_AS(parse("q^r"), ParseError);
}

TEST_CASE("diff agrees with central differences") {
  const Expr e = parse("q^(1/2)*r^3/(x*p - y) + s^2*q^(-4/3) - 7*r*s");
  const auto pts = box().sample_points(5, 11);
  for (const auto& a : pts)
    for (Var v : kAllVars) {
      const double d = eval(diff(e, v), a);
      CHECK(d == doctest::Approx(numeric_partial(e, v, a)).epsilon(1e-6));
    }
}

TEST_CASE("diff obeys product rule and commutes") {
  const Expr f = parse("q^(1/2)*r + s/q"), g = parse("r^(1/3)*x - p^2");
  for (Var v : {Var::q, Var::r, Var::x}) {
    CHECK(equiv(diff(f * g, v), diff(f, v) * g + f * diff(g, v), box()).pass);
    CHECK(equiv(diff(diff(f * g, v), Var::s), diff(diff(f * g, Var::s), v), box()).pass);
  }
}

TEST_CASE("eval errors") {
  Assignment a{{Var::q, -1.0}, {Var::r, 0.0}};
  CHECK_THROWS_AS(eval(parse("q^(1/2)"), a), EvalError);
  CHECK_THROWS_AS(eval(parse("1/r"), a), EvalError);
  CHECK_THROWS_AS(eval(parse("s"), a), EvalError);
  CHECK_THROWS_AS(eval(parse("q^(1/3)"), a), EvalError);
}

TEST_CASE("program matches eval") {
  std::vector<Expr> outs{parse("q^(1/2)*r"), parse("r^2/q + s"), parse("q^(1/2)*r*s")};
  const Program prog(outs);
  for (const auto& a : box().sample_points(10, 3)) {
    const auto v = prog.run(a);
    for (std::size_t i = 0; i < outs.size(); ++i) CHECK(v[i] == doctest::Approx(eval(outs[i], a)).epsilon(1e-14));
  }
}

TEST_CASE("equiv separates non-identities and is reproducible") {
  const Expr a = parse("(q + r)^2"), b = parse("q^2 + 2*q*r + r^2"), c = parse("q^2 + r^2");
  CHECK(equiv(a, b, box()).pass);
  const auto bad = equiv(a, c, box());
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_residual > 0.1);
  CHECK_FALSE(bad.worst_point.empty());
  const auto again = equiv(a, c, box());
  CHECK(again.max_residual == bad.max_residual);
  EquivOptions other;
  other.seed = 99;
  CHECK(equiv(a, c, box(), other).max_residual != bad.max_residual);
}

TEST_CASE("equiv_batch is bit-identical to the serial reference") {
  std::vector<Expr> lhs, rhs;
  for (int k = 1; k < 30; ++k) {
    lhs.push_back(pow(parse("q + r/s"), Rational(k, 3)));
    rhs.push_back(pow(parse("q*s + r"), Rational(k, 3)) * pow(Expr(Var::s), Rational(-k, 3)));
  }
  SampleDomain d = box();
  d.set(Var::s, {0.5, 2});
  EquivOptions o;
  o.samples = 200;
  const auto par = equiv_batch(lhs, rhs, d, o);
  const auto ser = equiv_batch_serial(lhs, rhs, d, o);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].max_residual == ser[i].max_residual);
    CHECK(par[i].worst_point == ser[i].worst_point);
    CHECK(par[i].pass);
  }
}

TEST_CASE("scaled residual") {
  CHECK(scaled_residual(1.0, 1.0) == 0.0);
  CHECK(scaled_residual(0.0, 1.0) == doctest::Approx(0.5));
  CHECK(scaled_residual(1e6, 1e6 + 1) == doctest::Approx(1.0 / (1e6 + 2)));
}
