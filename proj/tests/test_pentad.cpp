#include "doctest.h"
#include "odegeom/pentad.hpp"
#include "odegeom/reference.hpp"

using namespace odegeom;

namespace {

bool identities_hold(const PentadData& pd, const SampleDomain& dom) {
  for (const auto* set : {&pd.solved_equations, &pd.residual_identities})
    for (const auto& id : *set)
      if (!equiv(id.lhs, id.rhs, dom).pass) return false;
  return true;
}

}  // namespace

TEST_CASE("P and Q for the built-in equations") {
  struct Case {
    const char* ode;
    const char* P;
    const char* Q;
  };
  for (const Case& c : {Case{"conics5", "q^(1/2)", "r^2/(48*q^(5/2))"}, Case{"gn5", "r^(1/3)", "0"},
                        Case{"conics4", "q^(4/9)*(x*p - y)^(1/3)",
                             "(2*r^2/(9*q^2) + x*r/(3*(x*p - y)) - x^2*q^2/(x*p - y)^2)/(9*q^(4/9)*(x*p - y)^(1/3))"}}) {
    CAPTURE(c.ode);
    const JetOde ode = builtin(c.ode);
    const PentadData pd = solve_pentad(ode);
    const SampleDomain dom = default_domain(ode);
    CHECK(equiv(pd.P, parse(c.P), dom).pass);
    CHECK(equiv(pd.Q, parse(c.Q), dom).pass);
    CHECK(identities_hold(pd, dom));
  }
}

TEST_CASE("rows are lower triangular with diagonal N!/(N-k)! P^k") {
  const JetOde ode = builtin("conics5");
  const PentadData pd = solve_pentad(ode);
  const int diag[5] = {1, 4, 12, 24, 24};
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(equiv(pd.rows(k, k), Expr(diag[k]) * pow(pd.P, Rational(static_cast<long>(k))), default_domain(ode)).pass);
    for (std::size_t j = k + 1; j < 5; ++j) CHECK(pd.rows(k, j).is_zero());
  }
}

TEST_CASE("prime_row applies the Leibniz rule") {
  // (iota^4)' = 4 P o iota^3 for a constant multiple of iota^4.
  const JetOde ode = builtin("conics5");
  const Expr P = parse("q^(1/2)"), Q = parse("r^2/(48*q^(5/2))");
  std::vector<Expr> m(5, Expr(0));
  m[0] = Expr(1);
  const auto out = prime_row(m, P, Q, ode);
  CHECK(out[0].is_zero());
  CHECK(equiv(out[1], Expr(4) * P, default_domain(ode)).pass);
  for (std::size_t j = 2; j < 5; ++j) CHECK(out[j].is_zero());
}

TEST_CASE("coframe and frame are inverse") {
  for (const char* name : {"conics5", "gn5", "conics4"}) {
    const JetOde ode = builtin(name);
    const PentadData pd = solve_pentad(ode);
    const std::size_t n = static_cast<std::size_t>(ode.order());
    CHECK(combine(equiv_batch((pd.coframe * pd.frame).entries(), ExprMatrix::identity(n).entries(),
                              default_domain(ode)))
              .pass);
  }
}

TEST_CASE("perturbing the conic equation breaks an identity") {
  const JetOde bad("bad", 5, parse("-(41/9)*r^3/q^2 + 5*r*s/q"));
  bool broken = false;
  try {
    broken = !identities_hold(solve_pentad(bad), default_domain(bad));
  } catch (const PentadError&) {
    broken = true;
  }
  CHECK(broken);
}

TEST_CASE("defining relations hold") {
  for (const char* name : {"conics5", "gn5", "conics4"}) {
    const JetOde ode = builtin(name);
    const PentadData pd = solve_pentad(ode);
    for (const auto& id : defining_relations(pd, ode)) {
      CAPTURE(id.name);
      CHECK(equiv(id.lhs, id.rhs, default_domain(ode)).pass);
    }
  }
}

TEST_CASE("conics4 two-form") {
  const JetOde ode = builtin("conics4");
  const PentadData pd = solve_pentad(ode);
  const SampleDomain dom = default_domain(ode);
  const ExprMatrix w = symplectic(pd);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) CHECK(equiv(w(a, b), -w(b, a), dom).pass);
  CHECK(equiv(wedge_square(w), Expr(Rational(-1, 18)) * pow(pd.P, Rational(-6)), dom).pass);
  const auto d = exterior_derivative(w, ode.moduli_coords());
  CHECK(d.size() == 4);
  for (const auto& e : d) CHECK(equiv(e, Expr(0), dom).pass);
  // The printed form differs in two entries and is not closed.
  const auto dp = exterior_derivative(reference::conics4_symplectic(), ode.moduli_coords());
  bool printed_closed = true;
  for (const auto& e : dp) printed_closed = printed_closed && equiv(e, Expr(0), dom).pass;
  CHECK_FALSE(printed_closed);
  const ExprMatrix fixed = reference::corrected(reference::conics4_symplectic(), "conics4", "symplectic");
  CHECK(combine(equiv_batch(w.entries(), fixed.entries(), dom)).pass);
}

TEST_CASE("exterior derivative of a closed and a non-closed form") {
  const std::vector<Var> c{Var::y, Var::p, Var::q, Var::r};
  ExprMatrix exact(4, 4), other(4, 4);
  // d(q dy) = dq ^ dy, closed; y dp ^ dq has d = dy ^ dp ^ dq.
  exact(2, 0) = Expr(1);
  exact(0, 2) = Expr(-1);
  other(1, 2) = Expr(Var::y);
  other(2, 1) = -Expr(Var::y);
  for (const auto& e : exterior_derivative(exact, c)) CHECK(e.is_zero());
  const auto d = exterior_derivative(other, c);
  SampleDomain dom;
  dom.set(Var::y, {1, 2});
  CHECK(equiv(d[0], Expr(1), dom).pass);  // (y, p, q)
}
