#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "odegeom/jet.hpp"
#include "odegeom/pentad.hpp"
#include "odegeom/reference.hpp"

using namespace odegeom;

TEST_CASE("built-in equations") {
  CHECK(builtin("conics5").order() == 5);
  CHECK(builtin("gn5").order() == 5);
  CHECK(builtin("conics4").order() == 4);
  CHECK(builtin("conics4").top() == Var::r);
  CHECK_THROWS_AS(builtin("unknown"), OdeError);
  CHECK(builtin_names().size() == 3);
}

TEST_CASE("total derivative is a derivation") {
  for (const char* name : {"conics5", "gn5", "conics4"}) {
    const JetOde ode = builtin(name);
    const SampleDomain dom = default_domain(ode);
    const Expr f = parse("q^(1/2)*r + x*p"), g = parse("r^2/q - y");
    const Expr lhs = total_derivative(f * g, ode);
    const Expr rhs = total_derivative(f, ode) * g + f * total_derivative(g, ode);
    CHECK(equiv(lhs, rhs, dom).pass);
    CHECK(equiv(total_derivative(Expr(Var::y), ode), Expr(Var::p), dom).pass);
    CHECK(equiv(total_derivative(Expr(ode.top()), ode), ode.rhs(), dom).pass);
  }
}

TEST_CASE("commutator of D with the top partial derivative") {
  // [D, d_s] f = -d_r f - Lambda_s d_s f.
  const JetOde ode = builtin("conics5");
  const Expr f = parse("q^(1/2)*r*s + s^2/q - x*y");
  const Expr comm = total_derivative(diff(f, Var::s), ode) - diff(total_derivative(f, ode), Var::s);
  const Expr expected = -diff(f, Var::r) - diff(ode.rhs(), Var::s) * diff(f, Var::s);
  CHECK(equiv(comm, expected, default_domain(ode)).pass);
}

TEST_CASE("ODE definition files") {
  const JetOde a = parse_ode_definition("# comment\nname = mine\norder: 5\nrhs = (5/3)*s^2/r\n");
  CHECK(a.name() == "mine");
  CHECK(a.order() == 5);
  CHECK(a.rhs() == builtin("gn5").rhs());
  CHECK_THROWS_AS(parse_ode_definition("order = 5\n"), OdeError);
  CHECK_THROWS_AS(parse_ode_definition("order = 7\nrhs = s\n"), OdeError);
  CHECK_THROWS_AS(parse_ode_definition("order = 5\nrhs = s\ncolour = red\n"), OdeError);
  CHECK_THROWS(parse_ode_definition("order = 5\nrhs = s +\n"));

  const auto path = std::filesystem::temp_directory_path() / "odegeom_test_ode.txt";
  {
    std::ofstream f(path);
    f << "name = conics5\norder = 5\nrhs = -(40/9)*r^3/q^2 + 5*r*s/q\n";
  }
  const JetOde b = load_ode_file(path);
  CHECK(reference::is_published(b));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_ode_file(path), OdeError);
}

TEST_CASE("prolongation field") {
  const JetOde ode = builtin("conics5");
  const ProlongationField v = prolongation(ode);
  REQUIRE(v.components.size() == 5);
  CHECK(v.components[0] == Expr(Var::p));
  CHECK(v.components[4] == ode.rhs());
}

TEST_CASE("published forms apply only to the exact built-in rhs") {
  CHECK(reference::is_published(builtin("gn5")));
  CHECK_FALSE(reference::is_published(JetOde("gn5", 5, parse("(5/3)*s^2/r + 1"))));
  CHECK_FALSE(reference::is_published(JetOde("other", 5, builtin("gn5").rhs())));
}
