#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odegeom/expr_matrix.hpp"
#include "odegeom/jet.hpp"

// Closed forms published for the three built-in equations. Checks compare
// the constructed objects against these.
namespace odegeom::reference {

/// True when `ode` is one of the built-in equations with its built-in
/// right-hand side, so that the published forms apply to it.
bool is_published(const JetOde& ode);

struct PentadForms {
  Expr P;
  Expr Q;
  std::map<std::string, Expr> coefficients;
  /// Rows e^1..e^n over (dy, dp, ...); empty when not published.
  ExprMatrix coframe;
  /// Columns E_1..E_n; empty when not published.
  ExprMatrix frame;
};

std::optional<PentadForms> pentad(std::string_view ode);

struct MetricForms {
  ExprMatrix lower;
  ExprMatrix upper;
};

/// Matrices exactly as printed.
std::optional<MetricForms> metric(std::string_view ode);

/// A printed entry that disagrees with the construction and is shown to be a
/// misprint by an independent consistency test.
struct Erratum {
  std::string object;  // "metric_upper", "expansion_dq", "frame", "coefficient_B", ...
  /// Matrix entry, or for an expansion the coordinate indices of F_{row col}.
  std::size_t row, col;
  Expr printed;
  Expr corrected;
  std::string description;
  /// Matrix errata on symmetric objects also replace the mirrored entry.
  bool symmetric = true;
};

std::vector<Erratum> errata(std::string_view ode);

/// Applies the errata for `object` to a copy of `m` (symmetric entries too).
ExprMatrix corrected(const ExprMatrix& m, std::string_view ode, std::string_view object);

/// Contravariant entries g(dX^a, dX^b) derived by repeated differentiation,
/// keyed by coordinate pair (a <= b), as far as they are published.
std::vector<std::pair<std::pair<Var, Var>, Expr>> pairing_chain(std::string_view ode);

/// g_yy for conics5, a first integral of the equation.
Expr conics5_first_integral();

struct ConnectionForms {
  Expr alpha, gamma, delta;
  std::vector<Expr> psi;  // components over (dy, dp, dq, dr, ds)
};

ConnectionForms conics5_connection();

/// One printed coordinate component of G_a^{bc} grad_b grad_c F.
struct ExpansionTerm {
  Var first, second;  // second derivative F_{first second}
  Expr coefficient;
};
struct ExpansionComponent {
  Var component;
  std::vector<ExpansionTerm> terms;
  Rational gradient_coefficient;  // coefficient of F_component
};

/// Printed expansion for conics5. The symbol s' is represented by the
/// right-hand side of the equation.
std::vector<ExpansionComponent> conics5_operator_expansion();

/// The expansion with the conics5 errata applied.
std::vector<ExpansionComponent> corrected_expansion(const std::vector<ExpansionComponent>& table);

/// conics4 two-form as printed, omega(a, b) the coefficient of dX^a ^ dX^b.
ExprMatrix conics4_symplectic();
/// Coefficient of dy ^ dp ^ dq ^ dr in omega ^ omega: -1 / (18 P^6).
Expr conics4_wedge_square();

}  // namespace odegeom::reference
