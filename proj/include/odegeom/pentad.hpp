#pragma once

#include <map>
#include <string>
#include <vector>

#include "odegeom/equiv.hpp"
#include "odegeom/expr_matrix.hpp"
#include "odegeom/jet.hpp"

namespace odegeom {

/// One factor u^alpha of the product ansatz for P.
struct AnsatzFactor {
  std::string name;
  Expr base;
  Rational exponent;
};

/// A coefficient equation of the frame construction, lhs = rhs.
struct NamedIdentity {
  std::string name;
  Expr lhs;
  Expr rhs;
};

/// Frame data for an ODE of order n = N + 1, where N is the spinor valence.
///
/// The dyad basis is b_j = o^j iota^(N-j), j = 0..N. Row k of `rows`
/// expresses the differential of the k-th moduli coordinate (y, p, q, ...)
/// in that basis, so `rows` is lower triangular with diagonal N!/(N-k)! P^k.
struct PentadData {
  int order = 0;
  Expr P;
  Expr Q;
  std::vector<AnsatzFactor> p_ansatz;
  ExprMatrix rows;
  /// Derivative along the flow of the last row; for order four these are
  /// the coefficients E, F, G, H.
  std::vector<Expr> top_prime;
  /// e^(i+1) = sum_k coframe(i, k) dX^k.
  ExprMatrix coframe;
  /// Column j holds E_(j+1) = sum_k frame(k, j) d/dX^k.
  ExprMatrix frame;
  /// Coefficient equations not used to solve for P and Q. They hold
  /// identically when the ODE carries the structure.
  std::vector<NamedIdentity> residual_identities;
  /// The two equations used to determine P and Q, kept for re-checking.
  std::vector<NamedIdentity> solved_equations;
};

class PentadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies d/dx to sum_j m_j b_j using iota' = P o and o' = Q iota.
std::vector<Expr> prime_row(const std::vector<Expr>& m, const Expr& P, const Expr& Q, const JetOde& ode);

/// Rows d(y), d(p), ... generated from d(y) = iota^N by repeated priming.
ExprMatrix build_rows(const Expr& P, const Expr& Q, const JetOde& ode);

/// For each basis element b_j, the equation obtained by writing
/// (d top)' = sum_k (d rhs / d X^k) dX^k in the dyad basis.
std::vector<NamedIdentity> coefficient_equations(const ExprMatrix& rows, const Expr& P, const Expr& Q,
                                                 const JetOde& ode);

/// Solves for P (product ansatz over q, r, s, xp - y with rational
/// exponents), then Q, then builds the coframe and frame.
PentadData solve_pentad(const JetOde& ode);

/// A..H (and D for order four) keyed by letter.
std::map<std::string, Expr> coefficients(const PentadData& pd);

/// The closed-form recurrences for the coefficients in terms of P, Q and
/// their derivatives (A = 8P'Q + 4PQ', ...), as identities to check.
std::vector<NamedIdentity> defining_relations(const PentadData& pd, const JetOde& ode);

/// Two-form (iota)^3 ^ (o)^3 - 3 o(iota)^2 ^ (o)^2 iota in coordinates
/// (y, p, q, r) for an order-four ODE: omega(a, b) is the coefficient of
/// dX^a ^ dX^b.
ExprMatrix symplectic(const PentadData& pd);

/// Coefficient c of dy ^ dp ^ dq ^ dr in omega ^ omega.
Expr wedge_square(const ExprMatrix& omega);

/// Components (d omega)(a, b, c) for a < b < c, in lexicographic order.
std::vector<Expr> exterior_derivative(const ExprMatrix& omega, const std::vector<Var>& coords);

/// Lie derivative of a (0,2) tensor along d/dx + V, with x treated as an
/// explicit parameter. Vanishes iff the tensor is independent of the base
/// point x.
ExprMatrix flow_derivative(const ExprMatrix& t, const ProlongationField& v);

}  // namespace odegeom
