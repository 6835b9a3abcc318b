#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "odegeom/equiv.hpp"
#include "odegeom/eval.hpp"
#include "odegeom/expr_matrix.hpp"
#include "odegeom/pentad.hpp"
#include "odegeom/report.hpp"

namespace odegeom {

class GeomError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Metric on the solution space of a fifth-order ODE in the coordinates
/// (y, p, q, r, s) at the base point.
struct MetricField {
  std::vector<Var> coords;
  ExprMatrix lower;
  ExprMatrix upper;

  std::size_t dim() const { return coords.size(); }
};

/// Pairing K_ij = g(e_i, e_j)-coefficients of g = sum K_ij e^i e^j: the
/// nonzero entries are K_04 = K_40 = 1, K_13 = K_31 = -4, K_22 = 6, so that
/// g = 2 e1.e5 - 8 e2.e4 + 6 e3.e3.
Rational frame_pairing(std::size_t i, std::size_t j);

/// g_lower from the coframe, g_upper by symbolic cofactor inversion.
MetricField metric_from_frame(const PentadData& pd);

/// Contravariant metric built directly from the rows dX^k in the dyad basis:
/// g^{kl} = sum_ij rows(k, i) K^{-1}_ij rows(l, j). No inversion involved.
ExprMatrix metric_upper_from_rows(const PentadData& pd);

/// Row-major n x n index helpers for flat tensor storage.
inline std::size_t ix(std::size_t n, std::size_t a, std::size_t b) { return a * n + b; }
inline std::size_t ix(std::size_t n, std::size_t a, std::size_t b, std::size_t c) { return (a * n + b) * n + c; }
inline std::size_t ix(std::size_t n, std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  return ((a * n + b) * n + c) * n + d;
}

/// Levi-Civita data at one point. Conventions:
///   gamma(a, b, c) = Gamma^a_{bc},
///   R_{abcd} with R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb} + ...,
///   Ric_{bd} = g^{ac} R_{abcd}, so the round sphere has R > 0.
struct CurvatureAtPoint {
  Assignment point;
  std::size_t n = 0;
  std::vector<double> g, g_inv;
  std::vector<double> dg;          // dg[ix(c, a, b)] = d_c g_ab
  std::vector<double> christoffel; // [ix(a, b, c)] = Gamma^a_bc
  std::vector<double> riemann;     // [ix(a, b, c, d)] = R_abcd
  std::vector<double> ricci;       // [ix(a, b)]
  double scalar = 0.0;

  double gamma(std::size_t a, std::size_t b, std::size_t c) const { return christoffel[ix(n, a, b, c)]; }
  double R(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const { return riemann[ix(n, a, b, c, d)]; }
};

/// Compiles g, dg and ddg once; evaluates curvature at many points.
class CurvatureEngine {
 public:
  explicit CurvatureEngine(const MetricField& m);

  std::size_t dim() const { return n_; }
  const std::vector<Var>& coords() const { return coords_; }

  CurvatureAtPoint at(const Assignment& point) const;
  /// One point per OpenMP iteration.
  std::vector<CurvatureAtPoint> at_points(std::span<const Assignment> points) const;
  /// Serial reference for at_points; results are identical.
  std::vector<CurvatureAtPoint> at_points_serial(std::span<const Assignment> points) const;

 private:
  CurvatureAtPoint evaluate(const Assignment& point, std::vector<double>& scratch) const;

  std::size_t n_;
  std::vector<Var> coords_;
  Program program_;  // g (n^2), dg (n^3), ddg (n^4)
};

CurvatureAtPoint curvature(const MetricField& m, const Assignment& point);

/// Largest violation of R_abcd = -R_bacd = -R_abdc = R_cdab and of the first
/// Bianchi identity, relative to max |R_abcd|.
double riemann_symmetry_residual(const CurvatureAtPoint& c);

/// max_c |g^{ab} Gamma^c_ab|.
double harmonic_residual(const CurvatureAtPoint& c);

/// Numbers of positive and negative eigenvalues of g_lower at the point.
std::pair<int, int> signature(const CurvatureAtPoint& c);

/// Two-route agreement, inverse identity, and (for the built-in equations)
/// the printed matrices and pairing-chain entries.
CheckReport metric_pairing_check(const PentadData& pd, const MetricField& m, const JetOde& ode,
                                 const EquivOptions& opts);

/// Killing identity along the prolongation, D(g_yy) = 0, inverse identity.
CheckReport structure_checks(const MetricField& m, const JetOde& ode, const EquivOptions& opts);

/// Curvature, harmonicity, signature and Riemann symmetries at sample points.
CheckReport curvature_checks(const CurvatureEngine& engine, const JetOde& ode, const EquivOptions& opts);

}  // namespace odegeom
