#pragma once

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "odegeom/jet.hpp"
#include "odegeom/so3.hpp"

namespace odegeom {

class RadonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// a x^2 + 2b xy + c y^2 + 2d x + 2e y + f = 0, stored as (a, b, c, d, e, f)
/// with unit Euclidean norm.
struct ConicCoefficients {
  std::array<double, 6> c{};
};

/// Root of the conic equation in y: sign of the square root in
/// y = (-B + sign sqrt(B^2 - 4 c C)) / (2c), B = 2bx + 2e, C = ax^2 + 2dx + f.
struct Branch {
  int sign = 1;
};

/// Jet (y, p, q, r, s) of y(x).
using Jet5 = std::array<double, 5>;

Jet5 jet_from_assignment(const Assignment& X);

/// The conic through the given 4-jet at x0. Throws RadonError when q = 0 or
/// the null space is not one-dimensional.
ConicCoefficients conic_from_jet(const Jet5& jet, double x0 = 0.0);

/// Branch through (x0, y0).
Branch select_branch(const ConicCoefficients& c, double x0, double y0);

struct ZValue {
  double y = 0.0;
  double q = 0.0;
};

/// y and y'' on the branch at x. Throws RadonError for a negative
/// discriminant or a vertical tangent.
ZValue eval_Z(const ConicCoefficients& c, Branch b, double x);

/// Full 4-jet of the branch at x, by solving the implicit equation order by
/// order in x.
Jet5 jet_at(const ConicCoefficients& c, Branch b, double x);

/// Adaptive Dormand-Prince integration of the jet system of `ode` from x0
/// to x1 with absolute and relative local error `tol`.
Jet5 integrate_ode(const JetOde& ode, const Jet5& X0, double x0, double x1, double tol = 1e-12);

/// Nodes and weights of the n-point Gauss-Legendre rule on [a, b].
struct QuadratureRule {
  std::vector<double> nodes, weights;
};
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

struct RadonConfig {
  double x_a = -0.25, x_b = 0.25;
  std::size_t order = 40;
  double h = 1e-3;
  Expr f = Expr(1);
  /// Base point at which the jet coordinates are taken.
  double x0 = 0.0;
};

/// F(X) = integral over [x_a, x_b] of f(x, Z(x, X)) q^{1/3} dx.
double radon_F(const RadonConfig& cfg, const Jet5& X);
double radon_F(const RadonConfig& cfg, const Assignment& X);

struct FdDerivatives {
  std::vector<double> grad;     // n
  std::vector<double> hessian;  // n x n, row-major
  double value = 0.0;
};

/// Central differences with one Richardson level (steps h and h/2).
FdDerivatives fd_derivatives(const RadonConfig& cfg, const Jet5& X, double h);

struct RadonPointResult {
  Assignment point;
  double F = 0.0;
  double laplacian = 0.0;
  double lambda = 0.0;
  double residual = 0.0;  // |v - lambda grad F| / |v|
  std::vector<double> grad, v;
};

struct RadonVerification {
  std::vector<RadonPointResult> points;
  double lambda = 0.0;         // mean over points
  double lambda_spread = 0.0;  // max - min
  double max_residual = 0.0;
  double mu = 0.0;
  double shift = 0.0;  // c in Delta F = mu (F + c)
  double mu_error = 0.0;  // |mu - (6 lambda^2 + R/10)|
  double fit_residual = 0.0;  // max |Delta F - mu (F + c)| / max |Delta F|
};

/// Estimates lambda per point and mu, c by regression of Delta F on F
/// across the points (at least two).
RadonVerification verify_system(const RadonConfig& cfg, std::span<const Assignment> points, const So3Engine& so3,
                                double scalar_curvature);

}  // namespace odegeom
