#pragma once

#include <span>
#include <vector>

#include "odegeom/geom.hpp"

namespace odegeom {

/// Frame components over e^1..e^5 of the totally symmetric tensor built
/// from six epsilons, index [ix(5, i, j, k)]. Computed by expanding the
/// symmetrizers over every spinor index ordering.
std::vector<Rational> frame_structure_tensor();

/// Frame components of the metric built from four epsilons the same way,
/// index [ix(5, i, j)]. Equals frame_pairing(i, j).
std::vector<Rational> frame_metric_tensor();

struct GTensor {
  std::vector<Rational> hat;  // frame components
  std::vector<Var> coords;
  std::vector<Expr> lower;    // G_abc at [ix(n, a, b, c)]
};

GTensor build_G(const PentadData& pd, const MetricField& m);

/// Numeric G data at one point, sharing the curvature evaluation.
struct So3Point {
  CurvatureAtPoint curv;
  std::vector<double> G;      // G_abc
  std::vector<double> G_up;   // G^abc
  std::vector<double> G_mix;  // G_a^bc at [ix(a, b, c)]
  std::vector<double> dG;     // d_d G_abc at [ix(d, a, b, c)]
};

class So3Engine {
 public:
  So3Engine(const GTensor& G, const CurvatureEngine& engine);

  std::size_t dim() const { return n_; }
  So3Point at(const Assignment& point) const;
  std::vector<So3Point> at_points(std::span<const Assignment> points) const;

 private:
  std::size_t n_;
  const CurvatureEngine* engine_;
  Program program_;  // G (n^3), dG (n^4)
};

/// Largest relative residuals of the identities at one point.
struct So3Residuals {
  double g0 = 0, nabla_G = 0, g1 = 0, g2 = 0, g2_symmetric = 0, g4 = 0, trace_free = 0, trace_7_12 = 0,
         trace_35_12 = 0;
};

So3Residuals so3_residuals(const So3Point& s);

struct HorOperatorValue {
  Assignment point;
  std::vector<double> v;     // G_a^bc grad_b grad_c F
  std::vector<double> grad;  // d_a F
  double laplacian = 0.0;
};

/// Operator values from the first and second partial derivatives of F at
/// the point (hessian row-major, n x n).
HorOperatorValue hor_operator(const So3Point& s, std::span<const double> grad, std::span<const double> hessian);

/// mu = 6 lambda^2 + R / 10.
double mu_lambda(double lambda, double R);

CheckReport g_identities(const GTensor& G, const MetricField& m, const So3Engine& engine, const JetOde& ode,
                         const EquivOptions& opts);

/// Printed coordinate expansion of G_a^bc grad_b grad_c F against the
/// tensorial value, for random quadratic F (gradient and Hessian uniform in
/// [-1, 1]) at random points.
CheckReport expansion_check(const So3Engine& engine, const JetOde& ode, const EquivOptions& opts,
                            std::size_t functions_per_point = 20);

}  // namespace odegeom
