#include "odegeom/radon.hpp"

#include <gsl/gsl_integration.h>

#include <Eigen/Dense>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <memory>

namespace odegeom {

namespace {

constexpr std::array<Var, 5> kJetVars{Var::y, Var::p, Var::q, Var::r, Var::s};

// Taylor coefficients y_k = y^(k)(x0) / k! of the jet.
std::array<double, 5> taylor(const Jet5& jet) {
  return {jet[0], jet[1], jet[2] / 2.0, jet[3] / 6.0, jet[4] / 24.0};
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

Jet5 jet_from_assignment(const Assignment& X) {
  Jet5 j{};
  for (std::size_t i = 0; i < 5; ++i) j[i] = X.get(kJetVars[i]);
  return j;
}

ConicCoefficients conic_from_jet(const Jet5& jet, double x0) {
  const double scale = 1.0 + std::abs(jet[0]) + std::abs(jet[1]);
  if (std::abs(jet[2]) <= 1e-12 * scale) throw RadonError("degenerate jet: q = 0");
  const auto y = taylor(jet);
  // Row k: coefficient of u^k in each monomial along x = x0 + u, y = Y(u).
  Eigen::Matrix<double, 5, 6> M = Eigen::Matrix<double, 5, 6>::Zero();
  const double X[3] = {x0, 1.0, 0.0};
  const double X2[3] = {x0 * x0, 2.0 * x0, 1.0};
  for (int k = 0; k < 5; ++k) {
    double xy = x0 * y[k] + (k >= 1 ? y[k - 1] : 0.0);
    double yy = 0.0;
    for (int i = 0; i <= k; ++i) yy += y[i] * y[k - i];
    M(k, 0) = k < 3 ? X2[k] : 0.0;
    M(k, 1) = 2.0 * xy;
    M(k, 2) = yy;
    M(k, 3) = k < 3 ? 2.0 * X[k] : 0.0;
    M(k, 4) = 2.0 * y[k];
    M(k, 5) = k == 0 ? 1.0 : 0.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(M), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(4) <= 1e-12 * sv(0)) throw RadonError("degenerate jet: conic null space has dimension > 1");
  Eigen::VectorXd v = svd.matrixV().col(5);
  v.normalize();
  // Fix the overall sign so that the largest entry is positive.
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0) v = -v;
  ConicCoefficients c;
  for (int i = 0; i < 6; ++i) c.c[i] = v(i);

  const Branch b = select_branch(c, x0, jet[0]);
  const Jet5 back = jet_at(c, b, x0);
  double worst = 0.0;
  for (std::size_t i = 0; i < 5; ++i) worst = std::max(worst, scaled_residual(back[i], jet[i]));
  if (worst > 1e-8) throw RadonError("conic does not reproduce the jet (residual " + std::to_string(worst) + ")");
  return c;
}

namespace {

struct Roots {
  double y[2];  // sign -1, +1
  double disc;
  bool linear;
};

Roots roots_at(const ConicCoefficients& cc, double x) {
  const auto& k = cc.c;
  const double A = k[2];
  const double B = 2.0 * (k[1] * x + k[4]);
  const double C = k[0] * x * x + 2.0 * k[3] * x + k[5];
  Roots r{};
  if (A == 0.0) {
    if (B == 0.0) throw RadonError("vertical tangent");
    r.linear = true;
    r.y[0] = r.y[1] = -C / B;
    r.disc = B * B;
    return r;
  }
  r.disc = B * B - 4.0 * A * C;
  if (r.disc < 0.0) throw RadonError("discriminant negative at x = " + std::to_string(x));
  const double sq = std::sqrt(r.disc);
  for (int s : {-1, 1}) {
    // Avoid cancellation between -B and the square root.
    const bool direct = s * B < 0.0;
    r.y[(s + 1) / 2] = direct ? (-B + s * sq) / (2.0 * A) : 2.0 * C / (-B - s * sq);
  }
  return r;
}

}  // namespace

Branch select_branch(const ConicCoefficients& c, double x0, double y0) {
  const Roots r = roots_at(c, x0);
  if (r.linear) return {1};
  return {std::abs(r.y[1] - y0) <= std::abs(r.y[0] - y0) ? 1 : -1};
}

ZValue eval_Z(const ConicCoefficients& cc, Branch b, double x) {
  const auto& k = cc.c;
  const Roots r = roots_at(cc, x);
  const double y = r.y[(b.sign + 1) / 2];
  const double fy = k[1] * x + k[2] * y + k[4];  // half of d/dy of the conic
  const double fx = k[0] * x + k[1] * y + k[3];
  // Roots near a tangent carry sqrt(eps) error, so a slope above 1e6 counts as vertical.
  if (!std::isfinite(y) || std::abs(fy) <= 1e-6 * std::hypot(fx, fy)) throw RadonError("vertical tangent");
  const double p = -fx / fy;
  const double q = -(k[0] + 2.0 * k[1] * p + k[2] * p * p) / fy;
  return {y, q};
}

Jet5 jet_at(const ConicCoefficients& cc, Branch b, double x) {
  const auto& k = cc.c;
  std::array<double, 5> y{};
  y[0] = eval_Z(cc, b, x).y;
  const double fy = 2.0 * (k[1] * x + k[2] * y[0] + k[4]);
  const double X[3] = {x, 1.0, 0.0};
  const double X2[3] = {x * x, 2.0 * x, 1.0};
  for (int n = 1; n < 5; ++n) {
    double rest = (n < 3 ? k[0] * X2[n] + 2.0 * k[3] * X[n] : 0.0) + 2.0 * k[1] * y[n - 1];
    for (int i = 1; i < n; ++i) rest += k[2] * y[i] * y[n - i];
    y[n] = -rest / fy;
  }
  return {y[0], y[1], 2.0 * y[2], 6.0 * y[3], 24.0 * y[4]};
}

Jet5 integrate_ode(const JetOde& ode, const Jet5& X0, double x0, double x1, double tol) {
  if (ode.order() != 5) throw RadonError("integrate_ode needs a fifth-order ODE");
  if (x1 == x0) return X0;
  const Program rhs(std::span<const Expr>(&ode.rhs(), 1));
  using State = std::array<double, 5>;
  std::vector<double> scratch;
  auto system = [&](const State& s, State& ds, double x) {
    Assignment a;
    a.set(Var::x, x);
    for (std::size_t i = 0; i < 5; ++i) a.set(kJetVars[i], s[i]);
    double out = 0.0;
    rhs.run(a, std::span<double>(&out, 1), scratch);
    for (std::size_t i = 0; i < 4; ++i) ds[i] = s[i + 1];
    ds[4] = out;
  };
  namespace ode_ns = boost::numeric::odeint;
  auto stepper = ode_ns::make_controlled(tol, tol, ode_ns::runge_kutta_dopri5<State>());
  State s = X0;
  double x = x0;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  double dt = dir * std::min(1e-3, std::abs(x1 - x0));
  const double dt_min = 1e-14 * (1.0 + std::abs(x1 - x0));
  for (long steps = 0; dir * (x1 - x) > 0.0; ++steps) {
    if (steps > 1000000) throw RadonError("integrate_ode: step limit reached");
    if (dir * (x + dt - x1) > 0.0) dt = x1 - x;
    try {
      if (stepper.try_step(system, s, x, dt) == ode_ns::fail) {
        if (std::abs(dt) < dt_min) throw RadonError("integrate_ode: step size underflow");
      }
    } catch (const EvalError& e) {
      throw RadonError(std::string("integrate_ode: ") + e.what());
    }
    for (double v : s)
      if (!std::isfinite(v)) throw RadonError("integrate_ode: solution left the domain");
  }
  return s;
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw RadonError("quadrature order must be positive");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(n), &gsl_integration_glfixed_table_free);
  if (!table) throw RadonError("cannot allocate quadrature table");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) gsl_integration_glfixed_point(a, b, i, &rule.nodes[i], &rule.weights[i], table.get());
  return rule;
}

namespace {

double integrate(const RadonConfig& cfg, const QuadratureRule& rule, const Program& f, const Jet5& X) {
  if (!(cfg.x_b > cfg.x_a)) throw RadonError("empty integration interval");
  const ConicCoefficients c = conic_from_jet(X, cfg.x0);
  const Branch br = select_branch(c, cfg.x0, X[0]);
  const double sign = X[2] > 0 ? 1.0 : -1.0;
  // The branch must stay real with q one-signed up to the endpoints.
  for (double xe : {cfg.x_a, cfg.x_b})
    if (eval_Z(c, br, xe).q * sign <= 0.0) throw RadonError("q changes sign on the interval");
  std::vector<double> scratch;
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const ZValue z = eval_Z(c, br, x);
    if (z.q * sign <= 0.0) throw RadonError("q changes sign on the interval");
    Assignment a;
    a.set(Var::x, x);
    a.set(Var::y, z.y);
    double fv = 0.0;
    f.run(a, std::span<double>(&fv, 1), scratch);
    total += rule.weights[i] * fv * std::cbrt(z.q);
  }
  return total;
}

Program compile_f(const Expr& f) {
  const Program prog(std::span<const Expr>(&f, 1));
  for (Var v : kAllVars)
    if (prog.free_vars().contains(v) && v != Var::x && v != Var::y)
      throw RadonError("test function may depend on x and y only");
  return prog;
}

}  // namespace

double radon_F(const RadonConfig& cfg, const Jet5& X) {
  return integrate(cfg, gauss_legendre(cfg.order, cfg.x_a, cfg.x_b), compile_f(cfg.f), X);
}

double radon_F(const RadonConfig& cfg, const Assignment& X) { return radon_F(cfg, jet_from_assignment(X)); }

namespace {

struct Stencil {
  double F0;
  std::vector<double> grad, hess;
};

Stencil central(const std::function<double(const Jet5&)>& F, const Jet5& X, double h) {
  constexpr std::size_t n = 5;
  Stencil st{F(X), std::vector<double>(n), std::vector<double>(n * n)};
  auto shifted = [&](std::size_t i, double di, std::size_t j, double dj) {
    Jet5 Y = X;
    Y[i] += di;
    Y[j] += dj;
    return F(Y);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double fp = shifted(i, h, i, 0.0), fm = shifted(i, -h, i, 0.0);
    st.grad[i] = (fp - fm) / (2.0 * h);
    st.hess[i * n + i] = (fp - 2.0 * st.F0 + fm) / (h * h);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = (shifted(i, h, j, h) - shifted(i, h, j, -h) - shifted(i, -h, j, h) + shifted(i, -h, j, -h)) /
                       (4.0 * h * h);
      st.hess[i * n + j] = st.hess[j * n + i] = v;
    }
  return st;
}

}  // namespace

FdDerivatives fd_derivatives(const RadonConfig& cfg, const Jet5& X, double h) {
  if (!(h > 0.0)) throw RadonError("finite-difference step must be positive");
  const QuadratureRule rule = gauss_legendre(cfg.order, cfg.x_a, cfg.x_b);
  const Program f = compile_f(cfg.f);
  const std::function<double(const Jet5&)> F = [&](const Jet5& Y) { return integrate(cfg, rule, f, Y); };
  const Stencil coarse = central(F, X, h);
  const Stencil fine = central(F, X, h / 2.0);
  FdDerivatives d;
  d.value = coarse.F0;
  d.grad.resize(5);
  d.hessian.resize(25);
  for (std::size_t i = 0; i < 5; ++i) d.grad[i] = (4.0 * fine.grad[i] - coarse.grad[i]) / 3.0;
  for (std::size_t i = 0; i < 25; ++i) d.hessian[i] = (4.0 * fine.hess[i] - coarse.hess[i]) / 3.0;
  return d;
}

RadonVerification verify_system(const RadonConfig& cfg, std::span<const Assignment> points, const So3Engine& so3,
                                double scalar_curvature) {
  if (so3.dim() != 5) throw RadonError("verify_system needs the fifth-order structure");
  if (points.size() < 2) throw RadonError("verify_system needs at least two points");
  RadonVerification out;
  out.points.resize(points.size());
  std::vector<std::string> errors(points.size());
  const long npts = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < npts; ++k) {
    try {
      Assignment pt = points[k];
      pt.set(Var::x, cfg.x0);
      const FdDerivatives d = fd_derivatives(cfg, jet_from_assignment(pt), cfg.h);
      const HorOperatorValue hv = hor_operator(so3.at(pt), d.grad, d.hessian);
      RadonPointResult& r = out.points[k];
      r.point = pt;
      r.F = d.value;
      r.grad = d.grad;
      r.v = hv.v;
      r.laplacian = hv.laplacian;
      const double gg = norm(r.grad);
      if (gg <= 1e-10 * (1.0 + std::abs(r.F))) throw RadonError("gradient of F too small for a least-squares fit");
      double dot = 0.0;
      for (std::size_t a = 0; a < 5; ++a) dot += r.v[a] * r.grad[a];
      r.lambda = dot / (gg * gg);
      std::vector<double> res(5);
      for (std::size_t a = 0; a < 5; ++a) res[a] = r.v[a] - r.lambda * r.grad[a];
      const double vn = norm(r.v);
      r.residual = vn > 0.0 ? norm(res) / vn : norm(res);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw RadonError(e);

  double lmin = out.points[0].lambda, lmax = lmin, lsum = 0.0;
  for (const auto& r : out.points) {
    lmin = std::min(lmin, r.lambda);
    lmax = std::max(lmax, r.lambda);
    lsum += r.lambda;
    out.max_residual = std::max(out.max_residual, r.residual);
  }
  out.lambda = lsum / static_cast<double>(out.points.size());
  out.lambda_spread = lmax - lmin;

  // Delta F = mu F + mu c across the points.
  Eigen::MatrixXd A(points.size(), 2);
  Eigen::VectorXd b(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    A(k, 0) = out.points[k].F;
    A(k, 1) = 1.0;
    b(k) = out.points[k].laplacian;
  }
  const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
  out.mu = sol(0);
  out.shift = out.mu != 0.0 ? sol(1) / out.mu : 0.0;
  out.mu_error = std::abs(out.mu - mu_lambda(out.lambda, scalar_curvature));
  const Eigen::VectorXd fit = A * sol - b;
  out.fit_residual = fit.cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
  return out;
}

}  // namespace odegeom
