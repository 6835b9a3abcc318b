#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "odegeom/geom.hpp"
#include "odegeom/reference.hpp"

namespace odegeom {

CurvatureEngine::CurvatureEngine(const MetricField& m) : n_(m.dim()), coords_(m.coords) {
  const std::size_t n = n_;
  std::vector<Expr> out(n * n + n * n * n + n * n * n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      const Expr& g = m.lower(a, b);
      out[ix(n, a, b)] = out[ix(n, b, a)] = g;
      for (std::size_t c = 0; c < n; ++c) {
        Expr dg = diff(g, coords_[c]);
        out[n * n + ix(n, c, a, b)] = out[n * n + ix(n, c, b, a)] = dg;
        for (std::size_t d = c; d < n; ++d) {
          Expr ddg = diff(dg, coords_[d]);
          const std::size_t base = n * n + n * n * n;
          out[base + ix(n, c, d, a, b)] = out[base + ix(n, d, c, a, b)] = ddg;
          out[base + ix(n, c, d, b, a)] = out[base + ix(n, d, c, b, a)] = ddg;
        }
      }
    }
  program_ = Program(out);
}

CurvatureAtPoint CurvatureEngine::evaluate(const Assignment& point, std::vector<double>& scratch) const {
  const std::size_t n = n_;
  const std::size_t n2 = n * n, n3 = n2 * n, n4 = n3 * n;
  std::vector<double> v(n2 + n3 + n4);
  program_.run(point, v, scratch);
  const double* ddg = v.data() + n2 + n3;  // ddg[ix(c, d, a, b)] = d_c d_d g_ab

  CurvatureAtPoint c;
  c.point = point;
  c.n = n;
  c.g.assign(v.begin(), v.begin() + n2);
  c.dg.assign(v.begin() + n2, v.begin() + n2 + n3);

  Eigen::MatrixXd g = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      c.g.data(), n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (!lu.isInvertible()) throw GeomError("singular metric at " + point.to_string());
  Eigen::MatrixXd gi = lu.inverse();
  c.g_inv.resize(n2);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) c.g_inv[ix(n, a, b)] = 0.5 * (gi(a, b) + gi(b, a));

  auto dg = [&](std::size_t k, std::size_t a, std::size_t b) { return c.dg[ix(n, k, a, b)]; };
  // Christoffel symbols of the first kind: low[ix(d, b, c)] = Gamma_{d,bc}.
  std::vector<double> low(n3);
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t e = 0; e < n; ++e) low[ix(n, d, b, e)] = 0.5 * (dg(b, d, e) + dg(e, d, b) - dg(d, b, e));
  c.christoffel.assign(n3, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t e = 0; e < n; ++e) {
        double s = 0.0;
        for (std::size_t d = 0; d < n; ++d) s += c.g_inv[ix(n, a, d)] * low[ix(n, d, b, e)];
        c.christoffel[ix(n, a, b, e)] = s;
      }

  auto dd = [&](std::size_t a, std::size_t b, std::size_t k, std::size_t l) { return ddg[ix(n, k, l, a, b)]; };
  c.riemann.assign(n4, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t cc = 0; cc < n; ++cc)
        for (std::size_t d = 0; d < n; ++d) {
          double r = 0.5 * (dd(a, d, b, cc) + dd(b, cc, a, d) - dd(a, cc, b, d) - dd(b, d, a, cc));
          for (std::size_t f = 0; f < n; ++f)
            r += low[ix(n, f, b, cc)] * c.gamma(f, a, d) - low[ix(n, f, b, d)] * c.gamma(f, a, cc);
          c.riemann[ix(n, a, b, cc, d)] = r;
        }

  c.ricci.assign(n2, 0.0);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t d = 0; d < n; ++d) {
      double s = 0.0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t cc = 0; cc < n; ++cc) s += c.g_inv[ix(n, a, cc)] * c.R(a, b, cc, d);
      c.ricci[ix(n, b, d)] = s;
    }
  c.scalar = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) c.scalar += c.g_inv[ix(n, a, b)] * c.ricci[ix(n, a, b)];
  return c;
}

CurvatureAtPoint CurvatureEngine::at(const Assignment& point) const {
  std::vector<double> scratch;
  return evaluate(point, scratch);
}

std::vector<CurvatureAtPoint> CurvatureEngine::at_points(std::span<const Assignment> points) const {
  std::vector<CurvatureAtPoint> out(points.size());
  std::vector<std::string> errors(points.size());
  const long m = static_cast<long>(points.size());
#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(dynamic)
    for (long i = 0; i < m; ++i) {
      try {
        out[i] = evaluate(points[i], scratch);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw GeomError(e);
  return out;
}

std::vector<CurvatureAtPoint> CurvatureEngine::at_points_serial(std::span<const Assignment> points) const {
  std::vector<CurvatureAtPoint> out;
  out.reserve(points.size());
  std::vector<double> scratch;
  for (const auto& p : points) out.push_back(evaluate(p, scratch));
  return out;
}

CurvatureAtPoint curvature(const MetricField& m, const Assignment& point) { return CurvatureEngine(m).at(point); }

double riemann_symmetry_residual(const CurvatureAtPoint& c) {
  const std::size_t n = c.n;
  double scale = 0.0, worst = 0.0;
  for (double v : c.riemann) scale = std::max(scale, std::abs(v));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t d = 0; d < n; ++d) {
          const double r = c.R(a, b, k, d);
          worst = std::max({worst, std::abs(r + c.R(b, a, k, d)), std::abs(r + c.R(a, b, d, k)),
                            std::abs(r - c.R(k, d, a, b)), std::abs(r + c.R(a, k, d, b) + c.R(a, d, b, k))});
        }
  return worst / std::max(scale, 1.0);
}

double harmonic_residual(const CurvatureAtPoint& c) {
  const std::size_t n = c.n;
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) s += c.g_inv[ix(n, a, b)] * c.gamma(k, a, b);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

std::pair<int, int> signature(const CurvatureAtPoint& c) {
  Eigen::MatrixXd g = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      c.g.data(), c.n, c.n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  int pos = 0, neg = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 0)
      ++pos;
    else if (es.eigenvalues()(i) < 0)
      ++neg;
  }
  return {pos, neg};
}

CheckReport curvature_checks(const CurvatureEngine& engine, const JetOde& ode, const EquivOptions& opts) {
  CheckReport rep;
  const auto points = default_domain(ode).sample_points(opts.samples, opts.seed);
  std::vector<CurvatureAtPoint> cs;
  try {
    cs = engine.at_points(points);
  } catch (const std::exception& e) {
    rep.add_error("curvature_evaluation", 0.0, opts.seed, e.what());
    return rep;
  }
  const std::size_t n = engine.dim();
  const std::size_t npts = cs.size();

  double sym = 0.0, harm = 0.0, rmin = cs[0].scalar, rmax = cs[0].scalar;
  std::size_t bad_signature = 0;
  for (const auto& c : cs) {
    sym = std::max(sym, riemann_symmetry_residual(c));
    harm = std::max(harm, harmonic_residual(c));
    rmin = std::min(rmin, c.scalar);
    rmax = std::max(rmax, c.scalar);
    auto [pos, neg] = signature(c);
    if (!((pos == 3 && neg == 2) || (pos == 2 && neg == 3))) ++bad_signature;
  }
  char range[96];
  std::snprintf(range, sizeof range, "R in [%.10g, %.10g]", rmin, rmax);
  rep.add("riemann_symmetries", sym, 1e-9, npts, opts.seed, "antisymmetry, pair symmetry, first Bianchi");
  rep.add("harmonic_coordinates", harm, 1e-8, npts, opts.seed, "max |g^ab Gamma^c_ab|");
  {
    auto [pos, neg] = signature(cs[0]);
    rep.add("signature_split_3_2", static_cast<double>(bad_signature), 0.0, npts, opts.seed,
            "points without a 3/2 eigenvalue split; first point has " + std::to_string(pos) + " positive, " +
                std::to_string(neg) + " negative");
  }

  if (!reference::is_published(ode)) {
    rep.add("curvature_evaluated", 0.0, 0.0, npts, opts.seed, range);
    return rep;
  }
  if (ode.name() == "conics5") {
    double dr = 0.0, de = 0.0;
    for (const auto& c : cs) {
      dr = std::max(dr, std::abs(c.scalar + 60.0));
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          de = std::max(de, std::abs(c.ricci[ix(n, a, b)] + 12.0 * c.g[ix(n, a, b)]));
    }
    rep.add("scalar_curvature_minus60", dr, 1e-6, npts, opts.seed, range);
    rep.add("einstein_ricci_minus12g", de, 1e-6, npts, opts.seed, "max |R_ab + 12 g_ab|");
  } else if (ode.name() == "gn5") {
    double dr = 0.0, ratio = 0.0;
    for (const auto& c : cs) {
      dr = std::max(dr, std::abs(c.scalar));
      double ric = 0.0, gn = 0.0;
      for (std::size_t i = 0; i < n * n; ++i) {
        ric = std::max(ric, std::abs(c.ricci[i]));
        gn = std::max(gn, std::abs(c.g[i]));
      }
      ratio = std::max(ratio, 0.1 * gn / ric);
    }
    rep.add("scalar_flat", dr, 1e-8, npts, opts.seed, range);
    rep.add("not_ricci_flat", ratio, 1.0, npts, opts.seed, "max over points of 0.1 max|g_ab| / max|R_ab|");
  }
  return rep;
}

}  // namespace odegeom
