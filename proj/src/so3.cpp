#include "odegeom/so3.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>

#include "odegeom/reference.hpp"

namespace odegeom {

namespace {

constexpr std::size_t kN = 5;

int eps(int a, int b) {
  if (a == 0 && b == 1) return 1;
  if (a == 1 && b == 0) return -1;
  return 0;
}

/// Spinor word with m zeros (o) followed by ones (iota).
std::array<int, 4> word(std::size_t m) {
  std::array<int, 4> w{};
  for (std::size_t i = 0; i < 4; ++i) w[i] = i < m ? 0 : 1;
  return w;
}

std::vector<std::array<int, 4>> permutations_of(std::array<int, 4> w) {
  std::array<int, 4> idx{0, 1, 2, 3};
  std::vector<std::array<int, 4>> out;
  do {
    out.push_back({w[idx[0]], w[idx[1]], w[idx[2]], w[idx[3]]});
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

Rational binom4(std::size_t m) {
  static const int b[5] = {1, 4, 6, 4, 1};
  return Rational(b[m]);
}

template <typename T>
T max_abs(const std::vector<T>& v) {
  T m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

double relative(double diff, double scale) { return diff / std::max(scale, 1e-300); }

}  // namespace

std::vector<Rational> frame_metric_tensor() {
  std::vector<Rational> out(kN * kN);
  for (std::size_t i = 0; i < kN; ++i)
    for (std::size_t j = 0; j < kN; ++j) {
      const auto w2 = word(j);
      long total = 0;
      for (const auto& a : permutations_of(word(i))) {
        int prod = 1;
        for (std::size_t k = 0; k < 4; ++k) prod *= eps(a[k], w2[k]);
        total += prod;
      }
      out[ix(kN, i, j)] = Rational(total, 24) * binom4(i) * binom4(j);
    }
  return out;
}

std::vector<Rational> frame_structure_tensor() {
  std::vector<Rational> raw(kN * kN * kN);
  for (std::size_t i = 0; i < kN; ++i)
    for (std::size_t j = 0; j < kN; ++j)
      for (std::size_t k = 0; k < kN; ++k) {
        if (i + j + k != 6) continue;  // each epsilon pairs one o with one iota
        const auto p1 = permutations_of(word(i));
        const auto p2 = permutations_of(word(j));
        const auto p3 = permutations_of(word(k));
        long total = 0;
        // Slots (A B C D), (E F G H), (P Q R S):
        // eps_AE eps_BF eps_GP eps_HQ eps_CR eps_DS.
        for (const auto& a : p1)
          for (const auto& e : p2) {
            const int head = eps(a[0], e[0]) * eps(a[1], e[1]);
            if (head == 0) continue;
            for (const auto& p : p3)
              total += head * eps(e[2], p[0]) * eps(e[3], p[1]) * eps(a[2], p[2]) * eps(a[3], p[3]);
          }
        raw[ix(kN, i, j, k)] = Rational(total, 24 * 24 * 24) * binom4(i) * binom4(j) * binom4(k);
      }
  std::vector<Rational> out(raw.size());
  for (std::size_t i = 0; i < kN; ++i)
    for (std::size_t j = 0; j < kN; ++j)
      for (std::size_t k = 0; k < kN; ++k)
        out[ix(kN, i, j, k)] = (raw[ix(kN, i, j, k)] + raw[ix(kN, i, k, j)] + raw[ix(kN, j, i, k)] +
                                raw[ix(kN, j, k, i)] + raw[ix(kN, k, i, j)] + raw[ix(kN, k, j, i)]) /
                               6;
  return out;
}

GTensor build_G(const PentadData& pd, const MetricField& m) {
  if (pd.order != 5) throw GeomError("build_G needs a fifth-order pentad");
  GTensor G;
  G.hat = frame_structure_tensor();
  G.coords = m.coords;
  const std::size_t n = kN;
  G.lower.assign(n * n * n, Expr(0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      for (std::size_t c = b; c < n; ++c) {
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
              const Rational& h = G.hat[ix(n, i, j, k)];
              if (h == 0 || pd.coframe(i, a).is_zero() || pd.coframe(j, b).is_zero() || pd.coframe(k, c).is_zero())
                continue;
              terms.push_back(Expr(h) * pd.coframe(i, a) * pd.coframe(j, b) * pd.coframe(k, c));
            }
        const Expr v = sum(terms);
        for (auto [x, y, z] : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c}, std::array{b, c, a},
                               std::array{c, a, b}, std::array{c, b, a}})
          G.lower[ix(n, x, y, z)] = v;
      }
  return G;
}

So3Engine::So3Engine(const GTensor& G, const CurvatureEngine& engine) : n_(engine.dim()), engine_(&engine) {
  const std::size_t n = n_;
  std::vector<Expr> out(G.lower);
  out.resize(n * n * n + n * n * n * n);
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t i = 0; i < n * n * n; ++i) out[n * n * n + d * n * n * n + i] = diff(G.lower[i], G.coords[d]);
  program_ = Program(out);
}

So3Point So3Engine::at(const Assignment& point) const {
  const std::size_t n = n_, n3 = n * n * n;
  So3Point s;
  s.curv = engine_->at(point);
  std::vector<double> v(n3 + n3 * n), scratch;
  program_.run(point, v, scratch);
  s.G.assign(v.begin(), v.begin() + n3);
  s.dG.assign(v.begin() + n3, v.end());
  const auto& gi = s.curv.g_inv;
  // G_a^bc, then G^abc.
  s.G_mix.assign(n3, 0.0);
  std::vector<double> tmp(n3, 0.0);  // G_ab^c
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        double t = 0.0;
        for (std::size_t f = 0; f < n; ++f) t += gi[ix(n, c, f)] * s.G[ix(n, a, b, f)];
        tmp[ix(n, a, b, c)] = t;
      }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        double t = 0.0;
        for (std::size_t e = 0; e < n; ++e) t += gi[ix(n, b, e)] * tmp[ix(n, a, e, c)];
        s.G_mix[ix(n, a, b, c)] = t;
      }
  s.G_up.assign(n3, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        double t = 0.0;
        for (std::size_t d = 0; d < n; ++d) t += gi[ix(n, a, d)] * s.G_mix[ix(n, d, b, c)];
        s.G_up[ix(n, a, b, c)] = t;
      }
  return s;
}

std::vector<So3Point> So3Engine::at_points(std::span<const Assignment> points) const {
  std::vector<So3Point> out(points.size());
  std::vector<std::string> errors(points.size());
  const long m = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < m; ++i) {
    try {
      out[i] = at(points[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw GeomError(e);
  return out;
}

So3Residuals so3_residuals(const So3Point& s) {
  const CurvatureAtPoint& c = s.curv;
  const std::size_t n = c.n, n2 = n * n, n3 = n2 * n, n4 = n3 * n;
  const auto& g = c.g;
  const auto& gi = c.g_inv;
  So3Residuals r;

  // G^e_ab = g^ef G_fab.
  std::vector<double> Gud(n3, 0.0);
  for (std::size_t e = 0; e < n; ++e)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double t = 0.0;
        for (std::size_t f = 0; f < n; ++f) t += gi[ix(n, e, f)] * s.G[ix(n, f, a, b)];
        Gud[ix(n, e, a, b)] = t;
      }

  // chi_abcd = 6 G^e_ab G_cde.
  std::vector<double> chi(n4, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t cc = 0; cc < n; ++cc)
        for (std::size_t d = 0; d < n; ++d) {
          double t = 0.0;
          for (std::size_t e = 0; e < n; ++e) t += Gud[ix(n, e, a, b)] * s.G[ix(n, cc, d, e)];
          chi[ix(n, a, b, cc, d)] = 6.0 * t;
        }
  auto gg = [&](std::size_t a, std::size_t b, std::size_t cc, std::size_t d) {
    return (g[ix(n, a, b)] * g[ix(n, cc, d)] + g[ix(n, a, cc)] * g[ix(n, b, d)] + g[ix(n, a, d)] * g[ix(n, b, cc)]) /
           3.0;
  };
  const double gscale = max_abs(g) * max_abs(g);

  // (G0): symmetrize chi over the last three indices.
  {
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t cc = 0; cc < n; ++cc)
          for (std::size_t d = 0; d < n; ++d) {
            const double lhs = (chi[ix(n, a, b, cc, d)] + chi[ix(n, a, b, d, cc)] + chi[ix(n, a, cc, b, d)] +
                                chi[ix(n, a, cc, d, b)] + chi[ix(n, a, d, b, cc)] + chi[ix(n, a, d, cc, b)]) /
                               6.0;
            worst = std::max(worst, std::abs(lhs - gg(a, b, cc, d)));
          }
    r.g0 = relative(worst, gscale);
  }

  // (G2) with F_bcad = chi_a[bc]d.
  {
    auto F = [&](std::size_t b, std::size_t cc, std::size_t a, std::size_t d) {
      return 0.5 * (chi[ix(n, a, b, cc, d)] - chi[ix(n, a, cc, b, d)]);
    };
    double worst = 0.0, worst_sym = 0.0;
    std::array<std::size_t, 4> idx{};
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t cc = 0; cc < n; ++cc)
          for (std::size_t d = 0; d < n; ++d) {
            std::array<std::size_t, 4> base{a, b, cc, d};
            std::array<int, 4> perm{0, 1, 2, 3};
            double sym = 0.0;
            int count = 0;
            do {
              for (int k = 0; k < 4; ++k) idx[k] = base[perm[k]];
              sym += chi[ix(n, idx[0], idx[1], idx[2], idx[3])];
              ++count;
            } while (std::next_permutation(perm.begin(), perm.end()));
            sym /= count;
            worst_sym = std::max(worst_sym, std::abs(sym - gg(a, b, cc, d)));
            const double rhs = sym + (2.0 / 3.0) * F(b, cc, a, d) + (2.0 / 3.0) * F(b, d, a, cc);
            worst = std::max(worst, std::abs(chi[ix(n, a, b, cc, d)] - rhs));
          }
    r.g2 = relative(worst, gscale);
    r.g2_symmetric = relative(worst_sym, gscale);

    // (G4): R_abcd F^cd_pq = (7/4) R_abpq.
    std::vector<double> Fl(n4), Fu(n4, 0.0);  // Fl[ix(c,d,p,q)] = F_cdpq, Fu = F^cd_pq
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t p = 0; p < n; ++p)
          for (std::size_t q = 0; q < n; ++q) Fl[ix(n, x, y, p, q)] = F(x, y, p, q);
    std::vector<double> half(n4, 0.0);
    for (std::size_t cc = 0; cc < n; ++cc)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t p = 0; p < n; ++p)
          for (std::size_t q = 0; q < n; ++q) {
            double t = 0.0;
            for (std::size_t x = 0; x < n; ++x) t += gi[ix(n, cc, x)] * Fl[ix(n, x, y, p, q)];
            half[ix(n, cc, y, p, q)] = t;
          }
    for (std::size_t cc = 0; cc < n; ++cc)
      for (std::size_t d = 0; d < n; ++d)
        for (std::size_t p = 0; p < n; ++p)
          for (std::size_t q = 0; q < n; ++q) {
            double t = 0.0;
            for (std::size_t y = 0; y < n; ++y) t += gi[ix(n, d, y)] * half[ix(n, cc, y, p, q)];
            Fu[ix(n, cc, d, p, q)] = t;
          }
    double w4 = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t p = 0; p < n; ++p)
          for (std::size_t q = 0; q < n; ++q) {
            double t = 0.0;
            for (std::size_t cc = 0; cc < n; ++cc)
              for (std::size_t d = 0; d < n; ++d) t += c.R(a, b, cc, d) * Fu[ix(n, cc, d, p, q)];
            w4 = std::max(w4, std::abs(t - 1.75 * c.R(a, b, p, q)));
          }
    r.g4 = relative(w4, max_abs(c.riemann));
  }

  // (G1): R_abc^(d G^ef)c = 0.
  {
    std::vector<double> Rup(n4, 0.0);  // R_abc^d
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t cc = 0; cc < n; ++cc)
          for (std::size_t d = 0; d < n; ++d) {
            double t = 0.0;
            for (std::size_t x = 0; x < n; ++x) t += c.R(a, b, cc, x) * gi[ix(n, x, d)];
            Rup[ix(n, a, b, cc, d)] = t;
          }
    // T[a][b][d][c'] = sum_c R_abc^d G^{e f c} contracted later; compute directly.
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t d = 0; d < n; ++d)
          for (std::size_t e = 0; e < n; ++e)
            for (std::size_t f = 0; f < n; ++f) {
              double t = 0.0;
              for (std::size_t cc = 0; cc < n; ++cc)
                t += Rup[ix(n, a, b, cc, d)] * s.G_up[ix(n, e, f, cc)] +
                     Rup[ix(n, a, b, cc, e)] * s.G_up[ix(n, f, d, cc)] +
                     Rup[ix(n, a, b, cc, f)] * s.G_up[ix(n, d, e, cc)];
              worst = std::max(worst, std::abs(t));
            }
    r.g1 = relative(worst, max_abs(Rup) * max_abs(s.G_up));
  }

  // grad_d G_abc.
  {
    double worst = 0.0;
    for (std::size_t d = 0; d < n; ++d)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t cc = 0; cc < n; ++cc) {
            double t = s.dG[d * n3 + ix(n, a, b, cc)];
            for (std::size_t e = 0; e < n; ++e)
              t -= c.gamma(e, d, a) * s.G[ix(n, e, b, cc)] + c.gamma(e, d, b) * s.G[ix(n, a, e, cc)] +
                   c.gamma(e, d, cc) * s.G[ix(n, a, b, e)];
            worst = std::max(worst, std::abs(t));
          }
    r.nabla_G = relative(worst, max_abs(s.dG));
  }

  // Traces.
  {
    double tf = 0.0, t7 = 0.0, t35 = 0.0;
    for (std::size_t cc = 0; cc < n; ++cc) {
      double t = 0.0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) t += gi[ix(n, a, b)] * s.G[ix(n, a, b, cc)];
      tf = std::max(tf, std::abs(t));
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double t = 0.0;
        for (std::size_t e = 0; e < n; ++e)
          for (std::size_t f = 0; f < n; ++f) t += s.G[ix(n, e, f, a)] * s.G_up[ix(n, e, f, b)];
        // G_efa G^ef_b = (G_efa G^efx) g_xb; compare in mixed form against (7/12) delta.
        t7 = std::max(t7, std::abs(t - (a == b ? 7.0 / 12.0 : 0.0)));
      }
    double full = 0.0;
    for (std::size_t i = 0; i < n3; ++i) full += s.G[i] * s.G_up[i];
    t35 = std::abs(full - 35.0 / 12.0);
    r.trace_free = relative(tf, max_abs(s.G) * max_abs(gi));
    r.trace_7_12 = t7;
    r.trace_35_12 = t35;
  }
  return r;
}

HorOperatorValue hor_operator(const So3Point& s, std::span<const double> grad, std::span<const double> hessian) {
  const CurvatureAtPoint& c = s.curv;
  const std::size_t n = c.n;
  if (grad.size() != n || hessian.size() != n * n) throw GeomError("hor_operator: derivative sizes do not match");
  HorOperatorValue out;
  out.point = c.point;
  out.grad.assign(grad.begin(), grad.end());
  std::vector<double> nn(n * n);  // grad_b grad_c F
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t cc = 0; cc < n; ++cc) {
      double t = hessian[ix(n, b, cc)];
      for (std::size_t d = 0; d < n; ++d) t -= c.gamma(d, b, cc) * grad[d];
      nn[ix(n, b, cc)] = t;
    }
  out.v.assign(n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t cc = 0; cc < n; ++cc) out.v[a] += s.G_mix[ix(n, a, b, cc)] * nn[ix(n, b, cc)];
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t cc = 0; cc < n; ++cc) out.laplacian += c.g_inv[ix(n, b, cc)] * nn[ix(n, b, cc)];
  return out;
}

double mu_lambda(double lambda, double R) { return 6.0 * lambda * lambda + R / 10.0; }

CheckReport g_identities(const GTensor& G, const MetricField& m, const So3Engine& engine, const JetOde& ode,
                         const EquivOptions& opts) {
  CheckReport rep;
  const std::size_t n = engine.dim();

  {
    // Exact frame-level facts.
    const auto K = frame_metric_tensor();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        worst = std::max(worst, std::abs(static_cast<double>(K[ix(n, i, j)] - frame_pairing(i, j))));
    rep.add("epsilon_metric_matches_pairing", worst, 0.0, 1, 0, "four-epsilon symmetrization gives 1, -4, 6");
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          asym = std::max(asym, std::abs(static_cast<double>(G.hat[ix(n, i, j, k)] - G.hat[ix(n, j, i, k)])) +
                                    std::abs(static_cast<double>(G.hat[ix(n, i, j, k)] - G.hat[ix(n, i, k, j)])));
    rep.add("G_frame_totally_symmetric", asym, 0.0, 1, 0, "six-epsilon tensor, exact rationals");
  }

  {
    // g^ab G_abc = 0 as expressions.
    std::vector<Expr> traces;
    for (std::size_t cc = 0; cc < n; ++cc) {
      std::vector<Expr> terms;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (!m.upper(a, b).is_zero() && !G.lower[ix(n, a, b, cc)].is_zero())
            terms.push_back(m.upper(a, b) * G.lower[ix(n, a, b, cc)]);
      traces.push_back(sum(terms));
    }
    rep.add("G_trace_free", combine(equiv_batch(traces, std::vector<Expr>(n, Expr(0)), default_domain(ode), opts)),
            opts, "g^ab G_abc = 0 by equiv");
  }

  const auto points = default_domain(ode).sample_points(opts.samples, opts.seed);
  std::vector<So3Point> pts;
  try {
    pts = engine.at_points(points);
  } catch (const std::exception& e) {
    rep.add_error("so3_evaluation", 1e-8, opts.seed, e.what());
    return rep;
  }
  So3Residuals worst;
  double sym = 0.0;
  for (const auto& p : pts) {
    const So3Residuals r = so3_residuals(p);
    worst.g0 = std::max(worst.g0, r.g0);
    worst.nabla_G = std::max(worst.nabla_G, r.nabla_G);
    worst.g1 = std::max(worst.g1, r.g1);
    worst.g2 = std::max(worst.g2, r.g2);
    worst.g2_symmetric = std::max(worst.g2_symmetric, r.g2_symmetric);
    worst.g4 = std::max(worst.g4, r.g4);
    worst.trace_free = std::max(worst.trace_free, r.trace_free);
    worst.trace_7_12 = std::max(worst.trace_7_12, r.trace_7_12);
    worst.trace_35_12 = std::max(worst.trace_35_12, r.trace_35_12);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t cc = 0; cc < n; ++cc)
          sym = std::max(sym, std::abs(p.G[ix(n, a, b, cc)] - p.G[ix(n, b, cc, a)]));
  }
  const std::size_t np = pts.size();
  rep.add("G_totally_symmetric", sym, 1e-12, np, opts.seed, "coordinate components at sample points");
  rep.add("G0_normalisation", worst.g0, 1e-8, np, opts.seed, "6 G^e_a(b G_cd)e = g_a(b g_cd)");
  rep.add("G_parallel", worst.nabla_G, 1e-8, np, opts.seed, "grad_a G_bcd = 0, relative to max |dG|");
  rep.add("G1_curvature_condition", worst.g1, 1e-8, np, opts.seed, "R_abc^(d G^ef)c = 0");
  rep.add("G2_chi_decomposition", worst.g2, 1e-8, np, opts.seed, "chi = chi_(abcd) + 2/3 F_bcad + 2/3 F_bdac");
  rep.add("G2_chi_symmetric_part", worst.g2_symmetric, 1e-8, np, opts.seed, "chi_(abcd) = g_a(b g_cd)");
  rep.add("G4_curvature_contraction", worst.g4, 1e-8, np, opts.seed, "R_abcd F^cd_pq = 7/4 R_abpq");
  rep.add("G_trace_free_numeric", worst.trace_free, 1e-10, np, opts.seed, "g^ab G_abc at sample points");
  rep.add("G_trace_7_12", worst.trace_7_12, 1e-10, np, opts.seed, "G_efa G^ef_b = 7/12 g_ab (mixed form)");
  rep.add("G_trace_35_12", worst.trace_35_12, 1e-10, np, opts.seed, "G_abc G^abc = 35/12");
  return rep;
}

CheckReport expansion_check(const So3Engine& engine, const JetOde& ode, const EquivOptions& opts,
                            std::size_t functions_per_point) {
  CheckReport rep;
  const std::size_t n = engine.dim();
  const auto printed_table = reference::conics5_operator_expansion();
  const auto table = reference::corrected_expansion(printed_table);
  const auto points = default_domain(ode).sample_points(opts.samples, opts.seed);
  std::vector<So3Point> pts;
  try {
    pts = engine.at_points(points);
  } catch (const std::exception& e) {
    rep.add_error("expansion_evaluation", 1e-8, opts.seed, e.what());
    return rep;
  }

  // Moduli coordinates are (y, p, q, r, s) in Var order.
  auto index = [](Var v) { return index_of(v) - index_of(Var::y); };
  auto coefficients = [&](const std::vector<reference::ExpansionComponent>& t, const Assignment& pt) {
    std::vector<std::vector<double>> c(t.size());
    for (std::size_t comp = 0; comp < t.size(); ++comp)
      for (const auto& term : t[comp].terms) c[comp].push_back(eval(term.coefficient, pt));
    return c;
  };
  auto contract = [&](const reference::ExpansionComponent& row, const std::vector<double>& coeff,
                      const std::vector<double>& grad, const std::vector<double>& hess) {
    double v = static_cast<double>(row.gradient_coefficient) * grad[index(row.component)];
    for (std::size_t k = 0; k < row.terms.size(); ++k)
      v += coeff[k] * hess[ix(n, index(row.terms[k].first), index(row.terms[k].second))];
    return v;
  };

  std::vector<double> worst(table.size(), 0.0), worst_printed(table.size(), 0.0);
  SampleRng rng(opts.seed ^ 0xF00DULL);
  for (const auto& p : pts) {
    const auto coeffs = coefficients(table, p.curv.point);
    const auto coeffs_printed = coefficients(printed_table, p.curv.point);
    for (std::size_t f = 0; f < functions_per_point; ++f) {
      std::vector<double> grad(n), hess(n * n);
      for (auto& g : grad) g = rng.uniform(-1.0, 1.0);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) hess[ix(n, a, b)] = hess[ix(n, b, a)] = rng.uniform(-1.0, 1.0);
      const HorOperatorValue hv = hor_operator(p, grad, hess);
      for (std::size_t comp = 0; comp < table.size(); ++comp) {
        const double v = hv.v[index(table[comp].component)];
        worst[comp] = std::max(worst[comp], scaled_residual(v, contract(table[comp], coeffs[comp], grad, hess)));
        worst_printed[comp] = std::max(
            worst_printed[comp], scaled_residual(v, contract(printed_table[comp], coeffs_printed[comp], grad, hess)));
      }
    }
  }
  const std::size_t samples = pts.size() * functions_per_point;
  const auto errata = reference::errata("conics5");
  for (std::size_t comp = 0; comp < table.size(); ++comp) {
    const std::string v(var_name(table[comp].component));
    std::string notes = "printed d" + v + " component vs G_a^bc grad_b grad_c F";
    if (table[comp].component == Var::y) notes += "; s' read as the right-hand side of the equation at the point";
    for (const auto& e : errata)
      if (e.object == "expansion_d" + v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "; as printed: %.3e", worst_printed[comp]);
        notes += "; one coefficient compared against its erratum" + std::string(buf);
      }
    rep.add("expansion_d" + v, worst[comp], 1e-8, samples, opts.seed, notes);
  }
  for (const auto& e : errata) {
    if (e.object.rfind("expansion_d", 0) != 0) continue;
    std::size_t comp = 0;
    while (comp < table.size() && "expansion_d" + std::string(var_name(table[comp].component)) != e.object) ++comp;
    if (comp == table.size()) continue;
    const bool shown = worst_printed[comp] > 1e-8;
    rep.add("erratum_" + e.object + "_" + std::to_string(e.row) + std::to_string(e.col),
            shown ? worst[comp] : std::nan(""), 1e-8, samples, opts.seed,
            e.description + "; printed " + to_string(e.printed) + ", corrected " + to_string(e.corrected) +
                (shown ? "" : "; erratum NOT demonstrated"));
  }
  return rep;
}

}  // namespace odegeom
