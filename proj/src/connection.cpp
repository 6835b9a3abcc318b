#include "odegeom/connection.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "odegeom/reference.hpp"

namespace odegeom {

ConnectionForms connection_forms(const PentadData& pd) {
  if (pd.order != 5) throw GeomError("connection forms need a fifth-order pentad");
  const auto printed = reference::conics5_connection();
  ConnectionForms cf;
  cf.alpha = printed.alpha;
  cf.gamma = printed.gamma;
  cf.delta = printed.delta;
  const Expr z(0);
  const Expr q = Expr(Var::q);
  cf.phi = {cf.alpha, -(pow(q, Rational(-1, 2)) * cf.gamma), z, z, z};
  cf.chi = {Expr(4) * cf.gamma, cf.delta, z, z, z};
  cf.psi = printed.psi;
  return cf;
}

FrameLaw frame_law(int m) { return {2 * m - 4, m, 4 - m}; }

FrameLaw frame_law_by_expansion(int m) {
  // A word is a sequence of four factors, true for o. Differentiating one
  // factor produces phi/psi/chi times a new word; collect by o-count.
  std::map<std::pair<int, int>, int> coeff;  // (form, o-count) -> coefficient; form 0 phi, 1 psi, 2 chi
  std::array<bool, 4> word{};
  for (int i = 0; i < 4; ++i) word[i] = i < m;
  for (int slot = 0; slot < 4; ++slot) {
    const int rest = m - (word[slot] ? 1 : 0);
    if (word[slot]) {
      coeff[{0, rest + 1}] += 1;  // phi o
      coeff[{1, rest}] += 1;      // psi iota
    } else {
      coeff[{2, rest + 1}] += 1;  // chi o
      coeff[{0, rest}] -= 1;      // -phi iota
    }
  }
  FrameLaw law;
  for (auto [key, c] : coeff) {
    auto [form, count] = key;
    if (c == 0) continue;
    if (form == 0 && count == m)
      law.phi = c;
    else if (form == 1 && count == m - 1)
      law.psi = c;
    else if (form == 2 && count == m + 1)
      law.chi = c;
    else
      throw GeomError("unexpected term in frame law expansion");
  }
  return law;
}

CheckReport connection_check(const ConnectionForms& cf, const PentadData& pd, const CurvatureEngine& engine,
                             const JetOde& ode, const EquivOptions& opts) {
  CheckReport rep;
  const std::size_t n = engine.dim();
  const auto& coords = engine.coords();

  // Layout: coframe (n^2), d coframe [ix(i, a, b)] = d_a e^i_b (n^3), frame (n^2), phi, psi, chi.
  std::vector<Expr> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t b = 0; b < n; ++b) out.push_back(pd.coframe(i, b));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) out.push_back(diff(pd.coframe(i, b), coords[a]));
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t j = 0; j < n; ++j) out.push_back(pd.frame(b, j));
  for (const auto* form : {&cf.phi, &cf.psi, &cf.chi}) out.insert(out.end(), form->begin(), form->end());
  const Program prog(out);

  const auto points = default_domain(ode).sample_points(opts.samples, opts.seed);
  const std::size_t npts = points.size();
  std::vector<std::array<double, 5>> law_res(npts);
  std::vector<std::array<double, 3>> form_res(npts);  // phi, psi, chi
  std::vector<std::array<double, 3>> scalar_res(npts);  // alpha, gamma, delta
  std::vector<std::string> errors(npts);

  const long m_pts = static_cast<long>(npts);
#pragma omp parallel
  {
    std::vector<double> v(out.size()), scratch;
#pragma omp for schedule(dynamic)
    for (long k = 0; k < m_pts; ++k) {
      try {
        const Assignment& pt = points[k];
        prog.run(pt, v, scratch);
        const CurvatureAtPoint c = engine.at(pt);
        const double* e = v.data();
        const double* de = e + n * n;
        const double* fr = de + n * n * n;
        const double* phi = fr + n * n;
        const double* psi = phi + n;
        const double* chi = psi + n;
        // nab[i][a][b] = grad_a e^i_b
        std::vector<double> nab(n * n * n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
              double s = de[ix(n, i, a, b)];
              for (std::size_t cc = 0; cc < n; ++cc) s -= c.gamma(cc, a, b) * e[ix(n, i, cc)];
              nab[ix(n, i, a, b)] = s;
            }
        for (std::size_t i = 0; i < n; ++i) {
          const FrameLaw law = frame_law(static_cast<int>(i));
          double worst = 0.0, scale = 0.0;
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
              double rhs = law.phi * phi[a] * e[ix(n, i, b)];
              if (i > 0) rhs += law.psi * psi[a] * e[ix(n, i - 1, b)];
              if (i + 1 < n) rhs += law.chi * chi[a] * e[ix(n, i + 1, b)];
              const double lhs = nab[ix(n, i, a, b)];
              worst = std::max(worst, std::abs(lhs - rhs));
              scale = std::max(scale, std::abs(lhs));
            }
          law_res[k][i] = worst / (1.0 + scale);
        }
        // Frame components (grad_a e^i)(E_j).
        auto contract = [&](std::size_t i, std::size_t a, std::size_t j) {
          double s = 0.0;
          for (std::size_t b = 0; b < n; ++b) s += nab[ix(n, i, a, b)] * fr[ix(n, b, j)];
          return s;
        };
        std::array<double, 3> fr_res{};
        std::vector<double> phi_x(n), chi_x(n), psi_x(n);
        for (std::size_t a = 0; a < n; ++a) {
          phi_x[a] = -contract(0, a, 0) / 4.0;
          chi_x[a] = contract(0, a, 1) / 4.0;
          psi_x[a] = contract(n - 1, a, n - 2) / 4.0;
          fr_res[0] = std::max(fr_res[0], scaled_residual(phi_x[a], phi[a]));
          fr_res[1] = std::max(fr_res[1], scaled_residual(psi_x[a], psi[a]));
          fr_res[2] = std::max(fr_res[2], scaled_residual(chi_x[a], chi[a]));
        }
        form_res[k] = fr_res;
        scalar_res[k] = {scaled_residual(phi_x[0], eval(cf.alpha, pt)),
                         scaled_residual(chi_x[0] / 4.0, eval(cf.gamma, pt)),
                         scaled_residual(chi_x[1], eval(cf.delta, pt))};
      } catch (const std::exception& ex) {
        errors[k] = ex.what();
      }
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) {
      rep.add_error("connection_evaluation", 1e-8, opts.seed, e);
      return rep;
    }

  auto column_max = [&](const auto& rows, std::size_t col) {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r[col]);
    return m;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const FrameLaw law = frame_law(static_cast<int>(i));
    std::string text = "grad e^" + std::to_string(i + 1) + " =";
    auto term = [&](int c, const char* form, std::size_t idx) {
      if (c != 0) text += " " + std::to_string(c) + " " + form + " e^" + std::to_string(idx);
    };
    term(law.phi, "phi", i + 1);
    term(law.psi, "psi", i);
    term(law.chi, "chi", i + 2);
    rep.add("connection_law_e" + std::to_string(i + 1), column_max(law_res, i), 1e-8, npts, opts.seed, text);
  }
  const char* forms[3] = {"phi", "psi", "chi"};
  for (std::size_t f = 0; f < 3; ++f)
    rep.add(std::string("connection_") + forms[f] + "_extracted", column_max(form_res, f), 1e-8, npts, opts.seed,
            "read off grad e^1 and grad e^5 in the frame, against the closed form");
  const char* scalars[3] = {"alpha", "gamma", "delta"};
  const char* printed[3] = {"s/12q^2 - r^2/8q^3", "(1/24) q^{-3/2} r", "(1/2) q^{-1/2}"};
  for (std::size_t f = 0; f < 3; ++f)
    rep.add(std::string("connection_") + scalars[f] + "_extracted", column_max(scalar_res, f), 1e-8, npts,
            opts.seed, std::string("expected ") + printed[f]);
  return rep;
}

CheckReport integrability_check(const ConnectionForms& cf, const MetricField& m, const JetOde& ode,
                                const EquivOptions& opts) {
  CheckReport rep;
  const SampleDomain dom = default_domain(ode);
  std::vector<Expr> lhs(cf.chi.begin(), cf.chi.end());
  std::vector<Expr> rhs = {Expr(4) * reference::conics5_connection().gamma, reference::conics5_connection().delta,
                           Expr(0), Expr(0), Expr(0)};
  rep.add("chi_equals_4gamma_dy_plus_delta_dp", combine(equiv_batch(lhs, rhs, dom, opts)), opts,
          "all five components, including vanishing dq, dr, ds");
  std::vector<Expr> tail(cf.chi.begin() + 2, cf.chi.end());
  rep.add("chi_no_dq_dr_ds", combine(equiv_batch(tail, std::vector<Expr>(3, Expr(0)), dom, opts)), opts);
  rep.add("null_hypersurface_g_upper_yy", equiv(m.upper(0, 0), Expr(0), dom, opts), opts, "g^{yy} = 0");
  return rep;
}

}  // namespace odegeom
