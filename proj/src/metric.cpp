#include <cmath>
#include <string>

#include "odegeom/geom.hpp"
#include "odegeom/reference.hpp"

namespace odegeom {

namespace {

std::vector<Expr> zeros(std::size_t n) { return std::vector<Expr>(n, Expr(0)); }

std::string pair_name(Var a, Var b) { return "d" + std::string(var_name(a)) + "_d" + std::string(var_name(b)); }

}  // namespace

Rational frame_pairing(std::size_t i, std::size_t j) {
  static const int k[5] = {1, -4, 6, -4, 1};
  if (i + j != 4 || i > 4) return Rational(0);
  return Rational(k[i]);
}

MetricField metric_from_frame(const PentadData& pd) {
  if (pd.order != 5) throw GeomError("metric_from_frame needs a fifth-order pentad");
  const std::size_t n = 5;
  MetricField m;
  m.coords = {Var::y, Var::p, Var::q, Var::r, Var::s};
  m.lower = ExprMatrix(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = 4 - i;
        if (pd.coframe(i, a).is_zero() || pd.coframe(j, b).is_zero()) continue;
        terms.push_back(Expr(frame_pairing(i, j)) * pd.coframe(i, a) * pd.coframe(j, b));
      }
      m.lower(a, b) = sum(terms);
      m.lower(b, a) = m.lower(a, b);
    }
  m.upper = cofactor_inverse(m.lower);
  return m;
}

ExprMatrix metric_upper_from_rows(const PentadData& pd) {
  if (pd.order != 5) throw GeomError("metric_upper_from_rows needs a fifth-order pentad");
  const std::size_t n = 5;
  ExprMatrix up(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k; l < n; ++l) {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = 4 - i;
        if (pd.rows(k, i).is_zero() || pd.rows(l, j).is_zero()) continue;
        terms.push_back(Expr(Rational(1) / frame_pairing(i, j)) * pd.rows(k, i) * pd.rows(l, j));
      }
      up(k, l) = sum(terms);
      up(l, k) = up(k, l);
    }
  return up;
}

CheckReport metric_pairing_check(const PentadData& pd, const MetricField& m, const JetOde& ode,
                                 const EquivOptions& opts) {
  CheckReport rep;
  const SampleDomain dom = default_domain(ode);
  const std::size_t n = m.dim();

  auto matrix_check = [&](const std::string& name, const ExprMatrix& a, const ExprMatrix& b,
                          const std::string& notes) {
    try {
      auto rs = equiv_batch(a.entries(), b.entries(), dom, opts);
      rep.add(name, combine(rs), opts, notes);
    } catch (const EvalError& e) {
      rep.add_error(name, opts.tol, opts.seed, e.what());
    }
  };

  matrix_check("metric_routes_agree", m.upper, metric_upper_from_rows(pd),
               "cofactor inverse of g_lower vs dyad pairing of dX^k rows");
  matrix_check("metric_inverse_identity", m.lower * m.upper, ExprMatrix::identity(n), "g_lower * g_upper = 1");

  if (!reference::is_published(ode)) return rep;
  if (auto printed = reference::metric(ode.name())) {
    auto note = [&](std::string_view object) {
      std::string s = "all 25 entries";
      for (const auto& e : reference::errata(ode.name()))
        if (e.object == object)
          s += "; entry (" + std::to_string(e.row) + "," + std::to_string(e.col) + ") compared against its erratum";
      return s;
    };
    matrix_check("metric_lower_matches_printed", m.lower,
                 reference::corrected(printed->lower, ode.name(), "metric_lower"), note("metric_lower"));
    matrix_check("metric_upper_matches_printed", m.upper,
                 reference::corrected(printed->upper, ode.name(), "metric_upper"), note("metric_upper"));

    // Each erratum must be demonstrated: the printed entry disagrees, the
    // correction agrees, and the printed matrices fail to be inverse.
    for (const auto& e : reference::errata(ode.name())) {
      if (e.object != "metric_upper" && e.object != "metric_lower") continue;
      const std::string name = "erratum_" + e.object + "_" + std::to_string(e.row) + std::to_string(e.col);
      const Expr& ours = e.object == "metric_upper" ? m.upper(e.row, e.col) : m.lower(e.row, e.col);
      try {
        auto as_printed = equiv(ours, e.printed, dom, opts);
        auto fixed = equiv(ours, e.corrected, dom, opts);
        auto inverse = combine(equiv_batch((printed->lower * printed->upper).entries(),
                                           ExprMatrix::identity(n).entries(), dom, opts));
        const bool shown = !as_printed.pass && !inverse.pass;
        rep.add(name, shown ? fixed.max_residual : std::nan(""), opts.tol, fixed.samples, opts.seed,
                e.description + "; printed " + to_string(e.printed) + ", constructed " + to_string(ours) +
                    (shown ? "" : "; erratum NOT demonstrated"));
      } catch (const EvalError& err) {
        rep.add_error(name, opts.tol, opts.seed, err.what());
      }
    }
  }
  auto index = [&](Var v) {
    for (std::size_t i = 0; i < n; ++i)
      if (m.coords[i] == v) return i;
    throw GeomError("coordinate not in metric");
  };
  for (const auto& [vars, expected] : reference::pairing_chain(ode.name())) {
    const std::string name = "pairing_g_" + pair_name(vars.first, vars.second);
    try {
      auto r = equiv(m.upper(index(vars.first), index(vars.second)), expected, dom, opts);
      rep.add(name, r, opts, "expected " + to_string(expected));
    } catch (const EvalError& e) {
      rep.add_error(name, opts.tol, opts.seed, e.what());
    }
  }
  return rep;
}

CheckReport structure_checks(const MetricField& m, const JetOde& ode, const EquivOptions& opts) {
  CheckReport rep;
  const SampleDomain dom = default_domain(ode);
  const std::size_t n = m.dim();

  ExprMatrix killing = flow_derivative(m.lower, prolongation(ode));
  std::size_t structural = 0;
  for (const auto& e : killing.entries()) structural += e.is_zero() ? 1 : 0;
  auto rs = equiv_batch(killing.entries(), zeros(n * n), dom, opts);
  rep.add("killing_prolongation", combine(rs), opts,
          std::to_string(structural) + "/" + std::to_string(n * n) + " entries simplify to 0 symbolically");

  Expr gyy = m.lower(0, 0);
  rep.add("first_integral_g_yy", equiv(total_derivative(gyy, ode), Expr(0), dom, opts), opts, "D(g_yy) = 0");
  if (reference::is_published(ode) && ode.name() == "conics5")
    rep.add("first_integral_matches_printed", equiv(gyy, reference::conics5_first_integral(), dom, opts), opts,
            "g_yy = r^2 s/24q^5 - 5r^4/162q^6 - s^2/72q^4");
  return rep;
}

}  // namespace odegeom
