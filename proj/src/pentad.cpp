#include "odegeom/pentad.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace odegeom {

namespace {

int valence(const JetOde& ode) { return ode.order() - 1; }

// Rational approximation with bounded denominator, by continued fractions.
std::optional<Rational> rationalize(double v, long long max_den = 360, double tol = 1e-8) {
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = v;
  for (int iter = 0; iter < 40; ++iter) {
    double a = std::floor(x);
    long long ai = static_cast<long long>(a);
    long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - v) <= tol) return Rational(h1, k1);
    double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

// Box on which every ansatz base is strictly positive.
SampleDomain fit_domain() {
  SampleDomain d;
  d.set(Var::x, {0.5, 2.0}).set(Var::p, {-1.0, 1.0}).set(Var::q, {0.5, 2.0});
  d.set(Var::r, {0.5, 2.0}).set(Var::s, {0.5, 2.0}).constrain_contact({0.5, 2.0});
  return d;
}

std::vector<AnsatzFactor> ansatz_bases(const JetOde& ode) {
  std::vector<AnsatzFactor> b{{"q", Expr(Var::q), 0}, {"r", Expr(Var::r), 0}};
  if (ode.order() == 5) b.push_back({"s", Expr(Var::s), 0});
  b.push_back({"xp-y", Expr(Var::x) * Expr(Var::p) - Expr(Var::y), 0});
  return b;
}

// Fits (log P)' = rhs_top / c with P a product of powers of the bases,
// preferring the fewest factors.
std::vector<AnsatzFactor> fit_p_ansatz(const JetOde& ode) {
  const int n = valence(ode);
  const Rational c(n * (n + 1), 2);
  Expr target = diff(ode.rhs(), ode.top()) / Expr(c);
  auto bases = ansatz_bases(ode);
  std::vector<Expr> columns;
  for (const auto& b : bases) columns.push_back(total_derivative(b.base, ode) / b.base);
  columns.push_back(target);

  const std::size_t m = 24;
  auto pts = fit_domain().sample_points(m, kDefaultSeed);
  Program prog(columns);
  Eigen::MatrixXd A(m, bases.size());
  Eigen::VectorXd t(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto v = prog.run(pts[i]);
    for (std::size_t k = 0; k < bases.size(); ++k) A(i, k) = v[k];
    t(i) = v[bases.size()];
  }
  const double scale = 1.0 + t.norm();
  const std::size_t K = bases.size();
  for (std::size_t size = 0; size <= K; ++size) {
    for (unsigned mask = 0; mask < (1u << K); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != size) continue;
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < K; ++k)
        if (mask & (1u << k)) idx.push_back(k);
      Eigen::VectorXd alpha = Eigen::VectorXd::Zero(static_cast<long>(size));
      double res = t.norm();
      if (size > 0) {
        Eigen::MatrixXd sub(m, size);
        for (std::size_t j = 0; j < size; ++j) sub.col(static_cast<long>(j)) = A.col(static_cast<long>(idx[j]));
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
        if (qr.rank() < static_cast<long>(size)) continue;
        alpha = qr.solve(t);
        res = (sub * alpha - t).norm();
      }
      if (res > 1e-9 * scale) continue;
      std::vector<AnsatzFactor> out;
      bool ok = true;
      for (std::size_t j = 0; j < size; ++j) {
        auto rat = rationalize(alpha(static_cast<long>(j)));
        if (!rat || *rat == 0) {
          ok = false;
          break;
        }
        AnsatzFactor f = bases[idx[j]];
        f.exponent = *rat;
        out.push_back(f);
      }
      if (ok) return out;
    }
  }
  throw PentadError("no product of powers of q, r, s, xp-y with rational exponents solves (log P)' = " +
                    to_string(target));
}

}  // namespace

std::vector<Expr> prime_row(const std::vector<Expr>& m, const Expr& P, const Expr& Q, const JetOde& ode) {
  const std::size_t N = m.size() - 1;
  std::vector<std::vector<Expr>> terms(m.size());
  for (std::size_t j = 0; j <= N; ++j) {
    if (m[j].is_zero()) continue;
    terms[j].push_back(total_derivative(m[j], ode));
    if (j > 0) terms[j - 1].push_back(Expr(static_cast<int>(j)) * Q * m[j]);
    if (j < N) terms[j + 1].push_back(Expr(static_cast<int>(N - j)) * P * m[j]);
  }
  std::vector<Expr> out;
  for (auto& t : terms) out.push_back(sum(t));
  return out;
}

ExprMatrix build_rows(const Expr& P, const Expr& Q, const JetOde& ode) {
  const std::size_t n = static_cast<std::size_t>(ode.order());
  ExprMatrix rows(n, n);
  std::vector<Expr> row(n);
  row[0] = Expr(1);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) rows(k, j) = row[j];
    if (k + 1 < n) row = prime_row(row, P, Q, ode);
  }
  return rows;
}

std::vector<NamedIdentity> coefficient_equations(const ExprMatrix& rows, const Expr& P, const Expr& Q,
                                                 const JetOde& ode) {
  const std::size_t n = rows.rows();
  std::vector<Expr> last(n);
  for (std::size_t j = 0; j < n; ++j) last[j] = rows(n - 1, j);
  auto lhs = prime_row(last, P, Q, ode);
  auto coords = ode.moduli_coords();
  std::vector<Expr> partials;
  for (Var v : coords) partials.push_back(diff(ode.rhs(), v));
  std::vector<NamedIdentity> out;
  const int N = static_cast<int>(n) - 1;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Expr> terms;
    for (std::size_t k = 0; k < n; ++k) terms.push_back(partials[k] * rows(k, j));
    std::string name = "coefficient_o" + std::to_string(j) + "_iota" + std::to_string(N - static_cast<int>(j));
    out.push_back({name, lhs[j], sum(terms)});
  }
  return out;
}

PentadData solve_pentad(const JetOde& ode) {
  PentadData pd;
  pd.order = ode.order();
  const std::size_t n = static_cast<std::size_t>(ode.order());
  const std::size_t N = n - 1;

  pd.p_ansatz = fit_p_ansatz(ode);
  std::vector<Expr> factors;
  for (const auto& f : pd.p_ansatz) factors.push_back(pow(f.base, f.exponent));
  pd.P = product(factors);

  // The o^(N-1) iota equation is affine in Q with no derivatives of Q.
  auto residual_at = [&](const Expr& q) {
    auto rows = build_rows(pd.P, q, ode);
    auto eqs = coefficient_equations(rows, pd.P, q, ode);
    return eqs[N - 1].lhs - eqs[N - 1].rhs;
  };
  Expr r0 = residual_at(Expr(0));
  Expr pivot = residual_at(Expr(1)) - r0;
  {
    auto pts = default_domain(ode).sample_points(16, kDefaultSeed);
    std::array<Expr, 2> pr{pivot, r0};
    Program prog(pr);
    bool nonzero = false;
    for (const auto& pt : pts) {
      auto v = prog.run(pt);
      if (std::abs(v[0]) > 1e-12 * (1.0 + std::abs(v[1]))) nonzero = true;
    }
    if (!nonzero) throw PentadError("the equation for Q has a zero pivot");
  }
  pd.Q = -r0 / pivot;

  pd.rows = build_rows(pd.P, pd.Q, ode);
  auto eqs = coefficient_equations(pd.rows, pd.P, pd.Q, ode);
  pd.solved_equations = {eqs[N], eqs[N - 1]};
  pd.residual_identities.assign(eqs.begin(), eqs.begin() + static_cast<long>(N - 1));

  std::vector<Expr> last(n);
  for (std::size_t j = 0; j < n; ++j) last[j] = pd.rows(N, j);
  pd.top_prime = prime_row(last, pd.P, pd.Q, ode);

  pd.coframe = invert_lower_triangular(pd.rows);
  pd.frame = pd.rows;
  return pd;
}

std::map<std::string, Expr> coefficients(const PentadData& pd) {
  std::map<std::string, Expr> out;
  if (pd.order == 5) {
    const char* lower[] = {"A", "B", "C"};
    for (int j = 0; j < 3; ++j) out[lower[j]] = pd.rows(3, j);
    const char* upper[] = {"E", "F", "G", "H"};
    for (int j = 0; j < 4; ++j) out[upper[j]] = pd.rows(4, j);
  } else {
    const char* lower[] = {"A", "B", "C", "D"};
    for (int j = 0; j < 4; ++j) out[lower[j]] = pd.rows(3, j);
    const char* upper[] = {"E", "F", "G", "H"};
    for (int j = 0; j < 4; ++j) out[upper[j]] = pd.top_prime[j];
  }
  return out;
}

std::vector<NamedIdentity> defining_relations(const PentadData& pd, const JetOde& ode) {
  auto D = [&](const Expr& e) { return total_derivative(e, ode); };
  auto c = coefficients(pd);
  const Expr& P = pd.P;
  const Expr& Q = pd.Q;
  Expr P1 = D(P), Q1 = D(Q), P2 = D(P1);
  auto k = [](int v) { return Expr(v); };
  std::vector<NamedIdentity> out;
  if (pd.order == 5) {
    out.push_back({"A=8P'Q+4PQ'", c["A"], k(8) * P1 * Q + k(4) * P * Q1});
    out.push_back({"B=4P''+40P^2Q", c["B"], k(4) * P2 + k(40) * pow(P, 2) * Q});
    out.push_back({"C=36PP'", c["C"], k(36) * P * P1});
    out.push_back({"E=A'+BQ", c["E"], D(c["A"]) + c["B"] * Q});
    out.push_back({"F=B'+4PA+2QC", c["F"], D(c["B"]) + k(4) * P * c["A"] + k(2) * Q * c["C"]});
    out.push_back({"G=C'+3PB+72P^3Q", c["G"], D(c["C"]) + k(3) * P * c["B"] + k(72) * pow(P, 3) * Q});
    out.push_back({"H=144P^2P'", c["H"], k(144) * pow(P, 2) * P1});
    out.push_back({"d(r)_o3iota=24P^3", pd.rows(3, 3), k(24) * pow(P, 3)});
    out.push_back({"d(s)_o4=24P^4", pd.rows(4, 4), k(24) * pow(P, 4)});
  } else {
    out.push_back({"A=3PQ'+6P'Q", c["A"], k(3) * P * Q1 + k(6) * P1 * Q});
    out.push_back({"B=3P''+21P^2Q", c["B"], k(3) * P2 + k(21) * pow(P, 2) * Q});
    out.push_back({"C=18PP'", c["C"], k(18) * P * P1});
    out.push_back({"D=6P^3", c["D"], k(6) * pow(P, 3)});
    out.push_back({"E=A'+BQ", c["E"], D(c["A"]) + c["B"] * Q});
    out.push_back({"F=B'+3AP+2CQ", c["F"], D(c["B"]) + k(3) * c["A"] * P + k(2) * c["C"] * Q});
    out.push_back({"G=C'+2BP+3DQ", c["G"], D(c["C"]) + k(2) * c["B"] * P + k(3) * c["D"] * Q});
    out.push_back({"H=D'+CP", c["H"], D(c["D"]) + c["C"] * P});
    out.push_back({"H=36P^2P'", c["H"], k(36) * pow(P, 2) * P1});
  }
  return out;
}

ExprMatrix symplectic(const PentadData& pd) {
  if (pd.order != 4) throw PentadError("the symplectic form is defined for order-four equations");
  const ExprMatrix& e = pd.coframe;
  ExprMatrix omega(4, 4);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      if (a == b) continue;
      Expr w14 = e(0, a) * e(3, b) - e(0, b) * e(3, a);
      Expr w23 = e(1, a) * e(2, b) - e(1, b) * e(2, a);
      omega(a, b) = w14 - Expr(3) * w23;
    }
  return omega;
}

Expr wedge_square(const ExprMatrix& w) {
  return Expr(2) * (w(0, 1) * w(2, 3) - w(0, 2) * w(1, 3) + w(0, 3) * w(1, 2));
}

std::vector<Expr> exterior_derivative(const ExprMatrix& w, const std::vector<Var>& coords) {
  std::vector<Expr> out;
  const std::size_t n = coords.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        out.push_back(diff(w(b, c), coords[a]) + diff(w(c, a), coords[b]) + diff(w(a, b), coords[c]));
  return out;
}

ExprMatrix flow_derivative(const ExprMatrix& t, const ProlongationField& v) {
  const std::size_t n = v.coords.size();
  ExprMatrix dv(n, n);  // dv(c, a) = d V^c / d X^a
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < n; ++a) dv(c, a) = diff(v.components[c], v.coords[a]);
  ExprMatrix out(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<Expr> terms{diff(t(a, b), Var::x)};
      for (std::size_t c = 0; c < n; ++c) {
        terms.push_back(v.components[c] * diff(t(a, b), v.coords[c]));
        terms.push_back(t(c, b) * dv(c, a));
        terms.push_back(t(a, c) * dv(c, b));
      }
      out(a, b) = sum(terms);
    }
  return out;
}

}  // namespace odegeom
