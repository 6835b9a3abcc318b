#include "odegeom/reference.hpp"

namespace odegeom::reference {

namespace {

Expr P_(std::string_view s) { return parse(s); }

ExprMatrix symmetric_from_upper(const std::vector<std::vector<std::string>>& rows) {
  const std::size_t n = rows.size();
  ExprMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      m(i, j) = parse(rows[i][j - i]);
      m(j, i) = m(i, j);
    }
  return m;
}

ExprMatrix rows_from(const std::vector<std::vector<Expr>>& rows) {
  ExprMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

PentadForms conics5() {
  PentadForms f;
  f.P = P_("q^(1/2)");
  f.Q = P_("(1/48)*r^2/q^(5/2)");
  f.coefficients = {
      {"A", P_("-r^3/(8*q^3) + r*s/(6*q^2)")},
      {"B", P_("2*s/q^(1/2) - r^2/(6*q^(3/2))")},
      {"C", P_("18*r")},
      {"E", P_("s^2/(6*q^2) + r^2*s/(6*q^3) - (319/864)*r^4/q^4")},
      {"F", P_("(28/3)*r*s/q^(3/2) - (151/18)*r^3/q^(5/2)")},
      {"G", P_("24*s + r^2/q")},
      {"H", P_("72*q^(1/2)*r")},
  };
  Expr z(0);
  Expr c3 = P_("1/(12*q)");
  Expr c4 = P_("1/(24*q*q^(1/2))");
  Expr c5 = P_("1/(24*q^2)");
  f.coframe = rows_from({
      {Expr(1), z, z, z, z},
      {z, P_("1/(4*q^(1/2))"), z, z, z},
      {c3 * P_("-r^2/(12*q^2)"), c3 * P_("-r/(2*q)"), c3, z, z},
      {c4 * P_("r^3/(4*q^3) - r*s/(6*q^2)"), c4 * P_("19*r^2/(24*q^2) - s/(2*q)"), c4 * P_("-3*r/(2*q)"), c4, z},
      {c5 * P_("-s^2/(6*q^2) + r^2*s/(2*q^3) - 323*r^4/(864*q^4)"), c5 * P_("r*s/(6*q^2) - 17*r^3/(72*q^3)"),
       c5 * P_("-2*s/q + 53*r^2/(12*q^2)"), c5 * P_("-3*r/q"), c5},
  });
  return f;
}

PentadForms gn5() {
  PentadForms f;
  f.P = P_("r^(1/3)");
  f.Q = Expr(0);
  f.coefficients = {
      {"A", Expr(0)},
      {"B", P_("4*s^2/(3*r^(5/3))")},
      {"C", P_("12*s/r^(1/3)")},
      {"E", Expr(0)},
      {"F", P_("20*s^3/(9*r^(8/3))")},
      {"G", P_("20*s^2/r^(4/3)")},
      {"H", P_("48*s")},
  };
  Expr z(0);
  Expr P = f.P;
  Expr c2 = P_("1/(4*r^(1/3))");
  Expr c3 = P_("1/(12*r^(2/3))");
  Expr c4 = P_("1/(24*r)");
  Expr c5 = P_("1/(24*r^(4/3))");
  f.coframe = rows_from({
      {Expr(1), z, z, z, z},
      {z, c2, z, z, z},
      {z, c3 * P_("-s/(3*r)"), c3, z, z},
      {z, z, c4 * P_("-s/r"), c4, z},
      {z, z, c5 * P_("s^2/(3*r^2)"), c5 * P_("-2*s/r"), c5},
  });
  // Columns are E_1..E_5 over (d/dy, ..., d/ds).
  Expr k2 = P_("4*r^(1/3)"), k3 = P_("12*r^(2/3)"), k4 = P_("24*r"), k5 = P_("24*r^(4/3)");
  f.frame = rows_from({
      {Expr(1), z, z, z, z},
      {z, k2, z, z, z},
      {z, k2 * P_("s/(3*r)"), k3, z, z},
      {z, z, k3 * P_("s/r"), k4, z},
      {z, z, k3 * P_("5*s^2/(3*r^2)"), k4 * P_("2*s/r"), k5},
  });
  return f;
}

PentadForms conics4() {
  const JetOde ode = builtin("conics4");
  auto D = [&](const Expr& e) { return total_derivative(e, ode); };
  PentadForms f;
  f.P = P_("q^(4/9)*(x*p - y)^(1/3)");
  f.Q = P_("(2*r^2/(9*q^2) + x*r/(3*(x*p - y)) - x^2*q^2/(x*p - y)^2)") / (Expr(9) * f.P);
  const Expr& P = f.P;
  const Expr& Q = f.Q;
  Expr A = Expr(3) * P * D(Q) + Expr(6) * D(P) * Q;
  // The coframe is printed in terms of B, so it is built from the corrected
  // closed form; the coefficient table keeps B as printed.
  Expr B_printed = P * P_("14*r^2/q^2 + (16*x*r + 27*q)/(3*(x*p - y)) - 7*x^2*q^2/(x*p - y)^2");
  Expr B = P * P_("(14/9)*r^2/q^2 + (16*x*r + 27*q)/(3*(x*p - y)) - 7*x^2*q^2/(x*p - y)^2");
  Expr C = Expr(2) * P_("q^(1/3)") / P * P_("4*r*(x*p - y) + 3*x*q^2");
  Expr Dc = P_("6*q^(4/3)*(x*p - y)");
  f.coefficients = {{"B", B_printed}, {"C", C}, {"D", Dc}};
  Expr z(0);
  Expr P1 = D(P);
  Expr c3 = Expr(1) / (Expr(6) * pow(P, 2));
  Expr c4 = Expr(1) / Dc;
  f.coframe = rows_from({
      {Expr(1), z, z, z},
      {z, Expr(1) / (Expr(3) * P), z, z},
      {c3 * (-(Expr(3) * P * Q)), c3 * (-(P1 / P)), c3, z},
      {c4 * (C * Q / (Expr(2) * P) - A), c4 * (C * P1 / (Expr(6) * pow(P, 3)) - B / (Expr(3) * P)),
       c4 * (-(C / (Expr(6) * pow(P, 2)))), c4},
  });
  return f;
}

}  // namespace

bool is_published(const JetOde& ode) {
  return is_builtin(ode.name()) && builtin(ode.name()).order() == ode.order() &&
         builtin(ode.name()).rhs() == ode.rhs();
}

std::optional<PentadForms> pentad(std::string_view ode) {
  if (ode == "conics5") return conics5();
  if (ode == "gn5") return gn5();
  if (ode == "conics4") return conics4();
  return std::nullopt;
}

std::optional<MetricForms> metric(std::string_view ode) {
  if (ode == "conics5") {
    MetricForms m;
    m.upper = symmetric_from_upper({
        {"0", "0", "0", "0", "24*q^2"},
        {"0", "0", "-24*q^2", "-72*q*r"},
        {"24*q^2", "24*q*r", "48*q*s - 32*r^2"},
        {"56*r^2 - 24*q*s", "(160/3)*r^3/q - 16*r*s"},
        {"104*s^2 - 320*r^2*s/q + (2560/9)*r^4/q^2"},
    });
    m.lower = symmetric_from_upper({
        {"r^2*s/(24*q^5) - 5*r^4/(162*q^6) - s^2/(72*q^4)", "r*s/(72*q^4) - r^3/(54*q^5)",
         "(13/72)*r^2/q^4 - s/(12*q^3)", "-r/(8*q^3)", "1/(24*q^2)"},
        {"s/(24*q^3) - r^2/(18*q^4)", "r/(24*q^3)", "-1/(24*q^2)", "0"},
        {"1/(24*q^2)", "0", "0"},
        {"0", "0"},
        {"0"},
    });
    return m;
  }
  if (ode == "gn5") {
    MetricForms m;
    m.lower = symmetric_from_upper({
        {"0", "0", "s^2/(72*r^(10/3))", "-s/(12*r^(7/3))", "1/(24*r^(4/3))"},
        {"s^2/(216*r^(10/3))", "s/(36*r^(7/3))", "-1/(24*r^(4/3))", "0"},
        {"1/(24*r^(4/3))", "0", "0"},
        {"0", "0"},
        {"0"},
    });
    m.upper = symmetric_from_upper({
        {"0", "0", "0", "0", "24*r^(4/3)"},
        {"0", "0", "-24*r^(4/3)", "-48*r^(1/3)*s"},
        {"24*r^(4/3)", "16*r^(1/3)*s", "24*r^(-2/3)*s^2"},
        {"8*r^(-2/3)*s^2", "-(32/3)*r^(-5/3)*s^3"},
        {"(40/3)*r^(-8/3)*s^4"},
    });
    return m;
  }
  return std::nullopt;
}

std::vector<Erratum> errata(std::string_view ode) {
  if (ode == "conics5")
    return {{"expansion_dq", 3, 3, P_("7*s - 40*r^3/(3*q)"), P_("7*s - 40*r^2/(3*q)"),
             "coefficient of F_rr in the dq component printed with r^3; every other coefficient is homogeneous "
             "under x -> k x (y weight 0, p -1, q -2, r -3, s -4) and this one is not, while r^2 restores "
             "homogeneity and agrees with the tensorial operator"}};
  if (ode == "gn5")
    return {{"metric_upper", 3, 4, P_("-(32/3)*r^(-5/3)*s^3"), P_("(32/3)*r^(-5/3)*s^3"),
             "g^{rs} printed with a minus sign; the printed covariant and contravariant matrices are then not "
             "inverse to each other"},
            {"frame", 3, 1, Expr(0), P_("4*r^(1/3)*s^2/(3*r^2)"),
             "E_2 printed without its d/dr component; the printed frame is then not dual to the printed coframe", false},
            {"frame", 4, 1, Expr(0), P_("4*r^(1/3)*5*s^3/(9*r^3)"),
             "E_2 printed without its d/ds component; the printed frame is then not dual to the printed coframe", false}};
  if (ode == "conics4")
    return {{"coefficient_B", 0, 0, P_("q^(4/9)*(x*p - y)^(1/3)*(14*r^2/q^2 + (16*x*r + 27*q)/(3*(x*p - y)) - 7*x^2*q^2/(x*p - y)^2)"),
             P_("q^(4/9)*(x*p - y)^(1/3)*((14/9)*r^2/q^2 + (16*x*r + 27*q)/(3*(x*p - y)) - 7*x^2*q^2/(x*p - y)^2)"),
             "closed form of B = 3P'' + 21P^2 Q printed with 14 r^2/q^2; expanding P''/P and PQ from the printed P "
             "and Q gives (14/9) r^2/q^2", false},
            {"symplectic", 0, 2, P_("(4*r/(3*q) + 2*x*q/(x*p - y))/(6*q^(4/3)*(x*p - y))"),
             P_("-(4*r/(3*q) + x*q/(x*p - y))/(6*q^(4/3)*(x*p - y))"),
             "dy^dq coefficient; closedness in the dy^dq^dr component forces its r-derivative to be "
             "-4/(3q) times the prefactor, and the printed sign gives +4/(3q)", false},
            {"symplectic", 2, 0, P_("-(4*r/(3*q) + 2*x*q/(x*p - y))/(6*q^(4/3)*(x*p - y))"),
             P_("(4*r/(3*q) + x*q/(x*p - y))/(6*q^(4/3)*(x*p - y))"), "antisymmetric partner of the dy^dq entry", false},
            {"symplectic", 0, 1, P_("-((x*p - y)*(x*r - 3*q) - 3*x^2*q^2)/((x*p - y)^2*6*q^(4/3)*(x*p - y))"),
             P_("-((x*p - y)*(x*r + 3*q) - 3*x^2*q^2)/((x*p - y)^2*6*q^(4/3)*(x*p - y))"),
             "dy^dp coefficient printed with x r - 3q; closedness in the dy^dp^dq component requires x r + 3q",
             false},
            {"symplectic", 1, 0, P_("((x*p - y)*(x*r - 3*q) - 3*x^2*q^2)/((x*p - y)^2*6*q^(4/3)*(x*p - y))"),
             P_("((x*p - y)*(x*r + 3*q) - 3*x^2*q^2)/((x*p - y)^2*6*q^(4/3)*(x*p - y))"),
             "antisymmetric partner of the dy^dp entry", false}};
  return {};
}

ExprMatrix corrected(const ExprMatrix& m, std::string_view ode, std::string_view object) {
  ExprMatrix out = m;
  for (const auto& e : errata(ode)) {
    if (e.object != object) continue;
    out(e.row, e.col) = e.corrected;
    if (e.symmetric) out(e.col, e.row) = e.corrected;
  }
  return out;
}

std::vector<std::pair<std::pair<Var, Var>, Expr>> pairing_chain(std::string_view ode) {
  using V = Var;
  if (ode == "conics5") {
    // Written with P = q^(1/2) and 2 P^3 P' = q r.
    Expr P = P_("q^(1/2)");
    Expr P1 = P_("r/(2*q^(1/2))");
    Expr P4 = pow(P, 4), P3P1 = pow(P, 3) * P1;
    return {
        {{V::y, V::y}, Expr(0)},
        {{V::y, V::p}, Expr(0)},
        {{V::y, V::q}, Expr(0)},
        {{V::y, V::r}, Expr(0)},
        {{V::p, V::p}, Expr(0)},
        {{V::p, V::q}, Expr(0)},
        {{V::y, V::s}, Expr(24) * P4},
        {{V::p, V::r}, Expr(-24) * P4},
        {{V::q, V::q}, Expr(24) * P4},
        {{V::p, V::s}, Expr(-144) * P3P1},
        {{V::q, V::r}, Expr(48) * P3P1},
        {{V::q, V::s}, P_("48*q*s - 32*r^2")},
        {{V::r, V::r}, P_("56*r^2 - 24*q*s")},
        {{V::r, V::s}, P_("(160/3)*r^3/q - 16*r*s")},
        {{V::s, V::s}, P_("104*s^2 - 320*r^2*s/q + (2560/9)*r^4/q^2")},
    };
  }
  if (ode == "gn5") {
    return {
        {{V::y, V::y}, Expr(0)},
        {{V::y, V::p}, Expr(0)},
        {{V::y, V::q}, Expr(0)},
        {{V::y, V::r}, Expr(0)},
        {{V::y, V::s}, P_("24*r^(4/3)")},
        {{V::p, V::p}, Expr(0)},
        {{V::p, V::q}, Expr(0)},
        {{V::p, V::r}, P_("-24*r^(4/3)")},
        {{V::p, V::s}, P_("-48*r^(1/3)*s")},
    };
  }
  return {};
}

Expr conics5_first_integral() { return P_("r^2*s/(24*q^5) - 5*r^4/(162*q^6) - s^2/(72*q^4)"); }

ConnectionForms conics5_connection() {
  ConnectionForms c;
  c.alpha = P_("s/(12*q^2) - r^2/(8*q^3)");
  c.gamma = P_("(1/24)*q^(-3/2)*r");
  c.delta = P_("(1/2)*q^(-1/2)");
  c.psi = {P_("-(1/864)*r^3/q^(9/2)"), P_("(5/96)*r^2/q^(7/2) - s/(24*q^(5/2))"), P_("r/(24*q^(5/2))"), Expr(0),
           Expr(0)};
  return c;
}

std::vector<ExpansionComponent> conics5_operator_expansion() {
  using V = Var;
  const Expr sprime = builtin("conics5").rhs();
  auto t = [](V a, V b, std::string_view c) { return ExpansionTerm{a, b, parse(c)}; };
  std::vector<ExpansionComponent> out;
  out.push_back({V::y,
                 {t(V::y, V::q, "4*q"), t(V::y, V::r, "6*r"), t(V::y, V::s, "8*s"), t(V::p, V::p, "-2*q"),
                  t(V::p, V::q, "-2*r"), t(V::p, V::r, "-2*s"), ExpansionTerm{V::p, V::s, Expr(-2) * sprime}},
                 -1});
  out.push_back({V::p,
                 {t(V::y, V::r, "6*q"), t(V::y, V::s, "16*r"), t(V::p, V::q, "-2*q"), t(V::p, V::r, "-4*r"),
                  t(V::p, V::s, "-6*s")},
                 -1});
  out.push_back({V::q,
                 {t(V::y, V::s, "4*q"), t(V::p, V::r, "2*q"), t(V::q, V::r, "-2*r"), t(V::q, V::q, "-2*q"),
                  t(V::q, V::s, "-16*s + 80*r^2/(3*q)"), t(V::r, V::r, "7*s - 40*r^3/(3*q)"),
                  t(V::r, V::s, "70*r*s/(3*q) - 400*r^3/(9*q^2)"),
                  t(V::s, V::s, "-(70/3)*s^2/q + (320/3)*r^2*s/q^2 - (3200/27)*r^4/q^3")},
                 -1});
  out.push_back({V::r,
                 {t(V::p, V::s, "4*q"), t(V::q, V::s, "-16*r"), t(V::q, V::r, "-2*q"), t(V::r, V::r, "6*r"),
                  t(V::r, V::s, "-2*s + 80*r^2/(3*q)"), t(V::s, V::s, "-(80/3)*r*s/q + (640/9)*r^3/q^2")},
                 -1});
  out.push_back({V::s,
                 {t(V::q, V::s, "4*q"), t(V::r, V::r, "-3*q"), t(V::r, V::s, "-12*r"),
                  t(V::s, V::s, "8*s - 80*r^2/(3*q)")},
                 -1});
  return out;
}

std::vector<ExpansionComponent> corrected_expansion(const std::vector<ExpansionComponent>& table) {
  auto out = table;
  auto idx = [](Var v) { return index_of(v) - index_of(Var::y); };
  for (const auto& e : errata("conics5")) {
    if (e.object.rfind("expansion_d", 0) != 0) continue;
    const std::string comp = e.object.substr(std::string("expansion_d").size());
    for (auto& row : out) {
      if (var_name(row.component) != comp) continue;
      for (auto& t : row.terms)
        if ((idx(t.first) == e.row && idx(t.second) == e.col) || (idx(t.first) == e.col && idx(t.second) == e.row))
          t.coefficient = e.corrected;
    }
  }
  return out;
}

ExprMatrix conics4_symplectic() {
  Expr c = P_("1/(6*q^(4/3)*(x*p - y))");
  ExprMatrix w(4, 4);
  auto set = [&](std::size_t a, std::size_t b, const Expr& v) {
    w(a, b) = v;
    w(b, a) = -v;
  };
  set(0, 3, c);
  set(1, 2, -c);
  set(0, 2, c * P_("4*r/(3*q) + 2*x*q/(x*p - y)"));
  set(0, 1, -(c * P_("((x*p - y)*(x*r - 3*q) - 3*x^2*q^2)/(x*p - y)^2")));
  return w;
}

Expr conics4_wedge_square() { return Expr(-1) / (Expr(18) * pow(P_("q^(4/9)*(x*p - y)^(1/3)"), 6)); }

}  // namespace odegeom::reference
