#include "odegeom/expr.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace odegeom {

namespace detail {

struct Node {
  Expr::Kind kind = Expr::Kind::constant;
  Var var = Var::x;
  Rational value;  // constant value, or exponent of a power node
  std::vector<Expr> children;
  std::size_t hash = 0;
  VarSet vars;
};

}  // namespace detail

namespace {

constexpr std::array<std::string_view, kVarCount> kVarNames{"x", "y", "p",
                                                            "q", "r", "s"};

std::size_t combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& r) {
  return std::hash<std::string>{}(to_string(r));
}

bool is_integer(const Rational& r) {
  return denominator(r) == 1;
}

Rational rational_pow(const Rational& base, long long n) {
  if (n < 0) {
    if (base == 0) throw std::domain_error("division by zero in constant power");
    return rational_pow(Rational(1) / base, -n);
  }
  Rational result = 1;
  Rational b = base;
  while (n > 0) {
    if (n & 1) result *= b;
    b *= b;
    n >>= 1;
  }
  return result;
}

}  // namespace

struct ExprFactory {
  static Expr make(detail::Node&& n) {
    std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
    switch (n.kind) {
      case Expr::Kind::constant:
        h = combine(h, hash_rational(n.value));
        break;
      case Expr::Kind::variable:
        h = combine(h, index_of(n.var));
        n.vars.insert(n.var);
        break;
      case Expr::Kind::power:
        h = combine(h, hash_rational(n.value));
        [[fallthrough]];
      default:
        for (const auto& c : n.children) {
          h = combine(h, c.hash());
          n.vars = n.vars | c.free_vars();
        }
    }
    n.hash = h;
    return Expr(std::make_shared<const detail::Node>(std::move(n)));
  }

  static Expr constant(const Rational& v) {
    detail::Node n;
    n.kind = Expr::Kind::constant;
    n.value = v;
    return make(std::move(n));
  }

  static Expr variable(Var v) {
    detail::Node n;
    n.kind = Expr::Kind::variable;
    n.var = v;
    return make(std::move(n));
  }

  static Expr nary(Expr::Kind kind, std::vector<Expr> children) {
    detail::Node n;
    n.kind = kind;
    n.children = std::move(children);
    return make(std::move(n));
  }

  static Expr power(const Expr& base, const Rational& exponent) {
    detail::Node n;
    n.kind = Expr::Kind::power;
    n.value = exponent;
    n.children = {base};
    return make(std::move(n));
  }

  static Expr negation(const Expr& operand) {
    detail::Node n;
    n.kind = Expr::Kind::negation;
    n.children = {operand};
    return make(std::move(n));
  }
};

std::string_view var_name(Var v) { return kVarNames[index_of(v)]; }

std::optional<Var> var_from_name(std::string_view name) {
  for (Var v : kAllVars)
    if (kVarNames[index_of(v)] == name) return v;
  return std::nullopt;
}

std::string VarSet::to_string() const {
  std::string out;
  for (Var v : kAllVars) {
    if (!contains(v)) continue;
    if (!out.empty()) out += ",";
    out += var_name(v);
  }
  return "{" + out + "}";
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

Expr::Expr() : Expr(ExprFactory::constant(0)) {}
Expr::Expr(int value) : Expr(ExprFactory::constant(value)) {}
Expr::Expr(const Rational& value) : Expr(ExprFactory::constant(value)) {}
Expr::Expr(Var v) : Expr(ExprFactory::variable(v)) {}

Expr::Kind Expr::kind() const { return node_->kind; }
bool Expr::is_zero() const { return is_constant() && node_->value == 0; }
bool Expr::is_one() const { return is_constant() && node_->value == 1; }
const Rational& Expr::value() const { return node_->value; }
Var Expr::var() const { return node_->var; }
const Rational& Expr::exponent() const { return node_->value; }
std::span<const Expr> Expr::children() const { return node_->children; }
std::size_t Expr::hash() const { return node_->hash; }
VarSet Expr::free_vars() const { return node_->vars; }

std::size_t Expr::dag_size() const {
  std::unordered_set<const detail::Node*> seen;
  std::vector<const Expr*> stack{this};
  while (!stack.empty()) {
    const Expr* e = stack.back();
    stack.pop_back();
    if (!seen.insert(e->id()).second) continue;
    for (const auto& c : e->children()) stack.push_back(&c);
  }
  return seen.size();
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::constant:
      return a.value() == b.value();
    case Expr::Kind::variable:
      return a.var() == b.var();
    case Expr::Kind::power:
      if (a.exponent() != b.exponent()) return false;
      break;
    default:
      break;
  }
  auto ca = a.children();
  auto cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!(ca[i] == cb[i])) return false;
  return true;
}

namespace {

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

// Splits a term into rational coefficient and remaining factor.
std::pair<Rational, Expr> split_coefficient(const Expr& term) {
  if (term.is_constant()) return {term.value(), Expr(1)};
  if (term.kind() == Expr::Kind::negation) {
    auto [c, rest] = split_coefficient(term.children()[0]);
    return {-c, rest};
  }
  if (term.kind() == Expr::Kind::product) {
    auto ch = term.children();
    if (ch[0].is_constant()) {
      std::vector<Expr> rest(ch.begin() + 1, ch.end());
      if (rest.size() == 1) return {ch[0].value(), rest[0]};
      return {ch[0].value(), ExprFactory::nary(Expr::Kind::product, std::move(rest))};
    }
  }
  return {Rational(1), term};
}

// Base and exponent of a product factor.
std::pair<Expr, Rational> split_power(const Expr& f) {
  if (f.kind() == Expr::Kind::power) return {f.children()[0], f.exponent()};
  return {f, Rational(1)};
}

}  // namespace

Expr pow(const Expr& base, const Rational& exponent) {
  if (exponent == 0) return Expr(1);
  if (exponent == 1) return base;
  const bool int_exp = is_integer(exponent);
  switch (base.kind()) {
    case Expr::Kind::constant: {
      const Rational& b = base.value();
      if (b == 1) return Expr(1);
      if (b == 0) {
        if (exponent < 0) throw std::domain_error("division by zero: 0 raised to a negative power");
        return Expr(0);
      }
      if (int_exp)
        return Expr(rational_pow(b, static_cast<long long>(numerator(exponent))));
      break;
    }
    case Expr::Kind::power: {
      // Non-integer inner exponents already require a non-negative base.
      if (int_exp || !is_integer(base.exponent()))
        return pow(base.children()[0], base.exponent() * exponent);
      break;
    }
    case Expr::Kind::product:
      if (int_exp) {
        std::vector<Expr> factors;
        for (const auto& f : base.children()) factors.push_back(pow(f, exponent));
        return product(factors);
      }
      break;
    case Expr::Kind::negation:
      if (int_exp) {
        Expr inner = pow(base.children()[0], exponent);
        return (numerator(exponent) % 2 == 0) ? inner : -inner;
      }
      break;
    default:
      break;
  }
  return ExprFactory::power(base, exponent);
}

Expr product(std::span<const Expr> factors) {
  Rational coefficient = 1;
  std::vector<Expr> bases;
  std::vector<Rational> exponents;
  std::unordered_map<Expr, std::size_t, ExprHash> slot;

  std::function<void(const Expr&)> absorb = [&](const Expr& f) {
    switch (f.kind()) {
      case Expr::Kind::constant:
        coefficient *= f.value();
        return;
      case Expr::Kind::product:
        for (const auto& c : f.children()) absorb(c);
        return;
      case Expr::Kind::negation:
        coefficient = -coefficient;
        absorb(f.children()[0]);
        return;
      default:
        break;
    }
    auto [b, e] = split_power(f);
    auto it = slot.find(b);
    if (it == slot.end()) {
      slot.emplace(b, bases.size());
      bases.push_back(b);
      exponents.push_back(e);
    } else {
      exponents[it->second] += e;
    }
  };
  for (const auto& f : factors) {
    absorb(f);
    if (coefficient == 0) return Expr(0);
  }

  std::vector<Expr> out;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (exponents[i] == 0) continue;
    Expr f = pow(bases[i], exponents[i]);
    if (f.is_constant()) {
      coefficient *= f.value();
      continue;
    }
    if (f.kind() == Expr::Kind::product || f.kind() == Expr::Kind::negation) {
      // Re-merging a folded power; rare, so recurse once on the rest.
      std::vector<Expr> rest(out);
      rest.push_back(f);
      for (std::size_t j = i + 1; j < bases.size(); ++j)
        if (exponents[j] != 0) rest.push_back(pow(bases[j], exponents[j]));
      rest.insert(rest.begin(), Expr(coefficient));
      return product(rest);
    }
    out.push_back(f);
  }
  if (coefficient == 0) return Expr(0);
  if (out.empty()) return Expr(coefficient);
  // Canonical factor order: powers of variables by variable, then the rest
  // by hash, so equal products compare equal regardless of input order.
  auto key = [](const Expr& f) {
    const Expr& b = f.kind() == Expr::Kind::power ? f.children()[0] : f;
    if (b.kind() == Expr::Kind::variable) return std::pair<int, std::size_t>(0, index_of(b.var()));
    return std::pair<int, std::size_t>(1, b.hash());
  };
  std::stable_sort(out.begin(), out.end(), [&](const Expr& a, const Expr& b) { return key(a) < key(b); });
  bool negate = false;
  if (coefficient == -1) {
    negate = true;
  } else if (coefficient != 1) {
    out.insert(out.begin(), Expr(coefficient));
  }
  Expr body = out.size() == 1 ? out[0] : ExprFactory::nary(Expr::Kind::product, std::move(out));
  return negate ? ExprFactory::negation(body) : body;
}

Expr sum(std::span<const Expr> terms) {
  Rational constant = 0;
  std::vector<Expr> rests;
  std::vector<Rational> coefficients;
  std::unordered_map<Expr, std::size_t, ExprHash> slot;

  std::function<void(const Expr&, const Rational&)> absorb = [&](const Expr& t, const Rational& scale) {
    if (t.is_constant()) {
      constant += scale * t.value();
      return;
    }
    if (t.kind() == Expr::Kind::sum) {
      for (const auto& c : t.children()) absorb(c, scale);
      return;
    }
    if (t.kind() == Expr::Kind::negation && t.children()[0].kind() == Expr::Kind::sum) {
      absorb(t.children()[0], -scale);
      return;
    }
    auto [c, rest] = split_coefficient(t);
    auto it = slot.find(rest);
    if (it == slot.end()) {
      slot.emplace(rest, rests.size());
      rests.push_back(rest);
      coefficients.push_back(scale * c);
    } else {
      coefficients[it->second] += scale * c;
    }
  };
  for (const auto& t : terms) absorb(t, Rational(1));

  std::vector<Expr> out;
  for (std::size_t i = 0; i < rests.size(); ++i) {
    if (coefficients[i] == 0) continue;
    if (coefficients[i] == 1) {
      out.push_back(rests[i]);
    } else {
      std::array<Expr, 2> f{Expr(coefficients[i]), rests[i]};
      out.push_back(product(f));
    }
  }
  if (constant != 0) out.push_back(Expr(constant));
  if (out.empty()) return Expr(0);
  if (out.size() == 1) return out[0];
  return ExprFactory::nary(Expr::Kind::sum, std::move(out));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  std::array<Expr, 2> t{a, b};
  return sum(t);
}

Expr operator-(const Expr& a) {
  switch (a.kind()) {
    case Expr::Kind::constant:
      return Expr(Rational(-a.value()));
    case Expr::Kind::negation:
      return a.children()[0];
    case Expr::Kind::product: {
      std::array<Expr, 2> f{Expr(-1), a};
      return product(f);
    }
    default:
      return ExprFactory::negation(a);
  }
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr(0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  std::array<Expr, 2> f{a, b};
  return product(f);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  return a * pow(b, Rational(-1));
}

namespace {

class Differentiator {
 public:
  explicit Differentiator(Var v) : v_(v) {}

  Expr operator()(const Expr& e) {
    if (!e.free_vars().contains(v_)) return Expr(0);
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Expr d = compute(e);
    memo_.emplace(e.id(), d);
    return d;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case Expr::Kind::constant:
        return Expr(0);
      case Expr::Kind::variable:
        return Expr(e.var() == v_ ? 1 : 0);
      case Expr::Kind::negation:
        return -(*this)(e.children()[0]);
      case Expr::Kind::sum: {
        std::vector<Expr> terms;
        for (const auto& c : e.children()) terms.push_back((*this)(c));
        return sum(terms);
      }
      case Expr::Kind::power: {
        const Expr& base = e.children()[0];
        Expr db = (*this)(base);
        std::array<Expr, 3> f{Expr(e.exponent()), pow(base, e.exponent() - 1), db};
        return product(f);
      }
      case Expr::Kind::product: {
        auto ch = e.children();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < ch.size(); ++i) {
          Expr dc = (*this)(ch[i]);
          if (dc.is_zero()) continue;
          std::vector<Expr> f;
          f.reserve(ch.size());
          for (std::size_t j = 0; j < ch.size(); ++j) f.push_back(j == i ? dc : ch[j]);
          terms.push_back(product(f));
        }
        return sum(terms);
      }
    }
    return Expr(0);
  }

  Var v_;
  std::unordered_map<const detail::Node*, Expr> memo_;
};

// Precedence contexts for printing: 0 sum operand, 1 product factor,
// 2 power base.
void print(std::ostream& os, const Expr& e, int ctx);

void print_rational(std::ostream& os, const Rational& r, int ctx) {
  const bool plain = is_integer(r) && r >= 0;
  if (plain || ctx == 0) {
    os << to_string(r);
  } else {
    os << "(" << to_string(r) << ")";
  }
}

void print_exponent(std::ostream& os, const Rational& r) {
  if (is_integer(r) && r >= 0)
    os << to_string(r);
  else
    os << "(" << to_string(r) << ")";
}

// Prints a product given its coefficient and non-constant factors, using
// `/` for factors with negative exponent.
void print_product(std::ostream& os, const Rational& coefficient,
                   std::span<const Expr> factors, int ctx) {
  std::vector<const Expr*> num, den;
  for (const auto& f : factors) {
    if (f.kind() == Expr::Kind::power && f.exponent() < 0)
      den.push_back(&f);
    else
      num.push_back(&f);
  }
  const bool wrap = ctx >= 2;
  if (wrap) os << "(";
  bool first = true;
  if (coefficient != 1 || num.empty()) {
    if (coefficient == -1 && !num.empty()) {
      os << "-";
    } else {
      print_rational(os, coefficient, num.empty() && den.empty() ? ctx : 1);
      first = false;
    }
  }
  for (const Expr* f : num) {
    if (!first) os << "*";
    print(os, *f, 1);
    first = false;
  }
  for (const Expr* f : den) {
    os << "/";
    Rational m = -f->exponent();
    if (m == 1) {
      print(os, f->children()[0], 2);
    } else {
      print(os, f->children()[0], 2);
      os << "^";
      print_exponent(os, m);
    }
  }
  if (wrap) os << ")";
}

void print(std::ostream& os, const Expr& e, int ctx) {
  switch (e.kind()) {
    case Expr::Kind::constant:
      print_rational(os, e.value(), ctx);
      return;
    case Expr::Kind::variable:
      os << var_name(e.var());
      return;
    case Expr::Kind::negation:
      if (ctx >= 1) os << "(";
      os << "-";
      print(os, e.children()[0], 1);
      if (ctx >= 1) os << ")";
      return;
    case Expr::Kind::power: {
      if (e.exponent() < 0) {
        std::array<Expr, 1> f{e};
        print_product(os, Rational(1), f, ctx);
        return;
      }
      if (ctx >= 2) os << "(";
      print(os, e.children()[0], 2);
      os << "^";
      print_exponent(os, e.exponent());
      if (ctx >= 2) os << ")";
      return;
    }
    case Expr::Kind::product: {
      auto ch = e.children();
      if (ch[0].is_constant())
        print_product(os, ch[0].value(), ch.subspan(1), ctx);
      else
        print_product(os, Rational(1), ch, ctx);
      return;
    }
    case Expr::Kind::sum: {
      if (ctx >= 1) os << "(";
      bool first = true;
      for (const auto& t : e.children()) {
        auto [c, rest] = split_coefficient(t);
        if (first) {
          print(os, t, 0);
        } else if (c < 0) {
          os << " - ";
          print(os, -t, 0);
        } else {
          os << " + ";
          print(os, t, 0);
        }
        first = false;
      }
      if (ctx >= 1) os << ")";
      return;
    }
  }
}

}  // namespace

Expr diff(const Expr& e, Var v) { return Differentiator(v)(e); }

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(os, e, 0);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  print(os, e, 0);
  return os;
}

}  // namespace odegeom
