#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace odegeom {

using Rational = boost::multiprecision::cpp_rational;

/// Jet variables. The alphabet is fixed: x is the independent variable and
/// y, p, q, r, s are y, y', y'', y''', y''''.
enum class Var : std::uint8_t { x, y, p, q, r, s };

inline constexpr std::array<Var, 6> kAllVars{Var::x, Var::y, Var::p,
                                             Var::q, Var::r, Var::s};
inline constexpr std::size_t kVarCount = kAllVars.size();

inline constexpr std::size_t index_of(Var v) {
  return static_cast<std::size_t>(v);
}

std::string_view var_name(Var v);
std::optional<Var> var_from_name(std::string_view name);

/// Bit set of variables, used for free-variable queries.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr void insert(Var v) { bits_ |= bit(v); }
  constexpr bool contains(Var v) const { return (bits_ & bit(v)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool subset_of(VarSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr VarSet operator|(VarSet o) const { return VarSet(bits_ | o.bits_); }
  constexpr bool operator==(const VarSet&) const = default;
  std::string to_string() const;

 private:
  constexpr explicit VarSet(std::uint8_t b) : bits_(b) {}
  static constexpr std::uint8_t bit(Var v) {
    return static_cast<std::uint8_t>(1u << index_of(v));
  }
  std::uint8_t bits_ = 0;
};

class Expr;

namespace detail {
struct Node;
}

/// Immutable symbolic expression over the jet variables.
///
/// Nodes are shared, so copies are cheap and subtrees may appear many times
/// in one DAG. Construction goes through smart constructors that flatten
/// associative nodes, fold constants, and merge repeated bases in products;
/// there is no canonical normal form beyond that. Identities are certified
/// numerically with equiv().
class Expr {
 public:
  enum class Kind : std::uint8_t {
    constant,
    variable,
    sum,
    product,
    power,
    negation
  };

  Expr();  // the constant 0
  Expr(int value);
  Expr(const Rational& value);
  Expr(Var v);

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::constant; }
  bool is_zero() const;
  bool is_one() const;

  /// Valid for constant nodes.
  const Rational& value() const;
  /// Valid for variable nodes.
  Var var() const;
  /// Valid for power nodes.
  const Rational& exponent() const;
  /// Children of sum/product (n-ary), power (base) and negation (operand).
  std::span<const Expr> children() const;

  std::size_t hash() const;
  /// Number of distinct nodes in the DAG rooted here.
  std::size_t dag_size() const;
  VarSet free_vars() const;

  /// Identity of the underlying node, for memoization.
  const detail::Node* id() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  friend struct ExprFactory;
  std::shared_ptr<const detail::Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Rational& exponent);

Expr sum(std::span<const Expr> terms);
Expr product(std::span<const Expr> factors);

/// Exact partial derivative.
Expr diff(const Expr& e, Var v);

/// Infix ASCII rendering that parse() reads back to the same tree.
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

std::string to_string(const Rational& r);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses `+ - * / ^`, parentheses, integer literals and the variables
/// x, y, p, q, r, s. Exponents must reduce to rational constants.
Expr parse(std::string_view text);

}  // namespace odegeom
