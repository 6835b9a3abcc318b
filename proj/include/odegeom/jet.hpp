#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "odegeom/equiv.hpp"
#include "odegeom/expr.hpp"

namespace odegeom {

/// Scalar ODE y^(n) = rhs(x, y, p, q, r[, s]) of order 4 or 5.
class JetOde {
 public:
  JetOde(std::string name, int order, Expr rhs);

  const std::string& name() const { return name_; }
  int order() const { return order_; }
  const Expr& rhs() const { return rhs_; }

  /// x followed by the jet coordinates up to y^(n-1).
  std::vector<Var> jet_vars() const;
  /// Coordinates on the solution space: the jet at a fixed x, (y, ..., y^(n-1)).
  std::vector<Var> moduli_coords() const;
  /// The highest jet coordinate, y^(n-1) (s for order 5, r for order 4).
  Var top() const { return order_ == 5 ? Var::s : Var::r; }

 private:
  std::string name_;
  int order_;
  Expr rhs_;
};

class OdeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// D = d/dx + p d/dy + q d/dp + ... + rhs d/d(top).
Expr total_derivative(const Expr& e, const JetOde& ode);

/// "conics5", "gn5" or "conics4".
JetOde builtin(std::string_view name);
std::vector<std::string> builtin_names();
bool is_builtin(std::string_view name);

/// Reads `name`, `order` and `rhs` from `key = value` (or `key: value`)
/// lines; `#` starts a comment.
JetOde parse_ode_definition(std::string_view text);
JetOde load_ode_file(const std::filesystem::path& path);

/// The flow on the solution space induced by moving the base point x:
/// components (p, q, ..., rhs) in moduli coordinates.
struct ProlongationField {
  std::vector<Var> coords;
  std::vector<Expr> components;
};

ProlongationField prolongation(const JetOde& ode);

/// Base point used for the fixed-x moduli coordinates.
inline constexpr double kBasePointX = 0.0;

/// Default sample box: q, r in [0.5, 2], s in [-1, 1], y, p in [-1, 1]. Order
/// five pins x to the base point; order four samples x in [0.5, 2] and
/// w = xp - y in [0.5, 2].
SampleDomain default_domain(const JetOde& ode);

}  // namespace odegeom
