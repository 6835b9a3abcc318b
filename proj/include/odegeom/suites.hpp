#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "odegeom/jet.hpp"
#include "odegeom/radon.hpp"
#include "odegeom/report.hpp"

namespace odegeom {

enum class Suite { pentad, geom, so3, radon, all };

std::optional<Suite> suite_from_name(std::string_view name);

/// The suite cannot run on the given input (wrong order, no conic family).
class SuiteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RadonSuiteOptions {
  /// Test functions in x and y; empty means 1, x, y, xy.
  std::vector<Expr> functions;
  double x_a = -0.3, x_b = 0.3;
  /// Evaluate at this point and two fixed neighbours instead of sampling.
  std::optional<Assignment> point;
  /// Points per test function when sampling.
  std::size_t points = 3;
};

struct SuiteOptions {
  EquivOptions equiv;
  RadonSuiteOptions radon;
};

CheckReport pentad_suite(const JetOde& ode, const SuiteOptions& opts);
CheckReport geom_suite(const JetOde& ode, const SuiteOptions& opts);
CheckReport so3_suite(const JetOde& ode, const SuiteOptions& opts);
CheckReport radon_suite(const JetOde& ode, const SuiteOptions& opts);

/// `all` runs every suite that applies to the equation: pentad always, geom
/// for order five, so3 and radon for the conic equation.
CheckReport run_suite(Suite s, const JetOde& ode, const SuiteOptions& opts);

/// Sample points for the Radon checks: the default box narrowed so that the
/// conic branch stays real with q > 0 on the interval.
std::vector<Assignment> radon_points(const RadonSuiteOptions& r, std::size_t n, std::uint64_t seed);

}  // namespace odegeom
