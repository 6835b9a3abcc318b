#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "odegeom/expr.hpp"

namespace odegeom {

/// Values for (a subset of) the jet variables.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<Var, double>> values) {
    for (auto [v, x] : values) set(v, x);
  }

  void set(Var v, double value) {
    values_[index_of(v)] = value;
    present_.insert(v);
  }
  bool has(Var v) const { return present_.contains(v); }
  double get(Var v) const;
  double operator[](Var v) const { return values_[index_of(v)]; }
  VarSet present() const { return present_; }
  std::string to_string() const;

 private:
  std::array<double, kVarCount> values_{};
  VarSet present_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A set of expressions compiled to a straight-line program over the union
/// of their DAGs. Each distinct node is evaluated once per point.
class Program {
 public:
  Program() = default;
  explicit Program(std::span<const Expr> outputs);

  std::size_t output_count() const { return outputs_.size(); }
  std::size_t instruction_count() const { return code_.size(); }
  VarSet free_vars() const { return vars_; }

  /// Evaluates every output at `point` into `out`. `scratch` is resized as
  /// needed and may be reused across calls by one thread.
  void run(const Assignment& point, std::span<double> out, std::vector<double>& scratch) const;
  std::vector<double> run(const Assignment& point) const;

 private:
  enum class Op : std::uint8_t { constant, variable, sum, product, power, negation };
  struct Instr {
    Op op;
    Var var;
    bool int_exponent;
    std::uint32_t first;  // index into args_
    std::uint32_t count;
    double value;         // constant, or exponent
    long long int_value;  // integer exponent
    std::uint8_t root;    // 2 for sqrt, 3 for cbrt, 0 otherwise
    std::int64_t root_power;
  };
  std::vector<Instr> code_;
  std::vector<std::uint32_t> args_;
  std::vector<std::uint32_t> outputs_;
  VarSet vars_;
};

/// Evaluates one expression. Throws EvalError for a missing variable, a
/// division by zero, or a negative base under a fractional exponent.
double eval(const Expr& e, const Assignment& a);

}  // namespace odegeom
