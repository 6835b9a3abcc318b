#include <cmath>
#include <sstream>
#include <unordered_map>

#include "odegeom/eval.hpp"

namespace odegeom {

double Assignment::get(Var v) const {
  if (!has(v)) throw EvalError("missing value for variable '" + std::string(var_name(v)) + "'");
  return values_[index_of(v)];
}

std::string Assignment::to_string() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (Var v : kAllVars) {
    if (!has(v)) continue;
    if (!first) os << ",";
    os << var_name(v) << "=" << values_[index_of(v)];
    first = false;
  }
  return os.str();
}

namespace {

double ipow(double b, long long n) {
  bool inv = n < 0;
  unsigned long long m = inv ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  double r = 1.0;
  while (m) {
    if (m & 1) r *= b;
    b *= b;
    m >>= 1;
  }
  return inv ? 1.0 / r : r;
}

}  // namespace

Program::Program(std::span<const Expr> outputs) {
  std::unordered_map<const detail::Node*, std::uint32_t> index;
  // Iterative post-order so deep DAGs do not exhaust the stack.
  struct Frame {
    const Expr* e;
    bool expanded;
  };
  for (const Expr& root : outputs) {
    std::vector<Frame> stack{{&root, false}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (index.count(f.e->id())) continue;
      if (!f.expanded) {
        stack.push_back({f.e, true});
        for (const auto& c : f.e->children())
          if (!index.count(c.id())) stack.push_back({&c, false});
        continue;
      }
      const Expr& e = *f.e;
      Instr in{};
      in.first = static_cast<std::uint32_t>(args_.size());
      for (const auto& c : e.children()) args_.push_back(index.at(c.id()));
      in.count = static_cast<std::uint32_t>(e.children().size());
      switch (e.kind()) {
        case Expr::Kind::constant:
          in.op = Op::constant;
          in.value = static_cast<double>(e.value());
          break;
        case Expr::Kind::variable:
          in.op = Op::variable;
          in.var = e.var();
          vars_.insert(e.var());
          break;
        case Expr::Kind::sum:
          in.op = Op::sum;
          break;
        case Expr::Kind::product:
          in.op = Op::product;
          break;
        case Expr::Kind::negation:
          in.op = Op::negation;
          break;
        case Expr::Kind::power: {
          in.op = Op::power;
          const Rational& ex = e.exponent();
          in.value = static_cast<double>(ex);
          in.int_exponent = denominator(ex) == 1;
          if (in.int_exponent) in.int_value = static_cast<long long>(numerator(ex));
          if (!in.int_exponent && (denominator(ex) == 2 || denominator(ex) == 3)) {
            in.root = static_cast<std::uint8_t>(denominator(ex));
            in.root_power = static_cast<std::int64_t>(numerator(ex));
          }
          break;
        }
      }
      index.emplace(e.id(), static_cast<std::uint32_t>(code_.size()));
      code_.push_back(in);
    }
    outputs_.push_back(index.at(root.id()));
  }
}

void Program::run(const Assignment& point, std::span<double> out, std::vector<double>& reg) const {
  if (!vars_.subset_of(point.present())) {
    for (Var v : kAllVars)
      if (vars_.contains(v) && !point.has(v))
        throw EvalError("missing value for variable '" + std::string(var_name(v)) + "'");
  }
  reg.resize(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& in = code_[i];
    const std::uint32_t* a = args_.data() + in.first;
    double v = 0.0;
    switch (in.op) {
      case Op::constant:
        v = in.value;
        break;
      case Op::variable:
        v = point[in.var];
        break;
      case Op::sum:
        for (std::uint32_t k = 0; k < in.count; ++k) v += reg[a[k]];
        break;
      case Op::product:
        v = 1.0;
        for (std::uint32_t k = 0; k < in.count; ++k) v *= reg[a[k]];
        break;
      case Op::negation:
        v = -reg[a[0]];
        break;
      case Op::power: {
        double b = reg[a[0]];
        if (in.int_exponent) {
          if (b == 0.0 && in.int_value < 0)
            throw EvalError("division by zero at " + point.to_string());
          v = ipow(b, in.int_value);
        } else {
          if (b < 0.0)
            throw EvalError("negative base under fractional exponent at " + point.to_string());
          if (b == 0.0 && in.value < 0)
            throw EvalError("division by zero at " + point.to_string());
          if (in.root == 2)
            v = ipow(std::sqrt(b), in.root_power);
          else if (in.root == 3)
            v = ipow(std::cbrt(b), in.root_power);
          else
            v = std::pow(b, in.value);
        }
        break;
      }
    }
    reg[i] = v;
  }
  for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = reg[outputs_[k]];
}

std::vector<double> Program::run(const Assignment& point) const {
  std::vector<double> out(outputs_.size());
  std::vector<double> scratch;
  run(point, out, scratch);
  return out;
}

double eval(const Expr& e, const Assignment& a) {
  std::array<Expr, 1> one{e};
  return Program(one).run(a)[0];
}

}  // namespace odegeom
