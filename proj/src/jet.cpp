#include "odegeom/jet.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace odegeom {

JetOde::JetOde(std::string name, int order, Expr rhs)
    : name_(std::move(name)), order_(order), rhs_(std::move(rhs)) {
  if (order_ != 4 && order_ != 5) throw OdeError("only orders 4 and 5 are supported, got " + std::to_string(order_));
  VarSet allowed;
  for (Var v : jet_vars()) allowed.insert(v);
  if (!rhs_.free_vars().subset_of(allowed))
    throw OdeError("right-hand side uses " + rhs_.free_vars().to_string() +
                   " but an order-" + std::to_string(order_) + " equation only has " + allowed.to_string());
}

std::vector<Var> JetOde::jet_vars() const {
  std::vector<Var> v{Var::x, Var::y, Var::p, Var::q, Var::r};
  if (order_ == 5) v.push_back(Var::s);
  return v;
}

std::vector<Var> JetOde::moduli_coords() const {
  auto v = jet_vars();
  v.erase(v.begin());
  return v;
}

Expr total_derivative(const Expr& e, const JetOde& ode) {
  auto coords = ode.moduli_coords();
  std::vector<Expr> terms{diff(e, Var::x)};
  for (std::size_t k = 0; k < coords.size(); ++k) {
    Expr de = diff(e, coords[k]);
    if (de.is_zero()) continue;
    Expr next = k + 1 < coords.size() ? Expr(coords[k + 1]) : ode.rhs();
    terms.push_back(next * de);
  }
  return sum(terms);
}

JetOde builtin(std::string_view name) {
  if (name == "conics5") return JetOde("conics5", 5, parse("-(40/9)*r^3/q^2 + 5*r*s/q"));
  if (name == "gn5") return JetOde("gn5", 5, parse("(5/3)*s^2/r"));
  if (name == "conics4")
    return JetOde("conics4", 4,
                  parse("4*r^2/(3*q) + (2*x*q*r + 6*q^2)/(x*p - y) - 3*x^2*q^3/(x*p - y)^2"));
  throw OdeError("unknown ODE '" + std::string(name) + "' (builtins: conics5, gn5, conics4)");
}

std::vector<std::string> builtin_names() { return {"conics5", "gn5", "conics4"}; }

bool is_builtin(std::string_view name) {
  return name == "conics5" || name == "gn5" || name == "conics4";
}

JetOde parse_ode_definition(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto sep = line.find_first_of("=:");
    if (sep == std::string::npos) throw OdeError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, sep));
    std::string value = trim(line.substr(sep + 1));
    if (key != "name" && key != "order" && key != "rhs")
      throw OdeError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    kv[key] = value;
  }
  for (const char* k : {"order", "rhs"})
    if (!kv.count(k)) throw OdeError(std::string("missing key '") + k + "'");
  int order = 0;
  try {
    std::size_t used = 0;
    order = std::stoi(kv["order"], &used);
    if (used != kv["order"].size()) throw std::invalid_argument("order");
  } catch (const std::exception&) {
    throw OdeError("order must be an integer, got '" + kv["order"] + "'");
  }
  Expr rhs;
  try {
    rhs = parse(kv["rhs"]);
  } catch (const ParseError& e) {
    throw OdeError(std::string("rhs: ") + e.what());
  }
  return JetOde(kv.count("name") ? kv["name"] : "custom", order, rhs);
}

JetOde load_ode_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw OdeError("cannot open ODE file '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_ode_definition(ss.str());
}

ProlongationField prolongation(const JetOde& ode) {
  ProlongationField v;
  v.coords = ode.moduli_coords();
  for (std::size_t k = 0; k + 1 < v.coords.size(); ++k) v.components.push_back(Expr(v.coords[k + 1]));
  v.components.push_back(ode.rhs());
  return v;
}

SampleDomain default_domain(const JetOde& ode) {
  SampleDomain d;
  d.set(Var::p, {-1.0, 1.0}).set(Var::q, {0.5, 2.0}).set(Var::r, {0.5, 2.0});
  if (ode.order() == 5) {
    d.fix(Var::x, kBasePointX).set(Var::y, {-1.0, 1.0}).set(Var::s, {-1.0, 1.0});
  } else {
    d.set(Var::x, {0.5, 2.0}).constrain_contact({0.5, 2.0});
  }
  return d;
}

}  // namespace odegeom
