// Command-line driver: odegeom <suite> --ode <name|file> [options]

#include <charconv>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "odegeom/suites.hpp"

using namespace odegeom;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

JetOde resolve_ode(const std::string& spec) {
  if (is_builtin(spec)) return builtin(spec);
  if (std::filesystem::is_regular_file(spec)) return load_ode_file(spec);
  throw InputError("unknown ODE '" + spec + "': not a built-in name (conics5, gn5, conics4) or a readable file");
}

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw InputError("invalid number '" + std::string(text) + "' in " + std::string(what));
  return v;
}

// "y=0.1,p=0,q=1,r=0.2,s=0"; all five coordinates are required.
Assignment parse_point(const std::string& text) {
  Assignment a;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw InputError("invalid point entry '" + item + "' (expected name=value)");
    const auto v = var_from_name(item.substr(0, eq));
    if (!v || *v == Var::x) throw InputError("unknown coordinate '" + item.substr(0, eq) + "' in --point");
    a.set(*v, parse_number(std::string_view(item).substr(eq + 1), "--point"));
    start = comma + 1;
  }
  for (Var v : {Var::y, Var::p, Var::q, Var::r, Var::s})
    if (!a.has(v)) throw InputError("--point is missing " + std::string(var_name(v)));
  a.set(Var::x, kBasePointX);
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry of the solution spaces of fourth- and fifth-order ODEs"};
  app.require_subcommand(1);

  std::string ode_spec, ode_positional, f_text, point_text;
  bool json = false;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = kDefaultSamples;
  double tol = kDefaultTolerance;
  std::vector<double> interval;

  std::vector<CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"pentad", "pentad reconstruction, coefficient identities, conics4 two-form"},
      {"geom", "metric, curvature, structure and connection checks (order 5)"},
      {"so3", "structure tensor identities and operator expansion (order 5)"},
      {"radon", "integral formula against the second-order system (conics5)"},
      {"all", "every suite that applies to the equation"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* ode_opt = sub->add_option("--ode", ode_spec, "built-in name or ODE definition file");
    sub->add_option("ODE", ode_positional, "same as --ode")->excludes(ode_opt);
    sub->add_flag("--json", json, "emit the report as JSON");
    sub->add_option("--seed", seed, "seed for random sample points");
    sub->add_option("--samples", samples, "sample points per randomized check");
    sub->add_option("--tol", tol, "relative tolerance for symbolic identity checks");
    if (std::string(name) == "radon" || std::string(name) == "all") {
      sub->add_option("--f", f_text, "test function in x and y (default: 1, x, y, xy)");
      sub->add_option("--interval", interval, "integration interval a b")->expected(2);
      sub->add_option("--point", point_text, "y=..,p=..,q=..,r=..,s=.. (two neighbours are added)");
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const auto suite = suite_from_name(chosen->get_name());
  try {
    if (ode_spec.empty()) ode_spec = ode_positional;
    if (ode_spec.empty()) throw InputError("no ODE given (use --ode conics5|gn5|conics4|<file>)");
    const JetOde ode = resolve_ode(ode_spec);
    SuiteOptions opts;
    opts.equiv = {samples, tol, seed};
    if (chosen->count("--samples") > 0) opts.radon.points = samples;
    if (!f_text.empty()) opts.radon.functions = {parse(f_text)};
    if (!interval.empty()) {
      if (!(interval[1] > interval[0])) throw InputError("--interval needs a < b");
      opts.radon.x_a = interval[0];
      opts.radon.x_b = interval[1];
    }
    if (!point_text.empty()) opts.radon.point = parse_point(point_text);

    const CheckReport rep = run_suite(*suite, ode, opts);
    std::cout << (json ? rep.to_json() : rep.to_table());
    return rep.all_pass() ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const OdeError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const SuiteError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const RadonError& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
