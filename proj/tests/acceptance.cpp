// One line per acceptance criterion. Each criterion names the report records
// it depends on and the tolerance it requires; a record passes only if it
// exists, its own status is pass, its residual is within the pinned bound and
// it was evaluated on enough samples.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "odegeom/suites.hpp"

using namespace odegeom;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  double worst = 0;
  std::string why;

  void require(const CheckReport& r, const std::string& name, double tol, std::size_t min_samples = 1) {
    const CheckRecord* rec = r.find(name);
    if (rec == nullptr) return fail(name + " missing");
    if (rec->status != CheckStatus::pass) return fail(name + " " + std::string(status_name(rec->status)));
    if (!(rec->max_residual <= tol)) return fail(name + " residual above bound");
    if (rec->samples < min_samples) return fail(name + " too few samples");
    if (rec->tolerance < 1) worst = std::max(worst, rec->max_residual);
  }
  // Every record whose name starts with prefix; at least one must exist.
  void require_prefix(const CheckReport& r, const std::string& prefix, double tol, std::size_t min_samples = 1) {
    std::size_t n = 0;
    for (const CheckRecord& rec : r.records())
      if (rec.name.rfind(prefix, 0) == 0) {
        require(r, rec.name, tol, min_samples);
        ++n;
      }
    if (n == 0) fail(prefix + "* missing");
  }
  void within(double seconds, double limit) {
    if (seconds >= limit) fail("runtime " + std::to_string(seconds) + " s");
  }
  void fail(const std::string& w) {
    if (pass) why = w;
    pass = false;
  }
};

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

SuiteOptions options() {
  SuiteOptions o;
  o.equiv.samples = 50;
  o.equiv.tol = 1e-9;
  return o;
}

}  // namespace

int main() {
  const SuiteOptions opts = options();
  const JetOde conics5 = builtin("conics5"), gn5 = builtin("gn5"), conics4 = builtin("conics4");

  // Suites shared by several criteria are run once; runtimes are measured per criterion below.
  const CheckReport geom5 = geom_suite(conics5, opts);
  const CheckReport geom_gn5 = geom_suite(gn5, opts);

  const std::vector<Criterion> criteria{
      {1, "pentad reconstruction",
       [&] {
         Outcome o;
         const auto t0 = Clock::now();
         const CheckReport a = pentad_suite(conics5, opts), b = pentad_suite(gn5, opts),
                           c = pentad_suite(conics4, opts);
         o.within(seconds_since(t0), 5.0);
         o.require(a, "P_equals_q_1_2", 1e-9, 50);
         o.require(a, "Q_equals_printed", 1e-9, 50);
         o.require(b, "P_equals_r_1_3", 1e-9, 50);
         o.require(b, "Q_equals_printed", 1e-9, 50);
         o.require(c, "P_equals_q_4_9_W_1_3", 1e-9, 50);
         o.require(c, "Q_equals_printed", 1e-9, 50);
         return o;
       }},
      {2, "residual identity gate",
       [&] {
         Outcome o;
         for (const JetOde* ode : {&conics5, &gn5, &conics4}) {
           const CheckReport r = pentad_suite(*ode, opts);
           o.require_prefix(r, "residual_identity_", 1e-9, 50);
           o.require_prefix(r, "solved_equation_", 1e-9, 50);
           if (ode->order() == 5) o.require(r, "negative_control_perturbed_rhs", 1.0, 50);
         }
         return o;
       }},
      {3, "metric fidelity",
       [&] {
         Outcome o;
         for (const CheckReport* r : {&geom5, &geom_gn5}) {
           o.require(*r, "metric_lower_matches_printed", 1e-9, 50);
           o.require(*r, "metric_upper_matches_printed", 1e-9, 50);
           o.require(*r, "metric_routes_agree", 1e-9, 50);
           o.require(*r, "metric_inverse_identity", 1e-9, 50);
         }
         o.require(geom_gn5, "erratum_metric_upper_34", 1e-9, 50);
         return o;
       }},
      {4, "curvature",
       [&] {
         Outcome o;
         const auto t0 = Clock::now();
         const CheckReport a = geom_suite(conics5, opts), b = geom_suite(gn5, opts);
         o.within(seconds_since(t0), 30.0);
         o.require(a, "scalar_curvature_minus60", 1e-6, 20);
         o.require(a, "einstein_ricci_minus12g", 1e-6, 20);
         o.require(b, "scalar_flat", 1e-8, 20);
         o.require(b, "not_ricci_flat", 1.0, 20);
         return o;
       }},
      {5, "structure checks",
       [&] {
         Outcome o;
         for (const CheckReport* r : {&geom5, &geom_gn5}) {
           o.require(*r, "killing_prolongation", 1e-9, 20);
           o.require(*r, "first_integral_g_yy", 1e-9, 20);
           o.require(*r, "harmonic_coordinates", 1e-8, 20);
           o.require(*r, "signature_split_3_2", 0.0, 20);
         }
         return o;
       }},
      {6, "connection",
       [&] {
         Outcome o;
         o.require_prefix(geom5, "connection_law_e", 1e-8, 20);
         o.require_prefix(geom5, "connection_", 1e-8, 20);
         o.require(geom5, "chi_equals_4gamma_dy_plus_delta_dp", 1e-9, 20);
         return o;
       }},
      {7, "SO(3) identities",
       [&] {
         Outcome o;
         const CheckReport r = so3_suite(conics5, opts);
         for (const char* n : {"G0_normalisation", "G_parallel", "G1_curvature_condition", "G2_chi_decomposition",
                               "G4_curvature_contraction"})
           o.require(r, n, 1e-8, 10);
         o.require(r, "G_trace_7_12", 1e-10, 10);
         o.require(r, "G_trace_35_12", 1e-10, 10);
         return o;
       }},
      {8, "operator expansion",
       [&] {
         Outcome o;
         const CheckReport r = so3_suite(conics5, opts);
         for (const char* n : {"expansion_dy", "expansion_dp", "expansion_dq", "expansion_dr", "expansion_ds"})
           o.require(r, n, 1e-8, 200);  // 20 quadratic functions at 10 points
         o.require(r, "erratum_expansion_dq_33", 1e-8, 200);
         return o;
       }},
      {9, "Radon verification",
       [&] {
         Outcome o;
         const auto t0 = Clock::now();
         const CheckReport r = radon_suite(conics5, opts);
         o.within(seconds_since(t0), 120.0);
         for (const char* f : {"1", "x", "y", "xy"}) {
           o.require(r, std::string("radon_system_residual_f_") + f, 1e-4, 2);
           o.require(r, std::string("radon_mu_relation_f_") + f, 1e-3, 2);
           o.require(r, std::string("radon_lambda_spread_f_") + f, 1e-3, 2);
         }
         return o;
       }},
      {10, "symplectic form",
       [&] {
         Outcome o;
         const auto t0 = Clock::now();
         const CheckReport r = pentad_suite(conics4, opts);
         o.within(seconds_since(t0), 10.0);
         o.require(r, "symplectic_matches_printed", 1e-9, 50);
         o.require(r, "symplectic_closed", 1e-9, 50);
         o.require(r, "symplectic_wedge_square", 1e-9, 50);
         o.require(r, "symplectic_x_independent", 1e-9, 50);
         o.require(r, "erratum_symplectic", 1e-9, 50);
         return o;
       }},
      {11, "numerics hygiene",
       [&] {
         Outcome o;
         const CheckReport r = radon_suite(conics5, opts);
         o.require(r, "radon_fd_gradient_refinement", 1e-5);
         o.require(r, "radon_quadrature_order_doubling", 1e-10);
         o.require(r, "radon_ode_vs_closed_form", 1e-8);
         return o;
       }},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double t = seconds_since(t0);
    if (o.pass)
      std::printf("[PRIMARY] criterion %d %s: PASS (worst residual %.3e, %.2f s)\n", c.id, c.title, o.worst, t);
    else
      std::printf("[PRIMARY] criterion %d %s: FAIL (%s)\n", c.id, c.title, o.why.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
