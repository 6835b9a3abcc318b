#include "odegeom/equiv.hpp"

#include <algorithm>
#include <cmath>

namespace odegeom {

SampleDomain& SampleDomain::set(Var v, Interval range) {
  if (!(range.lo < range.hi)) throw std::invalid_argument("degenerate sample interval for " + std::string(var_name(v)));
  auto& s = slots_[index_of(v)];
  s.mode = Slot::Mode::range;
  s.range = range;
  return *this;
}

SampleDomain& SampleDomain::fix(Var v, double value) {
  auto& s = slots_[index_of(v)];
  s.mode = Slot::Mode::fixed;
  s.value = value;
  return *this;
}

SampleDomain& SampleDomain::constrain_contact(Interval w) {
  if (!(w.lo < w.hi)) throw std::invalid_argument("degenerate contact interval");
  contact_ = w;
  return *this;
}

VarSet SampleDomain::vars() const {
  VarSet out;
  for (Var v : kAllVars)
    if (slots_[index_of(v)].mode != Slot::Mode::absent) out.insert(v);
  if (contact_) out.insert(Var::y);
  return out;
}

bool SampleDomain::covers(VarSet needed) const { return needed.subset_of(vars()); }

Assignment SampleDomain::sample(SampleRng& rng) const {
  Assignment a;
  for (Var v : kAllVars) {
    const auto& s = slots_[index_of(v)];
    if (s.mode == Slot::Mode::range)
      a.set(v, rng.uniform(s.range.lo, s.range.hi));
    else if (s.mode == Slot::Mode::fixed)
      a.set(v, s.value);
  }
  if (contact_) {
    double w = rng.uniform(contact_->lo, contact_->hi);
    a.set(Var::y, a.get(Var::x) * a.get(Var::p) - w);
  }
  return a;
}

std::vector<Assignment> SampleDomain::sample_points(std::size_t n, std::uint64_t seed) const {
  SampleRng rng(seed);
  std::vector<Assignment> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample(rng));
  return out;
}

double scaled_residual(double a, double b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

namespace {

struct Batch {
  Program program;
  std::size_t pairs;
};

Batch compile(std::span<const Expr> lhs, std::span<const Expr> rhs) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("equiv_batch: size mismatch");
  std::vector<Expr> all(lhs.begin(), lhs.end());
  all.insert(all.end(), rhs.begin(), rhs.end());
  return {Program(all), lhs.size()};
}

// Residuals for one sample; returns an error message instead of throwing so
// it can run inside a parallel region.
std::string evaluate_sample(const Batch& b, const Assignment& pt, double* residuals,
                            std::vector<double>& values, std::vector<double>& scratch) {
  try {
    values.resize(2 * b.pairs);
    b.program.run(pt, values, scratch);
    for (std::size_t k = 0; k < b.pairs; ++k) {
      double x = values[k], y = values[b.pairs + k];
      if (!std::isfinite(x) || !std::isfinite(y))
        return "non-finite value at " + pt.to_string();
      residuals[k] = scaled_residual(x, y);
    }
  } catch (const EvalError& e) {
    return std::string(e.what()) + " (sample " + pt.to_string() + ")";
  }
  return {};
}

std::vector<EquivResult> reduce(const std::vector<double>& res, const std::vector<Assignment>& pts,
                                std::size_t pairs, const EquivOptions& opts) {
  std::vector<EquivResult> out(pairs);
  for (std::size_t k = 0; k < pairs; ++k) {
    std::size_t worst = 0;
    double m = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double r = res[i * pairs + k];
      if (r > m) {
        m = r;
        worst = i;
      }
    }
    out[k].max_residual = m;
    out[k].samples = pts.size();
    out[k].pass = m <= opts.tol;
    out[k].worst_point = pts[worst].to_string();
  }
  return out;
}

void check_options(const EquivOptions& opts) {
  if (opts.samples == 0) throw std::invalid_argument("equiv needs at least one sample");
}

}  // namespace

std::vector<EquivResult> equiv_batch_serial(std::span<const Expr> lhs, std::span<const Expr> rhs,
                                            const SampleDomain& dom, const EquivOptions& opts) {
  check_options(opts);
  Batch b = compile(lhs, rhs);
  auto pts = dom.sample_points(opts.samples, opts.seed);
  std::vector<double> res(pts.size() * b.pairs);
  std::vector<double> values, scratch;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::string err = evaluate_sample(b, pts[i], res.data() + i * b.pairs, values, scratch);
    if (!err.empty()) throw EvalError(err);
  }
  return reduce(res, pts, b.pairs, opts);
}

std::vector<EquivResult> equiv_batch(std::span<const Expr> lhs, std::span<const Expr> rhs,
                                     const SampleDomain& dom, const EquivOptions& opts) {
  check_options(opts);
  Batch b = compile(lhs, rhs);
  auto pts = dom.sample_points(opts.samples, opts.seed);
  std::vector<double> res(pts.size() * b.pairs);
  std::vector<std::string> errors(pts.size());
  const long n = static_cast<long>(pts.size());
#pragma omp parallel
  {
    std::vector<double> values, scratch;
#pragma omp for schedule(dynamic)
    for (long i = 0; i < n; ++i)
      errors[i] = evaluate_sample(b, pts[i], res.data() + i * b.pairs, values, scratch);
  }
  for (const auto& e : errors)
    if (!e.empty()) throw EvalError(e);
  return reduce(res, pts, b.pairs, opts);
}

EquivResult combine(std::span<const EquivResult> results) {
  EquivResult out;
  out.pass = true;
  double worst = -1.0;
  for (const auto& r : results) {
    out.pass = out.pass && r.pass;
    out.samples = std::max(out.samples, r.samples);
    if (r.max_residual > worst) {
      worst = r.max_residual;
      out.worst_point = r.worst_point;
    }
  }
  out.max_residual = std::max(worst, 0.0);
  return out;
}

EquivResult equiv(const Expr& e1, const Expr& e2, const SampleDomain& dom, const EquivOptions& opts) {
  std::array<Expr, 1> l{e1}, r{e2};
  return equiv_batch(l, r, dom, opts)[0];
}

}  // namespace odegeom
