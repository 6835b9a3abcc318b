#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "odegeom/eval.hpp"
#include "odegeom/expr.hpp"

namespace odegeom {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;
inline constexpr std::size_t kDefaultSamples = 50;
inline constexpr double kDefaultTolerance = 1e-9;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Deterministic generator for sample points; identical sequences on every
/// platform for a given seed.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Box of sample values. A variable is either sampled from a closed interval
/// or pinned to a value. The optional contact constraint samples
/// w = x*p - y from an interval and sets y from it, keeping W = xp - y away
/// from zero.
class SampleDomain {
 public:
  SampleDomain& set(Var v, Interval range);
  SampleDomain& fix(Var v, double value);
  SampleDomain& constrain_contact(Interval w);

  bool covers(VarSet vars) const;
  VarSet vars() const;
  Assignment sample(SampleRng& rng) const;
  std::vector<Assignment> sample_points(std::size_t n, std::uint64_t seed) const;

 private:
  struct Slot {
    enum class Mode { absent, range, fixed } mode = Mode::absent;
    Interval range;
    double value = 0.0;
  };
  std::array<Slot, kVarCount> slots_{};
  std::optional<Interval> contact_;
};

struct EquivOptions {
  std::size_t samples = kDefaultSamples;
  double tol = kDefaultTolerance;
  std::uint64_t seed = kDefaultSeed;
};

struct EquivResult {
  bool pass = false;
  double max_residual = 0.0;
  std::size_t samples = 0;
  std::string worst_point;
};

/// |a - b| / (1 + max(|a|, |b|)).
double scaled_residual(double a, double b);

/// Randomized identity test: passes iff scaled_residual(e1, e2) <= tol at
/// every sample. Throws EvalError (with the point) if evaluation fails.
EquivResult equiv(const Expr& e1, const Expr& e2, const SampleDomain& dom,
                  const EquivOptions& opts = {});

/// Entrywise equiv of lhs[i] against rhs[i], all at the same sample points.
/// Samples are evaluated in parallel with OpenMP.
std::vector<EquivResult> equiv_batch(std::span<const Expr> lhs, std::span<const Expr> rhs,
                                     const SampleDomain& dom, const EquivOptions& opts = {});

/// Folds entrywise results into one: worst residual, pass iff all pass.
EquivResult combine(std::span<const EquivResult> results);

/// Single-threaded reference for equiv_batch; results are bit-identical.
std::vector<EquivResult> equiv_batch_serial(std::span<const Expr> lhs, std::span<const Expr> rhs,
                                            const SampleDomain& dom, const EquivOptions& opts = {});

}  // namespace odegeom
