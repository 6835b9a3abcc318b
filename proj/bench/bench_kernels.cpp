#include <benchmark/benchmark.h>

#include "odegeom/geom.hpp"
#include "odegeom/pentad.hpp"

using namespace odegeom;

namespace {

struct Fixture {
  JetOde ode = builtin("conics5");
  PentadData pd = solve_pentad(ode);
  MetricField m = metric_from_frame(pd);
  CurvatureEngine engine{m};
  ExprMatrix product = m.lower * m.upper;
  ExprMatrix id = ExprMatrix::identity(5);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_EquivSerial(benchmark::State& st) {
  const auto& f = fixture();
  EquivOptions o;
  o.samples = static_cast<std::size_t>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(equiv_batch_serial(f.product.entries(), f.id.entries(), default_domain(f.ode), o));
}

void BM_EquivParallel(benchmark::State& st) {
  const auto& f = fixture();
  EquivOptions o;
  o.samples = static_cast<std::size_t>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(equiv_batch(f.product.entries(), f.id.entries(), default_domain(f.ode), o));
}

void BM_CurvatureSerial(benchmark::State& st) {
  const auto& f = fixture();
  const auto pts = default_domain(f.ode).sample_points(static_cast<std::size_t>(st.range(0)), kDefaultSeed);
  for (auto _ : st) benchmark::DoNotOptimize(f.engine.at_points_serial(pts));
}

void BM_CurvatureParallel(benchmark::State& st) {
  const auto& f = fixture();
  const auto pts = default_domain(f.ode).sample_points(static_cast<std::size_t>(st.range(0)), kDefaultSeed);
  for (auto _ : st) benchmark::DoNotOptimize(f.engine.at_points(pts));
}

}  // namespace

BENCHMARK(BM_EquivSerial)->Arg(50)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EquivParallel)->Arg(50)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurvatureSerial)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurvatureParallel)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
