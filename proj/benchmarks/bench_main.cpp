#include <benchmark/benchmark.h>

#include <cmath>

#include "raplab/algebra.hpp"
#include "raplab/catalog.hpp"
#include "raplab/flows.hpp"
#include "raplab/recurrence.hpp"

using namespace raplab;

namespace {

SampledSignal rap_signal(double t1, double dt) {
  return SampledSignal::tabulate(0.0, dt, SampledSignal::points_for(0.0, t1, dt),
                                 [](double t) { return std::sin(t + std::log1p(t)); });
}

void BM_RemoteScan(benchmark::State& st) {
  const auto s = rap_signal(static_cast<double>(st.range(0)), 0.01);
  auto cands = TauCandidates::uniform(0.05, 20.0, 0.05, true);
  cands.min_tail = 10.0;
  for (auto _ : st) benchmark::DoNotOptimize(translation_set_remote(s, 0.05, cands));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.size()));
}
BENCHMARK(BM_RemoteScan)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& st) {
  const auto s = rap_signal(static_cast<double>(st.range(0)), 0.01);
  Thresholds th;
  th.epsilon_grid = {0.05};
  th.tau = TauCandidates::uniform(0.05, 50.0, 0.05, true);
  th.tau.min_tail = 10.0;
  for (auto _ : st) benchmark::DoNotOptimize(classify(s, th));
}
BENCHMARK(BM_Classify)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_IntegrateHeq1(benchmark::State& st) {
  const auto rhs = catalog_rhs("heq1");
  const double T = static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(integrate(IVP{rhs, {0.0}, {0.0, T}, 1e-9, 1e-11, 0.05}));
}
BENCHMARK(BM_IntegrateHeq1)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_OmegaSample(benchmark::State& st) {
  const auto s = rap_signal(6000.0, 0.01);
  std::vector<double> shifts;
  for (int k = 0; k < st.range(0); ++k) shifts.push_back(3000.0 + 7.0 * k);
  for (auto _ : st) benchmark::DoNotOptimize(omega_limit_sample(s, shifts, 200.0, 0.01));
}
BENCHMARK(BM_OmegaSample)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TrackBranches(benchmark::State& st) {
  const double dt = 0.01;
  const auto n = SampledSignal::points_for(0.0, static_cast<double>(st.range(0)), dt);
  const auto p = PolyPath::tabulate(0.0, dt, n,
                                    {[](double) { return cplx(0.0); },
                                     [](double t) { return cplx(-(3 + std::sin(t) + std::sin(std::sqrt(2.0) * t))); }},
                                    "quadratic");
  for (auto _ : st) benchmark::DoNotOptimize(track_branches(p));
}
BENCHMARK(BM_TrackBranches)->Arg(400)->Arg(3200)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
