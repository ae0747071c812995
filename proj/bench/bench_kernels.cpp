// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "swirl/shock_locator.hpp"
#include "swirl/supersonic.hpp"

namespace {

using namespace swirl;

struct Setup {
  BackgroundShockSolution bg;
  PerturbationInput pert;
};

Setup make_setup(std::size_t n) {
  const double pi = std::numbers::pi;
  GasModel gas(1.4, 1.0, 1.0);
  auto w = RadialProfile::from_function(1.0, n, [&](double r) { return 0.05 * std::sin(pi * r); },
                                        Parity::odd);
  auto q = RadialProfile::constant(1.0, n, 2.0);
  Setup s{construct_upstream_from_wq({w, q, 4.0, 1.0}, gas), {}};
  s.pert.sigma = 0.01;
  s.pert.w_en = RadialProfile::from_function(1.0, n, [&](double r) { return std::sin(pi * r); },
                                             Parity::odd);
  s.pert.q_en = RadialProfile::constant(1.0, n, 0.0);
  s.pert.p_ex = RadialProfile::constant(1.0, n, -1e-5);
  return s;
}

void BM_march_parallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto s = make_setup(n);
  const auto prob = assemble_wave_problem(s.bg, s.pert, 1.0);
  MarchOptions opt;
  opt.parallel = true;
  for (auto _ : st) benchmark::DoNotOptimize(march_stream_function(prob, n, n, opt));
}

void BM_march_serial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto s = make_setup(n);
  const auto prob = assemble_wave_problem(s.bg, s.pert, 1.0);
  MarchOptions opt;
  opt.parallel = false;
  for (auto _ : st) benchmark::DoNotOptimize(march_stream_function(prob, n, n, opt));
}

void BM_march_reference(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto s = make_setup(n);
  const auto prob = assemble_wave_problem(s.bg, s.pert, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(march_stream_function_reference(prob, n, n));
}

void sample_I1(benchmark::State& st, bool parallel) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto s = make_setup(n);
  const auto sup = solve_supersonic(s.bg, s.pert, 1.0, n);
  const auto kap = kappa_profiles(s.bg);
  ShockLocator loc(sup, s.bg, kap, s.pert);
  std::vector<double> zs(10000);
  for (std::size_t k = 0; k < zs.size(); ++k)
    zs[k] = static_cast<double>(k) / static_cast<double>(zs.size() - 1);
  for (auto _ : st) benchmark::DoNotOptimize(loc.sample(zs, parallel));
}

void BM_I1_sample_parallel(benchmark::State& st) { sample_I1(st, true); }
void BM_I1_sample_serial(benchmark::State& st) { sample_I1(st, false); }

}  // namespace

BENCHMARK(BM_march_parallel)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_march_serial)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_march_reference)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_I1_sample_parallel)->Arg(129)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_I1_sample_serial)->Arg(129)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
