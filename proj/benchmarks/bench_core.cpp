// Hot paths: Bessel orders, wall factors, the imaginary-axis integrand, channel energies.

#include <benchmark/benchmark.h>

#include "cavity/energy.hpp"
#include "cavity/modes.hpp"
#include "cavity/scattering.hpp"
#include "cavity/specfun.hpp"

namespace {

using namespace cavity;

const DielectricModel kWall = Lorentzian{1.0, 0.5, 0.05};

void hankel_real(benchmark::State& st) {
  const int l = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(hankel_orders(Wave::outgoing, l, {3.7, 0.0}));
}
BENCHMARK(hankel_real)->Arg(1)->Arg(16)->Arg(64)->Arg(256);

void hankel_complex(benchmark::State& st) {
  const int l = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(hankel_orders(Wave::ingoing, l, {3.7, 0.4}));
}
BENCHMARK(hankel_complex)->Arg(1)->Arg(16)->Arg(64)->Arg(256);

void scatter_amplitude(benchmark::State& st) {
  const Channel ch{static_cast<int>(st.range(0)), Polarization::TM};
  for (auto _ : st) benchmark::DoNotOptimize(s_b(ch, {2.3, 0.01}, 1.0, kWall));
}
BENCHMARK(scatter_amplitude)->Arg(1)->Arg(16)->Arg(64);

void imag_axis_integrand(benchmark::State& st) {
  const Channel ch{static_cast<int>(st.range(0)), Polarization::TE};
  const CavitySystem sys{kWall, std::nullopt, 1.0};
  for (auto _ : st) benchmark::DoNotOptimize(imag_axis_log_mode(ch, 0.8, sys));
}
BENCHMARK(imag_axis_integrand)->Arg(1)->Arg(16)->Arg(64);

void channel_energy_bench(benchmark::State& st) {
  const Channel ch{static_cast<int>(st.range(0)), Polarization::TM};
  const CavitySystem sys{kWall, std::nullopt, 1.0};
  for (auto _ : st) benchmark::DoNotOptimize(channel_energy(ch, sys));
}
BENCHMARK(channel_energy_bench)->Arg(1)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void count_modes_bench(benchmark::State& st) {
  const CavitySystem sys{PerfectConductor{}, std::nullopt, 1.0};
  for (auto _ : st)
    benchmark::DoNotOptimize(count_modes({1, Polarization::TE}, {0.1, 8.0, -0.5, 0.5}, sys));
}
BENCHMARK(count_modes_bench)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
