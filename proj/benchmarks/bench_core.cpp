#include <benchmark/benchmark.h>

#include "spdc/analysis.hpp"
#include "spdc/geometry.hpp"
#include "spdc/interference.hpp"
#include "spdc/units.hpp"

namespace {

const spdc::PumpSpec kPump{395.0, 1.0};

spdc::InterferenceParams reference_params() {
    const spdc::CrystalSpec crystal{spdc::bbo(), 1.07, spdc::deg_to_rad(43.65), +1};
    return spdc::InterferenceParams::from(spdc::axial_propagation_times(crystal, kPump), kPump);
}

void BM_MaxVisibility(benchmark::State& state) {
    const auto params = reference_params();
    for (auto _ : state) benchmark::DoNotOptimize(spdc::max_visibility(params));
}
BENCHMARK(BM_MaxVisibility);

void BM_EmissionTimeMap(benchmark::State& state) {
    const auto cascade = spdc::make_cascade(spdc::bbo(), 1.07, spdc::deg_to_rad(43.65));
    const auto grid = spdc::uniform_phi_grid(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(spdc::emission_time_map(cascade, kPump, {}, grid));
}
BENCHMARK(BM_EmissionTimeMap)->Arg(64)->Arg(256);

void BM_DelayScan(benchmark::State& state) {
    const auto params = reference_params();
    const auto opt = spdc::optimal_delays(params.times);
    const double step = spdc::fringe_period(params) / 32.0;
    const spdc::AnalyzerDelayConfig cfg{spdc::kPi / 4, spdc::kPi / 4, opt.tau_a, opt.tau_b};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            spdc::delay_scan(params, cfg, {opt.tau_b - 50.0, opt.tau_b + 50.0, step}));
}
BENCHMARK(BM_DelayScan);

} // namespace

BENCHMARK_MAIN();
