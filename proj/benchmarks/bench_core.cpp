#include <benchmark/benchmark.h>

#include <vector>

#include "radcool/estimation.hpp"
#include "radcool/instrument.hpp"
#include "radcool/langevin.hpp"
#include "radcool/physics.hpp"
#include "radcool/pipeline.hpp"
#include "radcool/scenario.hpp"

namespace {

using namespace radcool;

const ResonatorParams kRes{10.53e9, 113e3, 298e3};

Scenario headline_scenario() {
  return parse_scenario_text(
      "resonator.f0 = 10.53 GHz\n"
      "resonator.kappa_i = 113 kHz\n"
      "resonator.kappa_e = 298 kHz\n"
      "environment.temperature = 1.02 K\n"
      "source.temperature = 70 mK\n"
      "link.lambda = 0.91\n"
      "link.noise_floor = 0.02\n",
      "bench");
}

void OutputSpectrum(benchmark::State& state) {
  auto grid = default_detuning_grid(kRes.kappa_hz(), 15.0,
                                    static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto s = output_noise_psd(kRes, 1.56, 0.021, grid);
    benchmark::DoNotOptimize(s.value.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(OutputSpectrum)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void DeltaNExtraction(benchmark::State& state) {
  auto grid = default_detuning_grid(kRes.kappa_hz(), 15.0, 601);
  auto on = output_noise_psd(kRes, 1.56, 0.021, grid);
  auto off = on;
  for (auto& v : off.value) v = output_baseline(0.021);
  for (auto _ : state) {
    auto dn = extract_delta_n(on, off, kRes);
    benchmark::DoNotOptimize(dn.value);
  }
}
BENCHMARK(DeltaNExtraction);

void ReflectionFit(benchmark::State& state) {
  auto probe = synth_probe(kRes, default_detuning_grid(kRes.kappa_hz(), 10.0, 201),
                           0.004, 11);
  for (auto _ : state) {
    auto fit = fit_reflection(probe);
    benchmark::DoNotOptimize(fit.params.kappa_i_hz);
  }
}
BENCHMARK(ReflectionFit);

void LangevinSteps(benchmark::State& state) {
  TrajectoryConfig cfg;
  cfg.res = kRes;
  cfg.n_en = 1.56;
  cfg.n_in = 0.02;
  const double kappa = kRes.kappa_hz();
  cfg.dt_s = 0.01 / kappa;
  cfg.duration_s = static_cast<double>(state.range(0)) / kappa;
  cfg.seed = 3;
  cfg.keep_samples = false;
  for (auto _ : state) {
    auto tr = simulate_trajectory(cfg);
    benchmark::DoNotOptimize(tr.occupancy);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(cfg.duration_s / cfg.dt_s));
}
BENCHMARK(LangevinSteps)->Arg(200)->Arg(1000);

void WelchPsd(benchmark::State& state) {
  TrajectoryConfig cfg;
  cfg.res = kRes;
  cfg.n_en = 1.56;
  cfg.n_in = 0.02;
  cfg.dt_s = 0.01 / kRes.kappa_hz();
  cfg.duration_s = 500.0 / kRes.kappa_hz();
  cfg.seed = 5;
  auto tr = simulate_trajectory(cfg);
  for (auto _ : state) {
    auto psd = estimate_psd(tr.mode, tr.dt_s, 2048);
    benchmark::DoNotOptimize(psd.value.data());
  }
}
BENCHMARK(WelchPsd);

void FullPipeline(benchmark::State& state) {
  auto scn = headline_scenario();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto r = run_synthetic_experiment(scn, seed++);
    benchmark::DoNotOptimize(r.estimate.n_mode);
  }
}
BENCHMARK(FullPipeline);

}  // namespace

BENCHMARK_MAIN();
