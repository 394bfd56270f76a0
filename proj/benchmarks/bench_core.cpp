#include <benchmark/benchmark.h>

#include <vector>

#include "kinctrl/config.hpp"
#include "kinctrl/control.hpp"
#include "kinctrl/denoise.hpp"
#include "kinctrl/domain.hpp"
#include "kinctrl/forward.hpp"
#include "kinctrl/objective.hpp"
#include "kinctrl/rng.hpp"
#include "kinctrl/sampling.hpp"

using namespace kinctrl;

namespace {

std::vector<Particle> random_particles(std::size_t n, const PhaseDomain& dom) {
  std::vector<Particle> parts(n);
  RngStream s(99, StreamPurpose::init_forward, 0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    parts[i].x = sample_uniform(0.0, dom.p_max, s);
    parts[i].v = sample_uniform(-dom.v_max, dom.v_max, s);
    parts[i].id = i;
  }
  return parts;
}

GridField random_field(int nx, int nv) {
  GridField f(nx, nv);
  RngStream s(17, StreamPurpose::init_forward, 1, 0);
  for (double& v : f.values) v = 10.0 * s.u01();
  return f;
}

void BM_Deposit(benchmark::State& state) {
  const SimConfig cfg;
  const GridSpec grid = cfg.grid();
  const auto parts = random_particles(100000, cfg.domain());
  const unsigned threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(deposit(parts, grid, 0, threads));
  }
  state.SetItemsProcessed(state.iterations() * parts.size());
}
BENCHMARK(BM_Deposit)->Arg(1)->Arg(4);

void BM_Denoise(benchmark::State& state) {
  const SimConfig cfg;
  const GridField q = random_field(cfg.n_x, cfg.n_v);
  for (auto _ : state) {
    benchmark::DoNotOptimize(denoise_field(q, cfg.c_s, cfg.grid().dv, 1));
  }
}
BENCHMARK(BM_Denoise);

void BM_ExtractControl(benchmark::State& state) {
  const SimConfig cfg;
  const GridField q = random_field(cfg.n_x, cfg.n_v);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_control(q, cfg.nu, cfg.grid().dv));
  }
}
BENCHMARK(BM_ExtractControl);

void BM_ThetaBarGrid(benchmark::State& state) {
  const SimConfig cfg;
  const unsigned threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        theta_bar_grid(cfg.objective(), cfg.orbit(), cfg.grid(), threads));
  }
}
BENCHMARK(BM_ThetaBarGrid)->Arg(1)->Arg(4);

void BM_ForwardStep(benchmark::State& state) {
  SimConfig cfg;
  cfg.n_t = 1;
  cfg.n_f = 10000;
  const unsigned threads = static_cast<unsigned>(state.range(0));
  const ParticleEnsemble init = init_forward_ensemble(
      cfg.initial_density(), cfg.n_f, cfg.domain(), cfg.seed, threads);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_forward(cfg, ControlField{}, init, threads));
  }
  state.SetItemsProcessed(state.iterations() * cfg.n_f);
}
BENCHMARK(BM_ForwardStep)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
