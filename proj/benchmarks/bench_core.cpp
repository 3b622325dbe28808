#include <benchmark/benchmark.h>

#include "ddmpc/experiment/experiment.hpp"
#include "ddmpc/mpc/controller.hpp"
#include "ddmpc/train/init.hpp"
#include "ddmpc/train/objective.hpp"
#include "ddmpc/train/pca.hpp"

using namespace ddmpc;

namespace {

train::Dataset synthetic_dataset(int frames, num::Index obs_dim, num::Index control_dim,
                                 std::uint64_t seed) {
  num::Rng rng(seed);
  train::Trajectory t;
  t.observations.resize(obs_dim, frames);
  t.controls.resize(control_dim, frames - 1);
  for (num::Index c = 0; c < t.observations.cols(); ++c) {
    t.observations.col(c) = rng.uniform_vec(obs_dim, -1.0, 1.0);
  }
  for (num::Index c = 0; c < t.controls.cols(); ++c) {
    t.controls.col(c) = rng.uniform_vec(control_dim, -1.0, 1.0);
  }
  train::Dataset d;
  d.trajectories.push_back(std::move(t));
  return d;
}

model::DdmParams bench_model(const train::Dataset& data) {
  num::Rng rng(7);
  return train::pca_init({50, 25, 12, 6, 2}, {6, 4, 2}, 2, 1,
                         data.trajectories.front().observations, rng);
}

void BM_JointCostGradient(benchmark::State& state) {
  const auto frames = static_cast<int>(state.range(0));
  const auto data = synthetic_dataset(frames, 50, 1, 3);
  const auto params = bench_model(data);
  train::JointObjective obj(params, data);
  const num::Vec x = obj.initial_flat();
  num::Vec g;
  for (auto _ : state) {
    benchmark::DoNotOptimize(obj.evaluate(x, g));
  }
  state.SetItemsProcessed(state.iterations() * frames);
}
BENCHMARK(BM_JointCostGradient)->Arg(100)->Arg(400)->Arg(1600);

void BM_PlannerStep(benchmark::State& state) {
  const auto data = synthetic_dataset(120, 50, 1, 3);
  const auto params = bench_model(data);
  mpc::MpcConfig cfg;
  model::HistoryState hist;
  hist.features.assign(2, num::Vec::Zero(2));
  hist.controls.assign(1, num::Vec::Zero(1));
  const num::Vec z_ref = num::Vec::Constant(2, 0.5);
  num::Rng rng(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpc::plan(params, hist, z_ref, cfg, nullptr, &rng));
  }
}
BENCHMARK(BM_PlannerStep);

void BM_RenderPendulum(benchmark::State& state) {
  const sim::PendulumConfig cfg;
  double phi = 0.0;
  for (auto _ : state) {
    phi += 0.01;
    benchmark::DoNotOptimize(sim::render_pendulum({sim::wrap_angle(phi), 0.0}, cfg));
  }
}
BENCHMARK(BM_RenderPendulum);

void BM_PcaFitFrames(benchmark::State& state) {
  const auto frames = static_cast<int>(state.range(0));
  num::Rng rng(5);
  num::Mat data(2601, frames);
  for (num::Index c = 0; c < data.cols(); ++c) {
    data.col(c) = rng.uniform_vec(2601, 0.0, 1.0);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(train::pca_fit(data, 50));
  }
}
BENCHMARK(BM_PcaFitFrames)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
