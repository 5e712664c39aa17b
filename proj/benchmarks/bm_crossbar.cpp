#include <memory>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "ahnn/crossbar.hpp"
#include "ahnn/experiments.hpp"
#include "ahnn/learner.hpp"

namespace {

ahnn::ExperimentConfig bench_config() {
  ahnn::ExperimentConfig c;
  c.iris_path = std::string(AHNN_BENCH_DATA_DIR) + "/iris.csv";
  c.train.trace_epochs.clear();
  c.finalize();
  return c;
}

void BM_Forward(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  auto model = std::make_shared<ahnn::MosfetSynapse>();
  ahnn::Crossbar xbar(ahnn::CrossbarConfig::for_model(*model, m, 3), model);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> x(m);
  for (auto& v : x) v = d(rng);
  for (auto _ : state) benchmark::DoNotOptimize(xbar.forward(x));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>((m + 1) * 3));
}
BENCHMARK(BM_Forward)->Arg(16)->Arg(256)->Arg(1024);

void BM_TrainSample(benchmark::State& state) {
  const ahnn::ExperimentConfig c = bench_config();
  const ahnn::Dataset data = ahnn::load_dataset(c);
  auto model = ahnn::make_model(c);
  ahnn::Crossbar xbar(ahnn::make_crossbar_config(c, *model), model);
  ahnn::initialize_weights(xbar, c.train);
  ahnn::NoiseSource noise(c.noise);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ahnn::train_sample(xbar, data.train[i], c.neuron, c.train, noise));
    i = (i + 1) % data.train.size();
  }
}
BENCHMARK(BM_TrainSample);

void BM_FullRun(benchmark::State& state) {
  ahnn::ExperimentConfig c = bench_config();
  c.technology = static_cast<ahnn::Technology>(state.range(0));
  const ahnn::Dataset data = ahnn::load_dataset(c);
  for (auto _ : state) benchmark::DoNotOptimize(ahnn::train_system(c, data));
  state.SetLabel(std::string(ahnn::to_string(c.technology)));
}
BENCHMARK(BM_FullRun)
    ->Arg(static_cast<int>(ahnn::Technology::mosfet))
    ->Arg(static_cast<int>(ahnn::Technology::domain_wall))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
