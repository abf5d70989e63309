// Microbenchmarks for the hot paths: differentiation, optimizer steps,
// batch assembly, and the spectral probe, all on the benchmark's standard
// 784-100-100-100-10 network at batch 64.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <vector>

#include "plastic/dataset.hpp"
#include "plastic/idx.hpp"
#include "plastic/mlp.hpp"
#include "plastic/objective.hpp"
#include "plastic/optimizers.hpp"
#include "plastic/probes.hpp"
#include "plastic/rng.hpp"
#include "plastic/synth_digits.hpp"
#include "plastic/tasks.hpp"

namespace {

struct NetFixture {
  std::vector<int> sizes{784, 100, 100, 100, 10};
  plastic::ParamSet params;
  plastic::LabeledBatch batch;
  plastic::MlpGraph graph;
  plastic::MlpBatchObjective obj;

  NetFixture() : graph(sizes), obj(make(), batch) {}

  const plastic::MlpGraph& make() {
    plastic::RngStream init(1, "bench_init", 0);
    params = plastic::init_mlp(init, sizes);
    batch.inputs.resize(64, 784);
    plastic::RngStream data(1, "bench_data", 0);
    for (double& x : batch.inputs.data) x = data.uniform_real();
    batch.labels.resize(64);
    for (int i = 0; i < 64; ++i) batch.labels[static_cast<std::size_t>(i)] = i % 10;
    return graph;
  }
};

NetFixture& net() {
  static NetFixture f;
  return f;
}

void BM_LossValue(benchmark::State& state) {
  NetFixture& f = net();
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.obj.value(f.params.weights_and_biases));
  }
}
BENCHMARK(BM_LossValue)->Unit(benchmark::kMicrosecond);

void BM_Gradient(benchmark::State& state) {
  NetFixture& f = net();
  plastic::FlatVector g;
  for (auto _ : state) {
    f.obj.gradient(f.params.weights_and_biases, g);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_Gradient)->Unit(benchmark::kMicrosecond);

void BM_Hvp(benchmark::State& state) {
  NetFixture& f = net();
  plastic::FlatVector v(f.params.weights_and_biases.size(), 1e-3);
  plastic::FlatVector hv;
  for (auto _ : state) {
    f.obj.hvp(f.params.weights_and_biases, v, hv);
    benchmark::DoNotOptimize(hv.data());
  }
}
BENCHMARK(BM_Hvp)->Unit(benchmark::kMicrosecond);

void bench_step(benchmark::State& state, plastic::OptimizerKind kind,
                plastic::GnpMode mode) {
  NetFixture& f = net();
  plastic::OptimizerConfig cfg;
  cfg.kind = kind;
  cfg.alpha = 1e-4;  // small so iterates stay in a sane region while timing
  cfg.lambda = 0.1;
  cfg.gnp_mode = mode;
  plastic::FlatVector w = f.params.weights_and_biases;
  for (auto _ : state) {
    switch (kind) {
      case plastic::OptimizerKind::SGD:
        plastic::sgd_step(f.obj, w, cfg);
        break;
      case plastic::OptimizerKind::SAM:
        plastic::sam_step(f.obj, w, cfg);
        break;
      case plastic::OptimizerKind::GNP:
        plastic::gnp_step(f.obj, w, cfg);
        break;
    }
    benchmark::DoNotOptimize(w.data());
  }
}

void BM_SgdStep(benchmark::State& s) {
  bench_step(s, plastic::OptimizerKind::SGD, plastic::GnpMode::Exact);
}
void BM_SamStep(benchmark::State& s) {
  bench_step(s, plastic::OptimizerKind::SAM, plastic::GnpMode::Exact);
}
void BM_GnpStepExact(benchmark::State& s) {
  bench_step(s, plastic::OptimizerKind::GNP, plastic::GnpMode::Exact);
}
void BM_GnpStepFd(benchmark::State& s) {
  bench_step(s, plastic::OptimizerKind::GNP, plastic::GnpMode::FiniteDifference);
}
BENCHMARK(BM_SgdStep)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SamStep)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GnpStepExact)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GnpStepFd)->Unit(benchmark::kMicrosecond);

void BM_GatherExamples(benchmark::State& state) {
  const auto dir = std::filesystem::temp_directory_path() / "plastic-bench-data";
  plastic::SynthDataConfig cfg;
  cfg.train_count = 2000;
  cfg.test_count = 400;
  plastic::write_synthetic_mnist(dir, cfg);
  auto [train, test] = plastic::load_mnist_idx(dir);
  const plastic::Task task = plastic::permute_task(train, test, 7, 0);
  std::vector<int> rows(64);
  for (int i = 0; i < 64; ++i) rows[static_cast<std::size_t>(i)] = i * 31 % 2000;
  plastic::LabeledBatch batch;
  for (auto _ : state) {
    plastic::gather_examples(task, plastic::Split::Train, rows, batch);
    benchmark::DoNotOptimize(batch.inputs.data.data());
  }
}
BENCHMARK(BM_GatherExamples)->Unit(benchmark::kMicrosecond);

void BM_TopEigenvalue(benchmark::State& state) {
  NetFixture& f = net();
  for (auto _ : state) {
    plastic::RngStream rng(3, "bench_eig", 0);
    const auto rep = plastic::max_hessian_eigenvalue(
        f.obj, f.params.weights_and_biases, plastic::kDefaultEigTol,
        plastic::kDefaultEigMaxIter, rng);
    benchmark::DoNotOptimize(rep.lambda_max);
  }
}
BENCHMARK(BM_TopEigenvalue)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
