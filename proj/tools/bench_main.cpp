// Serial-reference vs OpenMP comparison for the data-parallel kernels:
// batch objective evaluation (loss-augmented inference per sample) and
// batch prediction. Thread count comes from the policy; on a single-core
// host the parallel rows simply match the serial ones.
#include <benchmark/benchmark.h>

#include "ssvm/dataio.hpp"
#include "ssvm/objective.hpp"
#include "ssvm/rng.hpp"
#include "ssvm/training.hpp"

namespace {

using namespace ssvm;

struct Fixture {
  Dataset data;
  FactorModel model;
  ClassWeights weights;

  Fixture() {
    SynthConfig cfg;
    cfg.samples = 16;
    cfg.seed = 5;
    data = generate_synthetic(cfg);

    ModelArch arch;
    arch.labels = LabelSet(data.num_labels);
    arch.d_u = data.d_u;
    arch.d_i = data.d_i;
    arch.unary = {SideKind::neural, {32}, Activation::tanh};
    arch.inter = {SideKind::neural, {16}, Activation::tanh};
    model = init_model(arch, 7);
    Rng rng(21);
    for (double& p : model.unary_net->params) p = 0.4 * rng.gaussian();
    for (double& p : model.inter_net->params) p = 0.4 * rng.gaussian();
    weights = ClassWeights::balanced(data.samples, data.num_labels);
  }
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

void bench_objective(benchmark::State& state, const ExecPolicy& exec) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    ObjectiveReport rep = objective_value(f.data.samples, f.model, 1.0,
                                          f.weights, InferOptions{}, exec);
    benchmark::DoNotOptimize(rep.total);
  }
}

void bench_predict(benchmark::State& state, const ExecPolicy& exec) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    auto preds = predict(f.data.samples, f.model, InferOptions{}, exec);
    benchmark::DoNotOptimize(preds.data());
  }
}

void BM_objective_serial(benchmark::State& state) {
  bench_objective(state, ExecPolicy::serial());
}
void BM_objective_parallel(benchmark::State& state) {
  bench_objective(state, ExecPolicy::max_parallel());
}
void BM_predict_serial(benchmark::State& state) {
  bench_predict(state, ExecPolicy::serial());
}
void BM_predict_parallel(benchmark::State& state) {
  bench_predict(state, ExecPolicy::max_parallel());
}

BENCHMARK(BM_objective_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_objective_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predict_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predict_parallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
