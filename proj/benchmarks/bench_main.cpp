#include <benchmark/benchmark.h>

#include "genlab/bounds.hpp"
#include "genlab/datagen.hpp"
#include "genlab/network.hpp"
#include "genlab/training.hpp"

namespace {

using namespace genlab;

void BM_GaussianDraws(benchmark::State& state) {
    Rng rng(7);
    double acc = 0.0;
    for (auto _ : state) {
        for (int i = 0; i < 1024; ++i) acc += rng.gaussian();
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_GaussianDraws);

void BM_SpectralNorm(benchmark::State& state) {
    Rng rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix M = sample_gaussian_matrix(n, n, 1.0, rng);
    for (auto _ : state) benchmark::DoNotOptimize(spectral_norm(M));
}
BENCHMARK(BM_SpectralNorm)->Arg(32)->Arg(128)->Arg(512);

void BM_TrainEpoch(benchmark::State& state) {
    Rng rng(7);
    LabeledDataset S = gen_gaussian_mixture(256, 20, 2, 2.0, 1.0, rng);
    TrainConfig cfg;
    cfg.batch_size = 32;
    cfg.max_epochs = 1;
    cfg.stop.kind = StopRuleKind::MaxEpochs;
    for (auto _ : state) {
        Mlp net = make_mlp({20, 64, 2});
        sgd_train(net, S, cfg);
        benchmark::DoNotOptimize(net.weights[0].data[0]);
    }
}
BENCHMARK(BM_TrainEpoch);

void BM_NormProfile(benchmark::State& state) {
    Rng rng(7);
    LabeledDataset S = gen_gaussian_mixture(64, 20, 2, 2.0, 1.0, rng);
    Mlp net = make_mlp_xavier({20, 40, 40, 2}, rng);
    for (auto _ : state) {
        TrainNorms norms = train_norm_profile(net, S);
        benchmark::DoNotOptimize(norms.B);
    }
}
BENCHMARK(BM_NormProfile);

}  // namespace

BENCHMARK_MAIN();
