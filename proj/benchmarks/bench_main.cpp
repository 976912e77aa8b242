#include <benchmark/benchmark.h>

#include "trfnet/dae.hpp"
#include "trfnet/nn.hpp"
#include "trfnet/receptive_field.hpp"
#include "trfnet/stats.hpp"
#include "trfnet/synthetic.hpp"
#include "trfnet/tree.hpp"

using namespace trfnet;

namespace {

BinaryDataset chain_bits(Eigen::Index vars, Eigen::Index samples) {
  return discretize(synthetic::markov_chain(vars, samples, 0.1, 1), DiscretizationPolicy::already_binary());
}

void BM_MiMatrix(benchmark::State& state) {
  const BinaryDataset d = chain_bits(state.range(0), 2000);
  for (auto _ : state) benchmark::DoNotOptimize(mi_matrix(d));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MiMatrix)->Arg(100)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MaxSpanningTree(benchmark::State& state) {
  const MiMatrix m = mi_matrix(chain_bits(state.range(0), 500));
  for (auto _ : state) benchmark::DoNotOptimize(max_spanning_tree(m));
}
BENCHMARK(BM_MaxSpanningTree)->Arg(100)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

MaskedLayer trf_layer(Eigen::Index vars) {
  const ChowLiuTree t = chow_liu(chain_bits(vars, 500));
  Rng rng(2);
  return make_masked_layer(build_masks(t, 3, 3, 0.1, 3).second.a, Activation::sigmoid, rng);
}

void BM_MaskedForward(benchmark::State& state) {
  const MaskedLayer l = trf_layer(state.range(0));
  const Matrix x = Matrix::Random(128, state.range(0)).cwiseAbs();
  for (auto _ : state) benchmark::DoNotOptimize(masked_forward(l, x));
}
BENCHMARK(BM_MaskedForward)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_DaeStep(benchmark::State& state) {
  MaskedLayer l = trf_layer(state.range(0));
  const Matrix x = Matrix::Random(128, state.range(0)).cwiseAbs();
  const Matrix noisy = x * 0.8;
  Adam adam;
  for (auto _ : state) {
    const DaeGradients g = dae_gradients(l, x, noisy, LossFamily::bernoulli);
    const ParamRef params[] = {{as_span(l.weights), as_span(g.weights), as_span(l.mask)},
                               {as_span(l.bias_hidden), as_span(g.bias_hidden)},
                               {as_span(l.bias_visible), as_span(g.bias_visible)}};
    adam.step(params);
  }
}
BENCHMARK(BM_DaeStep)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
