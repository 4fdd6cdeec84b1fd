// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include <benchmark/benchmark.h>

#include "msinpaint/dip.hpp"
#include "msinpaint/layers.hpp"
#include "msinpaint/masking.hpp"
#include "msinpaint/metrics.hpp"
#include "msinpaint/random.hpp"
#include "msinpaint/skipnet.hpp"
#include "msinpaint/synthdata.hpp"

namespace {

using namespace msinpaint;

Tensor random_tensor(Shape shape, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t(std::move(shape));
  for (auto& v : t.data()) v = rng.uniform();
  return t;
}

void BM_Conv3x3Forward(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const nn::ConvGeometry g{16, 16, 3, 1};
  const Tensor input = random_tensor({16, side, side}, 1);
  const Tensor weight = random_tensor({16, 16, 3, 3}, 2);
  Buffer cols;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nn::conv2d_forward(g, input, weight.data(), {}, cols));
  }
}
BENCHMARK(BM_Conv3x3Forward)->Arg(32)->Arg(64);

void BM_Conv3x3Backward(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const nn::ConvGeometry g{16, 16, 3, 1};
  const Tensor input = random_tensor({16, side, side}, 1);
  const Tensor weight = random_tensor({16, 16, 3, 3}, 2);
  Buffer cols;
  const Tensor out = nn::conv2d_forward(g, input, weight.data(), {}, cols);
  const Tensor grad = random_tensor(out.shape(), 3);
  std::vector<double> gw(weight.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        nn::conv2d_backward(g, grad, cols, weight.data(), gw, {}, input.shape()));
  }
}
BENCHMARK(BM_Conv3x3Backward)->Arg(32)->Arg(64);

void BM_Ssim13Band(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const Tensor x = random_tensor({13, side, side}, 4);
  const Tensor y = random_tensor({13, side, side}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(ssim(x, y));
}
BENCHMARK(BM_Ssim13Band)->Arg(64)->Arg(256);

void BM_DeskTrainStep(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const ScenePair scene = generate_scene_pair(side, side, 7);
  const SkipNetConfig cfg = SkipNetConfig::desk(16, 13);
  const Tensor input = make_noise_input(16, side, side, 8);
  const LossMask lmask(Tensor({13, side, side}, 1.0));
  TrainSpec spec;
  spec.steps = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_dip(cfg, input, scene.current().values(), lmask, spec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.steps));
}
BENCHMARK(BM_DeskTrainStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
