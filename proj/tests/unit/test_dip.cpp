// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "msinpaint/dip.hpp"
#include "msinpaint/errors.hpp"
#include "test_support.hpp"

namespace msinpaint {
namespace {

SkipNetConfig tiny(bool norm) {
  SkipNetConfig c;
  c.input_channels = 3;
  c.scales = 2;
  c.down_channels = {4, 4};
  c.skip_channels = 2;
  c.out_channels = 2;
  c.use_norm = norm;
  return c;
}

LossMask random_lmask(Shape shape, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t(std::move(shape));
  for (auto& v : t.data()) v = rng.uniform() < 0.7 ? 1.0 : 0.0;
  t[0] = 1.0;
  return LossMask(t);
}

TEST(MaskedMse, MatchesDirectSumAndGradient) {
  const Tensor p = testing::random_tensor({2, 4, 4}, 1);
  const Tensor t = testing::random_tensor({2, 4, 4}, 2);
  const LossMask m = random_lmask({2, 4, 4}, 3);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += m.values()[i] * (p[i] - t[i]) * (p[i] - t[i]);
  }
  EXPECT_NEAR(masked_mse(p, t, m), sum / static_cast<double>(m.count()), 1e-15);
  const Tensor g = masked_mse_grad(p, t, m);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(g[i], 2.0 * m.values()[i] * (p[i] - t[i]) / static_cast<double>(m.count()), 1e-15);
  }
  EXPECT_THROW(LossMask(Tensor({2, 4, 4}, 0.0)), PreconditionError);
}

TEST(GradCheck, TinyConfigNormOnAndOff) {
  for (bool norm : {true, false}) {
    for (OutputHead head : {OutputHead::logistic, OutputHead::linear}) {
      SkipNetConfig c = tiny(norm);
      c.head = head;
      const Tensor input = make_noise_input(3, 8, 8, 1);
      const Tensor target = testing::random_tensor({2, 8, 8}, 2);
      const double err = grad_check(c, input, target, random_lmask({2, 8, 8}, 3), 1e-5, 200, 4);
      EXPECT_LT(err, 1e-4) << "norm=" << norm;
    }
  }
  EXPECT_THROW(grad_check(tiny(true), make_noise_input(3, 8, 8, 1), Tensor({2, 8, 8}),
                          LossMask(Tensor({2, 8, 8}, 1.0)), 0.0),
               PreconditionError);
}

TEST(GradCheck, NonSquareAndOddChannels) {
  SkipNetConfig c = tiny(true);
  c.input_channels = 5;
  c.down_channels = {3, 5};
  c.skip_channels = 1;
  c.out_channels = 3;
  const Tensor input = make_noise_input(5, 8, 12, 7);
  const Tensor target = testing::random_tensor({3, 8, 12}, 8);
  EXPECT_LT(grad_check(c, input, target, random_lmask({3, 8, 12}, 9), 1e-5, 200, 1), 1e-4);
}

TEST(NoiseInput, RangeAndDeterminism) {
  const Tensor a = make_noise_input(4, 8, 8, 5);
  for (double v : a.data()) {
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 0.1);
  }
  EXPECT_EQ(a, make_noise_input(4, 8, 8, 5));
}

TEST(TrainDip, LossDecreasesAndIsDeterministic) {
  const SkipNetConfig c = tiny(true);
  const Tensor input = make_noise_input(3, 16, 16, 1);
  const Tensor target = testing::random_tensor({2, 16, 16}, 2);
  const LossMask m = random_lmask({2, 16, 16}, 3);
  TrainSpec spec;
  spec.steps = 150;
  spec.seed = 11;
  const TrainResult a = train_dip(c, input, target, m, spec);
  ASSERT_EQ(a.loss_trace.size(), 150u);
  EXPECT_LT(masked_mse(a.output, target, m), 0.5 * a.loss_trace.front());
  const TrainResult b = train_dip(c, input, target, m, spec);
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(a.loss_trace, b.loss_trace);
}

TEST(TrainDip, MaskedTargetValuesAreIgnored) {
  const SkipNetConfig c = tiny(false);
  const Tensor input = make_noise_input(3, 8, 8, 1);
  Tensor target = testing::random_tensor({2, 8, 8}, 2);
  const LossMask m = random_lmask({2, 8, 8}, 3);
  TrainSpec spec;
  spec.steps = 20;
  const TrainResult a = train_dip(c, input, target, m, spec);
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (m.values()[i] == 0.0) target[i] = 1.0 - target[i];
  }
  EXPECT_EQ(train_dip(c, input, target, m, spec).output, a.output);
}

TEST(TrainDip, NonFiniteLossThrowsDivergence) {
  const SkipNetConfig c = tiny(true);
  Tensor target({2, 8, 8}, 0.5);
  target[0] = std::numeric_limits<double>::quiet_NaN();
  TrainSpec spec;
  spec.steps = 5;
  try {
    train_dip(c, make_noise_input(3, 8, 8, 1), target, LossMask(Tensor({2, 8, 8}, 1.0)), spec);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.step(), 0u);
  }
}

TEST(TrainSpec, Validation) {
  TrainSpec s;
  s.learning_rate = 0.0;
  EXPECT_THROW(s.validate(), PreconditionError);
  s = TrainSpec{};
  s.adam_beta1 = 1.0;
  EXPECT_THROW(s.validate(), PreconditionError);
  EXPECT_THROW(train_dip(tiny(true), Tensor({3, 8, 8}), Tensor({3, 8, 8}),
                         LossMask(Tensor({3, 8, 8}, 1.0)), TrainSpec{}),
               ShapeError);
}

}  // namespace
}  // namespace msinpaint
