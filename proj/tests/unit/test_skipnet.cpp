// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include <cmath>

#include <gtest/gtest.h>

#include "msinpaint/errors.hpp"
#include "msinpaint/skipnet.hpp"
#include "test_support.hpp"

namespace msinpaint {
namespace {

// Independent tally of the documented layout.
std::size_t expected_parameters(const SkipNetConfig& c) {
  auto unit = [&](std::size_t in, std::size_t out, std::size_t k) {
    return in * out * k * k + (c.use_norm ? 2 * out : out);
  };
  const std::size_t s = c.scales;
  std::size_t n = 0;
  std::size_t in = c.input_channels;
  for (std::size_t i = 0; i < s; ++i) {
    n += unit(in, c.skip_channels, 1);
    n += unit(in, c.down_channels[i], 3);
    n += unit(c.down_channels[i], c.down_channels[i], 3);
    in = c.down_channels[i];
  }
  for (std::size_t j = 0; j < s; ++j) {
    const std::size_t below = j + 1 == s ? c.down_channels[s - 1] : c.down_channels[j + 1];
    n += unit(below + c.skip_channels, c.down_channels[j], 3);
    n += unit(c.down_channels[j], c.down_channels[j], 3);
  }
  const std::size_t head_in = s == 0 ? c.input_channels : c.down_channels[0];
  n += head_in * c.out_channels + c.out_channels;
  return n;
}

TEST(SkipNet, ParameterCountMatchesLayout) {
  for (bool norm : {true, false}) {
    SkipNetConfig c;
    c.use_norm = norm;
    EXPECT_EQ(init_network(c, 0).parameter_count(), expected_parameters(c));
    SkipNetConfig d = SkipNetConfig::desk(13, 13);
    d.use_norm = norm;
    EXPECT_EQ(init_network(d, 0).parameter_count(), expected_parameters(d));
    SkipNetConfig t;
    t.input_channels = 3;
    t.scales = 2;
    t.down_channels = {4, 6};
    t.skip_channels = 2;
    t.out_channels = 5;
    t.use_norm = norm;
    EXPECT_EQ(init_network(t, 0).parameter_count(), expected_parameters(t));
  }
}

TEST(SkipNet, BlockShapesAndInitRanges) {
  const SkipNetConfig c = SkipNetConfig::desk(16, 13);
  const NetworkState s = init_network(c, 3);
  EXPECT_EQ(s.block("enc0.down.weight").shape, (Shape{16, 16, 3, 3}));
  EXPECT_EQ(s.block("enc0.skip.weight").shape, (Shape{4, 16, 1, 1}));
  EXPECT_EQ(s.block("dec0.conv1.weight").shape, (Shape{16, 20, 3, 3}));
  EXPECT_EQ(s.block("head.weight").shape, (Shape{13, 16, 1, 1}));
  EXPECT_EQ(s.block("head.bias").shape, (Shape{13}));
  for (double v : s.block("enc1.conv.norm_scale").values) EXPECT_EQ(v, 1.0);
  EXPECT_THROW(s.block("enc0.down.bias"), Error);
  const double bound = std::sqrt(1.0 / (16.0 * 9.0));
  for (double v : s.block("enc0.down.weight").values) {
    ASSERT_LE(std::abs(v), bound);
  }
}

TEST(SkipNet, InitIsSeeded) {
  const SkipNetConfig c = SkipNetConfig::desk(4, 3);
  EXPECT_EQ(init_network(c, 1), init_network(c, 1));
  EXPECT_FALSE(init_network(c, 1) == init_network(c, 2));
}

TEST(SkipNet, ForwardShapeAndLogisticRange) {
  const SkipNetConfig c = SkipNetConfig::desk(5, 13);
  const NetworkState s = init_network(c, 0);
  const Tensor out = forward(s, testing::random_tensor({5, 16, 24}, 1));
  ASSERT_EQ(out.shape(), (Shape{13, 16, 24}));
  for (double v : out.data()) {
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
  EXPECT_EQ(out, forward(s, testing::random_tensor({5, 16, 24}, 1)));
}

TEST(SkipNet, RejectsBadInputs) {
  const SkipNetConfig c = SkipNetConfig::desk(5, 13);
  const NetworkState s = init_network(c, 0);
  EXPECT_THROW(forward(s, Tensor({5, 12, 16})), Error);
  EXPECT_THROW(forward(s, Tensor({4, 16, 16})), Error);
  SkipNetConfig bad = c;
  bad.down_channels = {8, 8};
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(SkipNet, ZeroScalesIsAHeadOnly) {
  SkipNetConfig c;
  c.input_channels = 2;
  c.scales = 0;
  c.down_channels = {};
  c.out_channels = 2;
  c.head = OutputHead::linear;
  NetworkState s = init_network(c, 0);
  EXPECT_EQ(s.parameter_count(), 6u);
  auto& w = s.blocks()[0].values;
  auto& b = s.blocks()[1].values;
  w = {1, 0, 0, 1};
  b = {0, 0};
  const Tensor x = testing::random_tensor({2, 3, 5}, 4);
  EXPECT_EQ(forward(s, x), x);
}

}  // namespace
}  // namespace msinpaint
