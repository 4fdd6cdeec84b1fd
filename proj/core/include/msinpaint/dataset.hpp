// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "msinpaint/cube.hpp"
#include "msinpaint/guidance.hpp"
#include "msinpaint/preprocess.hpp"

// On-disk layout:
//   <dataset>/sample_*/s2.npy             raw DN [13, H, W]
//   <dataset>/sample_*/s2_historical.npy  raw DN [13, H, W]
//   <dataset>/sample_*/mask.npy           optional 0/1 [H, W]
//   <dataset>/sample_*/control.npy        optional edge map [1, H, W]
namespace msinpaint {

inline constexpr const char* kCurrentFile = "s2.npy";
inline constexpr const char* kHistoricalFile = "s2_historical.npy";
inline constexpr const char* kMaskFile = "mask.npy";
inline constexpr const char* kControlFile = "control.npy";

/// Sorted sample_* directories. Throws ConfigError if the dataset directory
/// is missing.
std::vector<std::filesystem::path> list_samples(const std::filesystem::path& dataset_dir);

struct LoadedSample {
  std::string id;
  std::optional<ScenePair> scene;  // empty when rejected as saturated
  std::optional<InpaintMask> mask;
  std::optional<EdgeMap> control;
};

/// Reads and normalizes one sample directory. A sample whose current or
/// historical pre-clip mean exceeds the saturation threshold comes back
/// without a scene.
LoadedSample load_sample(const std::filesystem::path& sample_dir,
                         double scale = kDefaultReflectanceScale);

/// Writes a scene pair as rounded digital numbers (cube * scale).
void write_sample(const std::filesystem::path& sample_dir, const ScenePair& scene,
                  const std::optional<InpaintMask>& mask = std::nullopt,
                  double scale = kDefaultReflectanceScale);

}  // namespace msinpaint
