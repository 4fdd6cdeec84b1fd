// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "msinpaint/errors.hpp"

namespace msinpaint {

namespace fs = std::filesystem;

std::vector<fs::path> list_samples(const fs::path& dataset_dir) {
  if (!fs::is_directory(dataset_dir)) {
    throw ConfigError("dataset directory '" + dataset_dir.string() + "' does not exist");
  }
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dataset_dir)) {
    if (entry.is_directory() && entry.path().filename().string().starts_with("sample_")) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

LoadedSample load_sample(const fs::path& sample_dir, double scale) {
  LoadedSample s;
  s.id = sample_dir.filename().string();
  const RawCube current(load_tensor(sample_dir / kCurrentFile));
  const RawCube historical(load_tensor(sample_dir / kHistoricalFile));
  if (saturation_check(scale_raw(current, scale)) == SaturationVerdict::reject ||
      saturation_check(scale_raw(historical, scale)) == SaturationVerdict::reject) {
    return s;
  }
  s.scene.emplace(normalize_raw(current, scale), normalize_raw(historical, scale));
  if (fs::exists(sample_dir / kMaskFile)) {
    s.mask = InpaintMask::from_tensor(load_tensor(sample_dir / kMaskFile));
    require_same_size(s.scene->current(), *s.mask);
  }
  if (fs::exists(sample_dir / kControlFile)) {
    s.control.emplace(load_tensor(sample_dir / kControlFile));
    if (s.control->height() != s.scene->current().height() ||
        s.control->width() != s.scene->current().width()) {
      throw ShapeError("control map size differs from sample " + s.id);
    }
  }
  return s;
}

void write_sample(const fs::path& sample_dir, const ScenePair& scene,
                  const std::optional<InpaintMask>& mask, double scale) {
  fs::create_directories(sample_dir);
  auto to_dn = [scale](const MSICube& cube) {
    Tensor t = cube.values();
    for (double& v : t.data()) v = std::round(v * scale);
    return t;
  };
  save_tensor(to_dn(scene.current()), sample_dir / kCurrentFile);
  save_tensor(to_dn(scene.historical()), sample_dir / kHistoricalFile);
  if (mask) save_tensor(mask->to_tensor(), sample_dir / kMaskFile);
}

}  // namespace msinpaint
