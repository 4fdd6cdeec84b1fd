// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "msinpaint/backends.hpp"
#include "msinpaint/dataset.hpp"
#include "msinpaint/dip.hpp"
#include "msinpaint/masking.hpp"
#include "msinpaint/metrics.hpp"
#include "msinpaint/preprocess.hpp"
#include "msinpaint/skipnet.hpp"

namespace msinpaint {

enum class Method {
  sd_inpaint,       // stage one via the diffusion service, no control image
  edge_guided,      // stage one via the diffusion service with an edge map
  direct_dip,       // single-stage DIP from noise
  direct_dip_hist,  // single-stage DIP from the historical cube
  ideal_rgb,        // stage two with ground-truth RGB
  mock,             // stage one via mock_inpaint
};

Method parse_method(std::string_view s);
std::string_view to_string(Method m);
/// Methods whose first stage goes through an InpaintBackend.
bool uses_backend(Method m);

struct MaskSource {
  std::optional<std::filesystem::path> path;  // overrides per-sample mask.npy
  double coverage = 0.25;
  MaskKind kind = MaskKind::rect;
};

struct ExperimentConfig {
  std::filesystem::path dataset_dir;
  std::vector<Method> methods;
  MaskSource mask;
  std::optional<std::string> backend_endpoint;
  std::chrono::milliseconds backend_timeout{120000};
  /// Serve sd-inpaint / edge-guided with mock_inpaint when no endpoint is set.
  bool mock_substitution = false;
  double mock_blend = 1.0;
  InpaintParams inpaint_params;
  TrainSpec train_spec;
  SkipNetConfig skip_config;
  std::vector<ChannelScope> scopes = {ChannelScope::all13, ChannelScope::rgb3};
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  double reflectance_scale = kDefaultReflectanceScale;
  std::size_t workers = 1;
  bool write_artifacts = true;
  bool verbose = false;

  void validate() const;
};

/// JSON mirrors the field names above; nested objects for mask,
/// inpaint_params, train_spec and skip_config. Unknown keys are rejected.
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

struct SampleFailure {
  std::string sample_id;
  std::string method;
  std::string message;
};

struct RunResult {
  std::vector<EvalReport> reports;
  std::vector<SampleFailure> failures;
  std::vector<std::string> rejected;  // saturated samples, skipped
  std::size_t samples_evaluated = 0;

  /// 0 clean, 2 some sample/method failed, 3 no sample could be evaluated.
  int exit_code() const;
};

/// Per sample: load and normalize, pick the mask, run every method, composite,
/// evaluate in every scope. Backend and training errors are recorded per
/// (sample, method) and the run continues. Writes under output_dir when
/// write_artifacts is set:
///   config.json, reports.csv, summary.csv, rejected.csv,
///   samples/<id>/{mask,input,<method>}.npy and <method>.png previews.
RunResult run_pipeline(const ExperimentConfig& config);

struct SampleRun {
  InpaintMask mask = InpaintMask::empty(1, 1);
  std::vector<std::pair<std::string, MSICube>> outputs;  // method name, cube
  std::vector<EvalReport> reports;
  std::vector<SampleFailure> failures;
};

/// Every configured method on one accepted sample; nothing is written.
/// Mask selection errors throw, per-method errors land in failures.
SampleRun inpaint_sample(const ExperimentConfig& config, const LoadedSample& sample);

struct AggregateRow {
  std::string method;
  ChannelScope scope = ChannelScope::all13;
  double ssim_whole = 0.0;
  double ssim_mask = 0.0;
  double rmse_whole = 0.0;
  double rmse_mask = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_failed = 0;
};

/// Unweighted means per (method, scope), in first-appearance order.
std::vector<AggregateRow> aggregate(std::span<const EvalReport> reports,
                                    std::span<const SampleFailure> failures = {});

/// Shortest fixed-notation text that reads back as the same double; "nan"
/// for non-finite values.
std::string format_real(double v);
std::string reports_csv(std::span<const EvalReport> reports,
                        std::span<const SampleFailure> failures);
std::string aggregate_csv(std::span<const AggregateRow> rows);

struct ParsedReports {
  std::vector<EvalReport> reports;
  std::vector<SampleFailure> failures;
};
ParsedReports parse_reports_csv(std::string_view text);

/// Axis name -> values (as written in the grid, e.g. "7.5", "blank").
using SweepGrid = std::map<std::string, std::vector<std::string>>;

/// mask_fill_mode, text_guidance_scale, num_steps, edge_guidance_scale.
inline constexpr std::array<std::string_view, 4> kSweepAxes = {
    "mask_fill_mode", "text_guidance_scale", "num_steps", "edge_guidance_scale"};

/// The parameter-test grid: {blank, historical}, {0.0, 1.0, 7.5},
/// {20, 50, 100}, {0.1, 0.5, 1.0}.
SweepGrid table1_grid();

struct SweepRow {
  std::string parameter;
  std::string value;
  AggregateRow metrics;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<SampleFailure> failures;
  std::string csv() const;
};

/// One-at-a-time sweep: each axis value is run with every other parameter
/// at base.inpaint_params. Only backend methods are swept; metrics are the
/// stage-one RGB result (rgb3 scope). An empty grid gives a single "base" row
/// per method.
SweepReport sweep(const ExperimentConfig& base, const SweepGrid& grid);

}  // namespace msinpaint
