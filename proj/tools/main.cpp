// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors
//
// msinpaint command line: dataset synthesis, masks, single-sample inpainting,
// experiment runs, parameter sweeps, reports, panels and gradient checks.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "msinpaint/dataset.hpp"
#include "msinpaint/dip.hpp"
#include "msinpaint/errors.hpp"
#include "msinpaint/experiment.hpp"
#include "msinpaint/masking.hpp"
#include "msinpaint/panel.hpp"
#include "msinpaint/random.hpp"
#include "msinpaint/synthdata.hpp"
#include "msinpaint/tensor.hpp"

namespace fs = std::filesystem;
using namespace msinpaint;

namespace {

enum Exit { kOk = 0, kUsage = 1, kPartial = 2, kTotal = 3 };

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  write_text(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

/// --config plus per-field overrides shared by run, sweep and inpaint.
struct ConfigOptions {
  std::string config_path;
  std::string dataset;
  std::vector<std::string> methods;
  std::string endpoint;
  std::optional<std::size_t> steps;
  std::optional<double> lr;
  std::optional<double> coverage;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string mask_kind;
  std::string mask_path;
  std::optional<std::size_t> workers;
  bool mock_substitution = false;
  bool desk = false;
  bool verbose = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
    app->add_option("--dataset", dataset, "Dataset directory (overrides dataset_dir)");
    app->add_option("--method", methods, "Method(s); replaces the configured list");
    app->add_option("--backend-endpoint", endpoint, "Diffusion service URL");
    app->add_option("--steps", steps, "DIP training steps");
    app->add_option("--lr", lr, "DIP learning rate");
    app->add_option("--coverage", coverage, "Generated mask coverage in [0, 1]");
    app->add_option("--seed", seed, "Run seed");
    app->add_option("--out", out, "Output directory");
    app->add_option("--mask-kind", mask_kind, "rect or blob");
    app->add_option("--mask", mask_path, "Mask NPY used for every sample");
    app->add_option("--workers", workers, "Sample worker pool width");
    app->add_flag("--mock-substitution", mock_substitution,
                  "Serve sd-inpaint / edge-guided with the mock backend when no endpoint is set");
    app->add_flag("--desk", desk, "Reduced network widths (fast CPU runs)");
    app->add_flag("-v,--verbose", verbose, "Per-sample progress on stderr");
  }

  ExperimentConfig build() const {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (!dataset.empty()) c.dataset_dir = dataset;
    if (!methods.empty()) {
      c.methods.clear();
      for (const auto& m : methods) c.methods.push_back(parse_method(m));
    }
    if (!endpoint.empty()) c.backend_endpoint = endpoint;
    if (steps) c.train_spec.steps = *steps;
    if (lr) c.train_spec.learning_rate = *lr;
    if (coverage) c.mask.coverage = *coverage;
    if (seed) c.seed = *seed;
    if (!out.empty()) c.output_dir = out;
    if (!mask_kind.empty()) c.mask.kind = parse_mask_kind(mask_kind);
    if (!mask_path.empty()) c.mask.path = mask_path;
    if (workers) c.workers = *workers;
    if (mock_substitution) c.mock_substitution = true;
    if (desk) {
      c.skip_config = SkipNetConfig::desk(c.skip_config.input_channels, c.skip_config.out_channels);
    }
    if (verbose) c.verbose = true;
    return c;
  }
};

// --------------------------------------------------------------------------

struct SynthOptions {
  std::string out;
  std::size_t count = 5;
  std::size_t height = 64;
  std::size_t width = 64;
  std::uint64_t seed = 0;
  std::optional<double> coverage;
  std::string kind = "rect";
};

int cmd_synth(const SynthOptions& o) {
  fs::create_directories(o.out);
  const MaskKind kind = parse_mask_kind(o.kind);
  for (std::size_t i = 0; i < o.count; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "sample_%03zu", i);
    const std::uint64_t seed = derive_seed(o.seed, id);
    const ScenePair scene = generate_scene_pair(o.height, o.width, seed);
    std::optional<InpaintMask> mask;
    if (o.coverage) {
      mask = generate_mask(o.height, o.width, *o.coverage, kind, derive_seed(seed, "mask"));
    }
    write_sample(fs::path(o.out) / id, scene, mask);
  }
  std::cout << "wrote " << o.count << " samples to " << o.out << "\n";
  return kOk;
}

struct MaskOptions {
  std::size_t height = 64;
  std::size_t width = 64;
  double coverage = 0.25;
  std::string kind = "rect";
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_mask(const MaskOptions& o) {
  const InpaintMask mask =
      generate_mask(o.height, o.width, o.coverage, parse_mask_kind(o.kind), o.seed);
  const fs::path out(o.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_tensor(mask.to_tensor(), out);
  std::cout << "missing " << mask.count() << " of " << o.height * o.width << " pixels\n";
  return kOk;
}

int cmd_inpaint(const ConfigOptions& opts, const std::string& sample_dir) {
  ExperimentConfig c = opts.build();
  c.write_artifacts = false;
  c.validate();
  if (c.output_dir.empty()) throw ConfigError("--out is required");
  const LoadedSample sample = load_sample(sample_dir, c.reflectance_scale);
  if (!sample.scene) {
    std::cerr << sample.id << " rejected as saturated\n";
    return kTotal;
  }
  const SampleRun run = inpaint_sample(c, sample);
  fs::create_directories(c.output_dir);
  save_tensor(run.mask.to_tensor(), c.output_dir / "mask.npy");
  for (const auto& [name, cube] : run.outputs) {
    save_tensor(cube.values(), c.output_dir / (name + ".npy"));
    write_bytes(c.output_dir / (name + ".png"), render_preview(cube));
  }
  const std::string csv = reports_csv(run.reports, run.failures);
  write_text(c.output_dir / "reports.csv", csv);
  std::cout << csv;
  if (run.outputs.empty()) return kTotal;
  return run.failures.empty() ? kOk : kPartial;
}

int cmd_run(const ConfigOptions& opts) {
  const ExperimentConfig c = opts.build();
  const RunResult result = run_pipeline(c);
  std::cout << aggregate_csv(aggregate(result.reports, result.failures));
  for (const auto& f : result.failures) {
    std::cerr << "failed: " << f.sample_id << " " << f.method << ": " << f.message << "\n";
  }
  if (!result.rejected.empty()) {
    std::cerr << result.rejected.size() << " sample(s) rejected as saturated\n";
  }
  return result.exit_code();
}

int cmd_sweep(const ConfigOptions& opts, const std::string& grid_path, bool table1) {
  const ExperimentConfig c = opts.build();
  SweepGrid grid;
  if (table1) {
    grid = table1_grid();
  } else if (!grid_path.empty()) {
    const auto j = nlohmann::json::parse(read_text(grid_path), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError("grid is not a JSON object");
    for (const auto& [axis, values] : j.items()) {
      if (!values.is_array()) throw ConfigError("grid axis '" + axis + "' is not a list");
      for (const auto& v : values) {
        grid[axis].push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    }
  }
  const SweepReport report = sweep(c, grid);
  const std::string csv = report.csv();
  if (!c.output_dir.empty()) write_text(c.output_dir / "sweep.csv", csv);
  std::cout << csv;
  for (const auto& f : report.failures) {
    std::cerr << "failed: " << f.sample_id << " " << f.method << ": " << f.message << "\n";
  }
  std::size_t ok = 0;
  for (const auto& r : report.rows) ok += r.metrics.n_samples;
  if (ok == 0) return kTotal;
  return report.failures.empty() ? kOk : kPartial;
}

int cmd_report(const std::string& reports_path, const std::string& out) {
  const ParsedReports parsed = parse_reports_csv(read_text(reports_path));
  const std::string csv = aggregate_csv(aggregate(parsed.reports, parsed.failures));
  if (!out.empty()) write_text(out, csv);
  std::cout << csv;
  return kOk;
}

struct PanelOptions {
  std::string run_dir;
  std::string dataset;
  std::size_t samples = 4;
  std::vector<std::string> methods;
  double gain = kPanelGain;
  std::string out;
};

int cmd_panel(const PanelOptions& o) {
  const fs::path run(o.run_dir);
  const ExperimentConfig c = load_config(run / "config.json");
  const fs::path dataset = o.dataset.empty() ? c.dataset_dir : fs::path(o.dataset);
  std::vector<std::string> methods = o.methods;
  if (methods.empty()) {
    for (Method m : c.methods) methods.emplace_back(to_string(m));
  }
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(run / "samples")) {
    if (e.is_directory()) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());

  std::vector<PanelColumn> columns;
  for (const auto& dir : dirs) {
    if (columns.size() == o.samples) break;
    const std::string id = dir.filename().string();
    bool complete = fs::exists(dir / "input.npy");
    for (const auto& m : methods) complete = complete && fs::exists(dir / (m + ".npy"));
    if (!complete) continue;
    const LoadedSample s = load_sample(dataset / id, c.reflectance_scale);
    if (!s.scene) continue;
    PanelColumn col{s.scene->current(), s.scene->historical(),
                    MSICube(load_tensor(dir / "input.npy")), {}};
    for (const auto& m : methods) col.outputs.emplace_back(load_tensor(dir / (m + ".npy")));
    columns.push_back(std::move(col));
  }
  if (columns.empty()) throw ConfigError("no sample in " + o.run_dir + " has every requested output");
  const fs::path out = o.out.empty() ? run / "panel.png" : fs::path(o.out);
  write_bytes(out, render_panel(columns, o.gain));
  std::cout << "panel: " << columns.size() << " samples x " << methods.size() + 3
            << " rows -> " << out.string() << "\n";
  return kOk;
}

struct GradcheckOptions {
  std::size_t size = 8;
  double eps = 1e-5;
  std::size_t probes = 50;
  std::uint64_t seed = 0;
  std::string norm = "both";
  double tolerance = 1e-4;
};

int cmd_gradcheck(const GradcheckOptions& o) {
  std::vector<bool> norms;
  if (o.norm == "on" || o.norm == "both") norms.push_back(true);
  if (o.norm == "off" || o.norm == "both") norms.push_back(false);
  if (norms.empty()) throw ConfigError("--norm must be on, off or both");
  bool ok = true;
  for (bool norm : norms) {
    SkipNetConfig cfg;
    cfg.input_channels = 3;
    cfg.scales = 2;
    cfg.down_channels = {4, 4};
    cfg.skip_channels = 2;
    cfg.out_channels = 2;
    cfg.use_norm = norm;
    const Tensor input = make_noise_input(3, o.size, o.size, derive_seed(o.seed, "input"));
    Tensor target({2, o.size, o.size});
    Rng rng(derive_seed(o.seed, "target"));
    for (auto& v : target.data()) v = rng.uniform();
    Tensor keep({2, o.size, o.size});
    for (auto& v : keep.data()) v = rng.uniform() < 0.75 ? 1.0 : 0.0;
    keep[0] = 1.0;
    const double err = grad_check(cfg, input, target, LossMask(keep), o.eps, o.probes, o.seed);
    const bool pass = err < o.tolerance;
    ok = ok && pass;
    std::cout << "norm=" << (norm ? "on" : "off") << " max_rel_err=" << err
              << (pass ? " ok" : " FAIL") << "\n";
  }
  return ok ? kOk : kPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage multi-spectral inpainting toolkit"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset");
  synth_cmd->add_option("--out", synth.out, "Dataset directory")->required();
  synth_cmd->add_option("--count", synth.count, "Number of samples");
  synth_cmd->add_option("--height", synth.height, "Scene height");
  synth_cmd->add_option("--width", synth.width, "Scene width");
  synth_cmd->add_option("--seed", synth.seed, "Dataset seed");
  synth_cmd->add_option("--coverage", synth.coverage, "Also write mask.npy at this coverage");
  synth_cmd->add_option("--mask-kind", synth.kind, "rect or blob");

  MaskOptions mask;
  auto* mask_cmd = app.add_subcommand("mask", "Generate a mask NPY");
  mask_cmd->add_option("--height", mask.height, "Mask height");
  mask_cmd->add_option("--width", mask.width, "Mask width");
  mask_cmd->add_option("--coverage", mask.coverage, "Missing fraction in [0, 1]");
  mask_cmd->add_option("--kind", mask.kind, "rect or blob");
  mask_cmd->add_option("--seed", mask.seed, "Mask seed");
  mask_cmd->add_option("--out", mask.out, "Output NPY")->required();

  ConfigOptions inpaint_opts;
  std::string sample_dir;
  auto* inpaint_cmd = app.add_subcommand("inpaint", "Inpaint a single sample directory");
  inpaint_opts.attach(inpaint_cmd);
  inpaint_cmd->add_option("--sample", sample_dir, "Sample directory")
      ->required()
      ->check(CLI::ExistingDirectory);

  ConfigOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment over a dataset");
  run_opts.attach(run_cmd);

  ConfigOptions sweep_opts;
  std::string grid_path;
  bool table1 = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "One-at-a-time stage-one parameter sweep");
  sweep_opts.attach(sweep_cmd);
  auto* grid_opt = sweep_cmd->add_option("--grid", grid_path, "Grid JSON {axis: [values]}")
                       ->check(CLI::ExistingFile);
  sweep_cmd->add_flag("--table1", table1, "Use the four-axis parameter-test grid")
      ->excludes(grid_opt);

  std::string reports_path, report_out;
  auto* report_cmd = app.add_subcommand("report", "Aggregate a reports.csv");
  report_cmd->add_option("--reports", reports_path, "reports.csv from a run")
      ->required()
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--out", report_out, "Write the summary CSV here");

  PanelOptions panel;
  auto* panel_cmd = app.add_subcommand("panel", "Render a comparison panel from a run");
  panel_cmd->add_option("--run", panel.run_dir, "Run output directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  panel_cmd->add_option("--dataset", panel.dataset, "Dataset (default: from config.json)");
  panel_cmd->add_option("--samples", panel.samples, "Columns");
  panel_cmd->add_option("--method", panel.methods, "Rows (default: run methods)");
  panel_cmd->add_option("--gain", panel.gain, "Display gain");
  panel_cmd->add_option("--out", panel.out, "PNG path (default: <run>/panel.png)");

  GradcheckOptions gc;
  auto* gc_cmd = app.add_subcommand("gradcheck", "Backprop vs central differences");
  gc_cmd->add_option("--size", gc.size, "Input side (multiple of 4)");
  gc_cmd->add_option("--eps", gc.eps, "Finite-difference step");
  gc_cmd->add_option("--probes", gc.probes, "Weights probed per config");
  gc_cmd->add_option("--seed", gc.seed, "Seed");
  gc_cmd->add_option("--norm", gc.norm, "on, off or both");
  gc_cmd->add_option("--tolerance", gc.tolerance, "Pass threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*synth_cmd) return cmd_synth(synth);
    if (*mask_cmd) return cmd_mask(mask);
    if (*inpaint_cmd) return cmd_inpaint(inpaint_opts, sample_dir);
    if (*run_cmd) return cmd_run(run_opts);
    if (*sweep_cmd) return cmd_sweep(sweep_opts, grid_path, table1);
    if (*report_cmd) return cmd_report(reports_path, report_out);
    if (*panel_cmd) return cmd_panel(panel);
    if (*gc_cmd) return cmd_gradcheck(gc);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTotal;
  }
  return kUsage;
}
