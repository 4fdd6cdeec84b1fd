// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "msinpaint/dataset.hpp"
#include "msinpaint/errors.hpp"
#include "msinpaint/guidance.hpp"
#include "msinpaint/panel.hpp"
#include "msinpaint/random.hpp"
#include "msinpaint/rgb2msi.hpp"

namespace msinpaint {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Methods and config

Method parse_method(std::string_view s) {
  if (s == "sd-inpaint") return Method::sd_inpaint;
  if (s == "edge-guided") return Method::edge_guided;
  if (s == "direct-dip") return Method::direct_dip;
  if (s == "direct-dip-hist") return Method::direct_dip_hist;
  if (s == "ideal-rgb") return Method::ideal_rgb;
  if (s == "mock") return Method::mock;
  throw ConfigError("unknown method '" + std::string(s) + "'");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::sd_inpaint: return "sd-inpaint";
    case Method::edge_guided: return "edge-guided";
    case Method::direct_dip: return "direct-dip";
    case Method::direct_dip_hist: return "direct-dip-hist";
    case Method::ideal_rgb: return "ideal-rgb";
    case Method::mock: return "mock";
  }
  return "?";
}

bool uses_backend(Method m) {
  return m == Method::sd_inpaint || m == Method::edge_guided || m == Method::mock;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ConfigError("config lists no methods");
  for (Method m : methods) {
    if ((m == Method::sd_inpaint || m == Method::edge_guided) && !backend_endpoint &&
        !mock_substitution) {
      throw ConfigError(std::string(to_string(m)) +
                        " needs backend_endpoint or mock_substitution");
    }
  }
  if (scopes.empty()) throw ConfigError("config lists no channel scopes");
  if (workers == 0) throw ConfigError("workers must be >= 1");
  if (!(mask.coverage >= 0.0 && mask.coverage <= 1.0)) {
    throw ConfigError("mask coverage must lie in [0, 1]");
  }
  if (!(mock_blend >= 0.0 && mock_blend <= 1.0)) {
    throw ConfigError("mock_blend must lie in [0, 1]");
  }
  if (!(reflectance_scale > 0.0)) throw ConfigError("reflectance_scale must be positive");
  if (write_artifacts && output_dir.empty()) throw ConfigError("output_dir is required");
  try {
    train_spec.validate();
    inpaint_params.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  skip_config.validate();
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> keys,
                    const std::string& where) {
  for (const auto& [k, _] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw ConfigError("unknown key '" + k + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key) && !obj[key].is_null()) out = obj[key].get<T>();
}

}  // namespace

ExperimentConfig config_from_json(std::string_view text) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError("config is not a JSON object");
  ExperimentConfig c;
  try {
    reject_unknown(j,
                   {"dataset_dir", "methods", "mask", "backend_endpoint",
                    "backend_timeout_ms", "mock_substitution", "mock_blend",
                    "inpaint_params", "train_spec", "skip_config", "scopes",
                    "output_dir", "seed", "reflectance_scale", "workers",
                    "write_artifacts", "verbose"},
                   "config");
    if (j.contains("dataset_dir")) c.dataset_dir = j["dataset_dir"].get<std::string>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("methods")) {
      for (const auto& m : j["methods"]) c.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("scopes")) {
      c.scopes.clear();
      for (const auto& s : j["scopes"]) c.scopes.push_back(parse_scope(s.get<std::string>()));
    }
    if (j.contains("mask")) {
      const auto& m = j["mask"];
      reject_unknown(m, {"path", "coverage", "kind"}, "mask");
      if (m.contains("path") && !m["path"].is_null()) c.mask.path = m["path"].get<std::string>();
      read(m, "coverage", c.mask.coverage);
      if (m.contains("kind")) c.mask.kind = parse_mask_kind(m["kind"].get<std::string>());
    }
    if (j.contains("backend_endpoint") && !j["backend_endpoint"].is_null()) {
      c.backend_endpoint = j["backend_endpoint"].get<std::string>();
    }
    if (j.contains("backend_timeout_ms")) {
      c.backend_timeout = std::chrono::milliseconds(j["backend_timeout_ms"].get<std::int64_t>());
    }
    read(j, "mock_substitution", c.mock_substitution);
    read(j, "mock_blend", c.mock_blend);
    read(j, "seed", c.seed);
    read(j, "reflectance_scale", c.reflectance_scale);
    read(j, "workers", c.workers);
    read(j, "write_artifacts", c.write_artifacts);
    read(j, "verbose", c.verbose);
    if (j.contains("inpaint_params")) {
      const auto& p = j["inpaint_params"];
      reject_unknown(p,
                     {"prompt", "negative_prompt", "text_guidance_scale", "num_steps",
                      "edge_guidance_scale", "mask_fill_mode", "seed"},
                     "inpaint_params");
      auto& ip = c.inpaint_params;
      read(p, "prompt", ip.prompt);
      read(p, "negative_prompt", ip.negative_prompt);
      read(p, "text_guidance_scale", ip.text_guidance_scale);
      read(p, "num_steps", ip.num_steps);
      read(p, "edge_guidance_scale", ip.edge_guidance_scale);
      read(p, "seed", ip.seed);
      if (p.contains("mask_fill_mode")) {
        ip.mask_fill_mode = parse_fill_mode(p["mask_fill_mode"].get<std::string>());
      }
    }
    if (j.contains("train_spec")) {
      const auto& t = j["train_spec"];
      reject_unknown(t,
                     {"steps", "learning_rate", "adam_beta1", "adam_beta2", "adam_eps",
                      "seed"},
                     "train_spec");
      auto& ts = c.train_spec;
      read(t, "steps", ts.steps);
      read(t, "learning_rate", ts.learning_rate);
      read(t, "adam_beta1", ts.adam_beta1);
      read(t, "adam_beta2", ts.adam_beta2);
      read(t, "adam_eps", ts.adam_eps);
      read(t, "seed", ts.seed);
    }
    if (j.contains("skip_config")) {
      const auto& s = j["skip_config"];
      reject_unknown(s,
                     {"input_channels", "scales", "down_channels", "skip_channels",
                      "use_norm", "out_channels", "leaky_slope", "head"},
                     "skip_config");
      auto& sc = c.skip_config;
      read(s, "input_channels", sc.input_channels);
      read(s, "scales", sc.scales);
      read(s, "down_channels", sc.down_channels);
      read(s, "skip_channels", sc.skip_channels);
      read(s, "use_norm", sc.use_norm);
      read(s, "out_channels", sc.out_channels);
      read(s, "leaky_slope", sc.leaky_slope);
      if (s.contains("head")) {
        const auto head = s["head"].get<std::string>();
        if (head == "logistic") {
          sc.head = OutputHead::logistic;
        } else if (head == "linear") {
          sc.head = OutputHead::linear;
        } else {
          throw ConfigError("unknown head '" + head + "'");
        }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["dataset_dir"] = c.dataset_dir.string();
  j["methods"] = json::array();
  for (Method m : c.methods) j["methods"].push_back(std::string(to_string(m)));
  j["mask"] = {{"coverage", c.mask.coverage}, {"kind", std::string(to_string(c.mask.kind))}};
  j["mask"]["path"] = c.mask.path ? json(c.mask.path->string()) : json(nullptr);
  j["backend_endpoint"] = c.backend_endpoint ? json(*c.backend_endpoint) : json(nullptr);
  j["backend_timeout_ms"] = c.backend_timeout.count();
  j["mock_substitution"] = c.mock_substitution;
  j["mock_blend"] = c.mock_blend;
  const auto& ip = c.inpaint_params;
  j["inpaint_params"] = {{"prompt", ip.prompt},
                         {"negative_prompt", ip.negative_prompt},
                         {"text_guidance_scale", ip.text_guidance_scale},
                         {"num_steps", ip.num_steps},
                         {"edge_guidance_scale", ip.edge_guidance_scale},
                         {"mask_fill_mode", std::string(to_string(ip.mask_fill_mode))},
                         {"seed", ip.seed}};
  const auto& ts = c.train_spec;
  j["train_spec"] = {{"steps", ts.steps},           {"learning_rate", ts.learning_rate},
                     {"adam_beta1", ts.adam_beta1}, {"adam_beta2", ts.adam_beta2},
                     {"adam_eps", ts.adam_eps},     {"seed", ts.seed}};
  const auto& sc = c.skip_config;
  j["skip_config"] = {{"input_channels", sc.input_channels},
                      {"scales", sc.scales},
                      {"down_channels", sc.down_channels},
                      {"skip_channels", sc.skip_channels},
                      {"use_norm", sc.use_norm},
                      {"out_channels", sc.out_channels},
                      {"leaky_slope", sc.leaky_slope},
                      {"head", sc.head == OutputHead::logistic ? "logistic" : "linear"}};
  j["scopes"] = json::array();
  for (auto s : c.scopes) j["scopes"].push_back(std::string(to_string(s)));
  j["output_dir"] = c.output_dir.string();
  j["seed"] = c.seed;
  j["reflectance_scale"] = c.reflectance_scale;
  j["workers"] = c.workers;
  j["write_artifacts"] = c.write_artifacts;
  j["verbose"] = c.verbose;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

class Logger {
 public:
  explicit Logger(bool on) : on_(on) {}
  void operator()(const std::string& line) {
    if (!on_) return;
    std::lock_guard lock(mu_);
    std::clog << line << '\n';
  }

 private:
  bool on_;
  std::mutex mu_;
};

struct Backends {
  std::unique_ptr<InpaintBackend> mock;
  std::unique_ptr<InpaintBackend> diffusion;

  explicit Backends(const ExperimentConfig& c) {
    mock = std::make_unique<MockBackend>(c.mock_blend);
    if (c.backend_endpoint) {
      diffusion = std::make_unique<DiffusionClient>(*c.backend_endpoint, c.backend_timeout);
    } else if (c.mock_substitution) {
      diffusion = std::make_unique<MockBackend>(c.mock_blend);
    }
  }

  const InpaintBackend& for_method(Method m) const {
    if (m == Method::mock) return *mock;
    if (!diffusion) throw ConfigError("no backend configured for " + std::string(to_string(m)));
    return *diffusion;
  }
};

std::uint64_t sample_seed(const ExperimentConfig& c, const std::string& id) {
  return derive_seed(c.seed, id);
}

InpaintMask choose_mask(const ExperimentConfig& c, const LoadedSample& s) {
  const auto& cur = s.scene->current();
  if (c.mask.path) {
    InpaintMask m = InpaintMask::from_tensor(load_tensor(*c.mask.path));
    require_same_size(cur, m);
    return m;
  }
  if (s.mask) return *s.mask;
  return generate_mask(cur.height(), cur.width(), c.mask.coverage, c.mask.kind,
                       derive_seed(sample_seed(c, s.id), "mask"));
}

TrainSpec sample_train_spec(const ExperimentConfig& c, const std::string& id) {
  TrainSpec spec = c.train_spec;
  spec.seed = derive_seed(sample_seed(c, id) ^ c.train_spec.seed, "train");
  return spec;
}

InpaintParams sample_params(const ExperimentConfig& c, const InpaintParams& base,
                            const std::string& id) {
  InpaintParams p = base;
  // Kept within 32 bits so every JSON consumer reads it exactly.
  p.seed = derive_seed(sample_seed(c, id) ^ base.seed, "backend") & 0xffffffffULL;
  return p;
}

/// Stage one through a backend, composited onto the known RGB pixels.
RGBImage backend_stage(Method m, const LoadedSample& s, const InpaintMask& mask,
                       const InpaintParams& params, const Backends& backends) {
  const ScenePair& scene = *s.scene;
  std::optional<EdgeMap> control;
  if (m == Method::edge_guided) {
    control = s.control ? *s.control : edge_map(extract_rgb(scene.historical()));
  }
  const BackendRequest req = make_backend_request(scene, mask, params, std::move(control));
  const RGBImage raw = backends.for_method(m).inpaint(req);
  if (raw.height() != mask.height() || raw.width() != mask.width()) {
    throw ProtocolError("backend returned an image of the wrong size");
  }
  return composite_known(raw, extract_rgb(scene.current()), mask);
}

MSICube run_method(Method m, const ExperimentConfig& c, const LoadedSample& s,
                   const InpaintMask& mask, const InpaintParams& params,
                   const Backends& backends) {
  const ScenePair& scene = *s.scene;
  const TrainSpec spec = sample_train_spec(c, s.id);
  const MSICube current_masked = apply_fill(scene, mask, FillMode::blank);
  switch (m) {
    case Method::direct_dip:
      return direct_dip_inpaint(scene, mask, false, spec, c.skip_config);
    case Method::direct_dip_hist:
      return direct_dip_inpaint(scene, mask, true, spec, c.skip_config);
    case Method::ideal_rgb:
      return complete_msi(current_masked, extract_rgb(scene.current()), mask, spec,
                          c.skip_config);
    case Method::sd_inpaint:
    case Method::edge_guided:
    case Method::mock: {
      const RGBImage rgb = backend_stage(m, s, mask, params, backends);
      return complete_msi(current_masked, rgb, mask, spec, c.skip_config);
    }
  }
  throw ConfigError("unhandled method");
}

void write_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

struct SampleOutcome {
  std::vector<EvalReport> reports;
  std::vector<SampleFailure> failures;
  bool rejected = false;
  bool evaluated = false;
};

std::vector<LoadedSample> load_all(const ExperimentConfig& c,
                                   const std::vector<fs::path>& dirs,
                                   std::vector<std::optional<std::string>>& load_errors) {
  std::vector<LoadedSample> samples(dirs.size());
  load_errors.assign(dirs.size(), std::nullopt);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    try {
      samples[i] = load_sample(dirs[i], c.reflectance_scale);
    } catch (const Error& e) {
      samples[i].id = dirs[i].filename().string();
      load_errors[i] = e.what();
    }
  }
  return samples;
}

std::string quote_csv(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

SampleRun run_sample(const ExperimentConfig& config, const LoadedSample& s,
                     const Backends& backends, Logger& log) {
  if (!s.scene) throw PreconditionError(s.id + " was rejected as saturated");
  SampleRun run;
  run.mask = choose_mask(config, s);
  const InpaintParams params = sample_params(config, config.inpaint_params, s.id);
  for (Method m : config.methods) {
    const std::string name(to_string(m));
    const auto t0 = std::chrono::steady_clock::now();
    try {
      MSICube result = run_method(m, config, s, run.mask, params, backends);
      for (ChannelScope scope : config.scopes) {
        run.reports.push_back(
            evaluate_sample(result, s.scene->current(), run.mask, scope, s.id, name));
      }
      run.outputs.emplace_back(name, std::move(result));
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      log(s.id + ": " + name + " done in " + format_real(secs) + " s");
    } catch (const Error& e) {
      run.failures.push_back({s.id, name, e.what()});
      log(s.id + ": " + name + " failed: " + e.what());
    }
  }
  return run;
}

}  // namespace

SampleRun inpaint_sample(const ExperimentConfig& config, const LoadedSample& sample) {
  config.validate();
  const Backends backends(config);
  Logger log(config.verbose);
  return run_sample(config, sample, backends, log);
}

int RunResult::exit_code() const {
  if (samples_evaluated == 0) return 3;
  return failures.empty() ? 0 : 2;
}

RunResult run_pipeline(const ExperimentConfig& config) {
  config.validate();
  const auto dirs = list_samples(config.dataset_dir);
  if (dirs.empty()) {
    throw ConfigError("dataset '" + config.dataset_dir.string() + "' holds no sample_* directories");
  }
  if (config.write_artifacts) {
    fs::create_directories(config.output_dir / "samples");
    write_file(config.output_dir / "config.json", config_to_json(config));
  }
  const Backends backends(config);
  Logger log(config.verbose);
  std::vector<std::optional<std::string>> load_errors;
  const auto samples = load_all(config, dirs, load_errors);
  std::vector<SampleOutcome> outcomes(samples.size());

  parallel_for(samples.size(), config.workers, [&](std::size_t i) {
    const LoadedSample& s = samples[i];
    SampleOutcome& out = outcomes[i];
    if (load_errors[i]) {
      for (Method m : config.methods) {
        out.failures.push_back({s.id, std::string(to_string(m)), *load_errors[i]});
      }
      return;
    }
    if (!s.scene) {
      out.rejected = true;
      log(s.id + ": rejected as saturated");
      return;
    }
    SampleRun run;
    try {
      run = run_sample(config, s, backends, log);
    } catch (const Error& e) {
      for (Method m : config.methods) {
        out.failures.push_back({s.id, std::string(to_string(m)), e.what()});
      }
      return;
    }
    out.evaluated = true;
    out.reports = std::move(run.reports);
    out.failures = std::move(run.failures);
    if (config.write_artifacts) {
      const fs::path sample_dir = config.output_dir / "samples" / s.id;
      fs::create_directories(sample_dir);
      save_tensor(run.mask.to_tensor(), sample_dir / "mask.npy");
      save_tensor(apply_fill(*s.scene, run.mask, config.inpaint_params.mask_fill_mode).values(),
                  sample_dir / "input.npy");
      for (const auto& [name, cube] : run.outputs) {
        save_tensor(cube.values(), sample_dir / (name + ".npy"));
        write_bytes(sample_dir / (name + ".png"), render_preview(cube));
      }
    }
  });

  RunResult result;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    result.reports.insert(result.reports.end(), o.reports.begin(), o.reports.end());
    result.failures.insert(result.failures.end(), o.failures.begin(), o.failures.end());
    if (o.rejected) result.rejected.push_back(samples[i].id);
    if (o.evaluated) ++result.samples_evaluated;
  }
  if (config.write_artifacts) {
    write_file(config.output_dir / "reports.csv", reports_csv(result.reports, result.failures));
    write_file(config.output_dir / "summary.csv",
               aggregate_csv(aggregate(result.reports, result.failures)));
    std::string rejected = "sample_id\n";
    for (const auto& id : result.rejected) rejected += id + "\n";
    write_file(config.output_dir / "rejected.csv", rejected);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Reporting

std::vector<AggregateRow> aggregate(std::span<const EvalReport> reports,
                                    std::span<const SampleFailure> failures) {
  std::vector<AggregateRow> rows;
  auto find = [&](const std::string& method, ChannelScope scope) -> AggregateRow* {
    for (auto& r : rows) {
      if (r.method == method && r.scope == scope) return &r;
    }
    return nullptr;
  };
  for (const auto& rep : reports) {
    AggregateRow* row = find(rep.method, rep.channel_scope);
    if (!row) {
      rows.push_back({rep.method, rep.channel_scope});
      row = &rows.back();
    }
    row->ssim_whole += rep.ssim_whole;
    row->ssim_mask += rep.ssim_mask;
    row->rmse_whole += rep.rmse_whole;
    row->rmse_mask += rep.rmse_mask;
    ++row->n_samples;
  }
  for (auto& r : rows) {
    const auto n = static_cast<double>(r.n_samples);
    r.ssim_whole /= n;
    r.ssim_mask /= n;
    r.rmse_whole /= n;
    r.rmse_mask /= n;
  }
  for (const auto& f : failures) {
    bool counted = false;
    for (auto& r : rows) {
      if (r.method == f.method) {
        ++r.n_failed;
        counted = true;
      }
    }
    if (!counted) {
      AggregateRow row{f.method, ChannelScope::all13};
      row.n_failed = 1;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_real(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[400];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  return std::string(buf, end);
}

std::string reports_csv(std::span<const EvalReport> reports,
                        std::span<const SampleFailure> failures) {
  std::string out =
      "sample_id,method,scope,status,ssim_whole,ssim_mask,rmse_whole,rmse_mask,message\n";
  for (const auto& r : reports) {
    out += quote_csv(r.sample_id) + "," + quote_csv(r.method) + "," +
           std::string(to_string(r.channel_scope)) + ",ok," + format_real(r.ssim_whole) + "," +
           format_real(r.ssim_mask) + "," + format_real(r.rmse_whole) + "," +
           format_real(r.rmse_mask) + ",\n";
  }
  for (const auto& f : failures) {
    out += quote_csv(f.sample_id) + "," + quote_csv(f.method) + ",,failed,,,,," +
           quote_csv(f.message) + "\n";
  }
  return out;
}

std::string aggregate_csv(std::span<const AggregateRow> rows) {
  std::string out =
      "method,scope,ssim_whole,ssim_mask,rmse_whole,rmse_mask,n_samples,n_failed\n";
  for (const auto& r : rows) {
    const bool any = r.n_samples > 0;
    auto cell = [&](double v) { return any ? format_real(v) : std::string(); };
    out += quote_csv(r.method) + "," + std::string(to_string(r.scope)) + "," +
           cell(r.ssim_whole) + "," + cell(r.ssim_mask) + "," + cell(r.rmse_whole) + "," +
           cell(r.rmse_mask) + "," + std::to_string(r.n_samples) + "," +
           std::to_string(r.n_failed) + "\n";
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cells.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.emplace_back();
    } else {
      cells.back() += ch;
    }
  }
  return cells;
}

double parse_real(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("bad number '" + s + "' in reports CSV");
  }
  return v;
}

}  // namespace

ParsedReports parse_reports_csv(std::string_view text) {
  ParsedReports parsed;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != 9) throw FormatError("reports CSV row has " + std::to_string(cells.size()) + " cells");
    if (cells[3] == "ok") {
      EvalReport r;
      r.sample_id = cells[0];
      r.method = cells[1];
      r.channel_scope = parse_scope(cells[2]);
      r.ssim_whole = parse_real(cells[4]);
      r.ssim_mask = parse_real(cells[5]);
      r.rmse_whole = parse_real(cells[6]);
      r.rmse_mask = parse_real(cells[7]);
      parsed.reports.push_back(std::move(r));
    } else {
      parsed.failures.push_back({cells[0], cells[1], cells[8]});
    }
  }
  return parsed;
}

// ---------------------------------------------------------------------------
// Parameter sweep

SweepGrid table1_grid() {
  return {{"mask_fill_mode", {"blank", "historical"}},
          {"text_guidance_scale", {"0.0", "1.0", "7.5"}},
          {"num_steps", {"20", "50", "100"}},
          {"edge_guidance_scale", {"0.1", "0.5", "1.0"}}};
}

namespace {

void apply_axis(InpaintParams& p, std::string_view axis, const std::string& value) {
  try {
    if (axis == "mask_fill_mode") {
      p.mask_fill_mode = parse_fill_mode(value);
    } else if (axis == "text_guidance_scale") {
      p.text_guidance_scale = parse_real(value);
    } else if (axis == "edge_guidance_scale") {
      p.edge_guidance_scale = parse_real(value);
    } else if (axis == "num_steps") {
      std::size_t n = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("num_steps value '" + value + "' is not an integer");
      }
      p.num_steps = n;
    }
  } catch (const FormatError& e) {
    throw ConfigError(std::string("sweep value: ") + e.what());
  }
  p.validate();
}

}  // namespace

std::string SweepReport::csv() const {
  std::string out =
      "parameter,value,method,scope,ssim_whole,ssim_mask,rmse_whole,rmse_mask,n_samples,"
      "n_failed\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    const bool any = m.n_samples > 0;
    auto cell = [&](double v) { return any ? format_real(v) : std::string(); };
    out += quote_csv(r.parameter) + "," + quote_csv(r.value) + "," + quote_csv(m.method) + "," +
           std::string(to_string(m.scope)) + "," + cell(m.ssim_whole) + "," +
           cell(m.ssim_mask) + "," + cell(m.rmse_whole) + "," + cell(m.rmse_mask) + "," +
           std::to_string(m.n_samples) + "," + std::to_string(m.n_failed) + "\n";
  }
  return out;
}

SweepReport sweep(const ExperimentConfig& base, const SweepGrid& grid) {
  base.validate();
  for (const auto& [axis, values] : grid) {
    if (std::find(kSweepAxes.begin(), kSweepAxes.end(), axis) == kSweepAxes.end()) {
      throw ConfigError("unknown sweep parameter '" + axis + "'");
    }
    if (values.empty()) throw ConfigError("sweep parameter '" + axis + "' has no values");
  }
  std::vector<Method> methods;
  for (Method m : base.methods) {
    if (uses_backend(m)) methods.push_back(m);
  }
  if (methods.empty()) {
    throw ConfigError("sweep needs at least one of sd-inpaint, edge-guided, mock");
  }

  struct Setting {
    std::string parameter;
    std::string value;
    InpaintParams params;
  };
  std::vector<Setting> settings;
  if (grid.empty()) {
    settings.push_back({"base", "-", base.inpaint_params});
  }
  for (std::string_view axis : kSweepAxes) {
    auto it = grid.find(std::string(axis));
    if (it == grid.end()) continue;
    for (const auto& value : it->second) {
      InpaintParams p = base.inpaint_params;
      apply_axis(p, axis, value);
      settings.push_back({std::string(axis), value, p});
    }
  }

  const auto dirs = list_samples(base.dataset_dir);
  if (dirs.empty()) throw ConfigError("dataset holds no sample_* directories");
  std::vector<std::optional<std::string>> load_errors;
  const auto samples = load_all(base, dirs, load_errors);
  std::vector<std::optional<InpaintMask>> masks(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!load_errors[i] && samples[i].scene) masks[i] = choose_mask(base, samples[i]);
  }
  const Backends backends(base);

  SweepReport report;
  for (const auto& setting : settings) {
    for (Method m : methods) {
      const std::string name(to_string(m));
      std::vector<std::optional<EvalReport>> reps(samples.size());
      std::vector<std::optional<std::string>> errs(samples.size());
      parallel_for(samples.size(), base.workers, [&](std::size_t i) {
        const auto& s = samples[i];
        if (load_errors[i]) {
          errs[i] = *load_errors[i];
          return;
        }
        if (!s.scene) return;
        try {
          const InpaintParams params = sample_params(base, setting.params, s.id);
          const RGBImage rgb = backend_stage(m, s, *masks[i], params, backends);
          const MSICube stage_one = insert_rgb(s.scene->current(), rgb);
          reps[i] = evaluate_sample(stage_one, s.scene->current(), *masks[i],
                                    ChannelScope::rgb3, s.id, name);
        } catch (const Error& e) {
          errs[i] = e.what();
        }
      });
      std::vector<EvalReport> ok;
      std::vector<SampleFailure> failed;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        if (reps[i]) ok.push_back(*reps[i]);
        if (errs[i]) {
          failed.push_back({samples[i].id, name, *errs[i]});
          report.failures.push_back(
              {samples[i].id, name, setting.parameter + "=" + setting.value + ": " + *errs[i]});
        }
      }
      auto rows = aggregate(ok, failed);
      AggregateRow row = rows.empty() ? AggregateRow{name, ChannelScope::rgb3} : rows.front();
      row.scope = ChannelScope::rgb3;
      report.rows.push_back({setting.parameter, setting.value, row});
    }
  }
  return report;
}

}  // namespace msinpaint
