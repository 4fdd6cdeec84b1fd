// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Usage: msinpaint_acceptance [--cli <msinpaint>]

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "msinpaint/backends.hpp"
#include "msinpaint/dataset.hpp"
#include "msinpaint/dip.hpp"
#include "msinpaint/experiment.hpp"
#include "msinpaint/masking.hpp"
#include "msinpaint/metrics.hpp"
#include "msinpaint/random.hpp"
#include "msinpaint/synthdata.hpp"
#include "msinpaint/wire.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace msinpaint;

namespace {

// Pinned settings.
constexpr double kGradTolerance = 1e-4;
constexpr double kGradSeconds = 60.0;
constexpr double kSsimTolerance = 1e-9;
constexpr double kRmseTolerance = 1e-12;
constexpr std::size_t kSide = 64;
constexpr std::size_t kScenes = 5;
constexpr double kCoverage = 0.25;
constexpr std::size_t kFitSteps = 1200;
constexpr double kQuantTolerance = 1.0 / 255.0;
constexpr std::uint64_t kBaselineSeeds[] = {0, 1};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void make_dataset(const fs::path& dir, std::size_t side, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "sample_%03zu", i);
    write_sample(dir / id, generate_scene_pair(side, side, 1000 + i),
                 generate_mask(side, side, kCoverage, MaskKind::rect, 2000 + i));
  }
}

ExperimentConfig desk_config(const fs::path& data, const fs::path& out) {
  ExperimentConfig c;
  c.dataset_dir = data;
  c.output_dir = out;
  c.skip_config = SkipNetConfig::desk(c.skip_config.input_channels, kBandCount);
  c.train_spec.steps = kFitSteps;
  c.scopes = {ChannelScope::all13};
  return c;
}

std::map<std::string, std::map<std::string, double>> masked_by_method(const RunResult& r,
                                                                      double EvalReport::*field) {
  std::map<std::string, std::map<std::string, double>> out;
  for (const auto& rep : r.reports) out[rep.method][rep.sample_id] = rep.*field;
  return out;
}

double mean_of(const std::map<std::string, double>& m) {
  double s = 0;
  for (const auto& [k, v] : m) s += v;
  return m.empty() ? std::nan("") : s / static_cast<double>(m.size());
}

// Per-band mean of the known pixels written into the missing ones.
MSICube mean_fill(const MSICube& cube, const InpaintMask& mask) {
  Tensor v = cube.values();
  const std::size_t plane = cube.height() * cube.width();
  for (std::size_t b = 0; b < kBandCount; ++b) {
    double s = 0;
    std::size_t n = 0;
    for (std::size_t p = 0; p < plane; ++p) {
      if (!mask.missing(p)) {
        s += v[b * plane + p];
        ++n;
      }
    }
    for (std::size_t p = 0; p < plane; ++p) {
      if (mask.missing(p)) v[b * plane + p] = s / static_cast<double>(n);
    }
  }
  return MSICube(std::move(v));
}

Outcome grad_check_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (bool norm : {true, false}) {
    SkipNetConfig c;
    c.input_channels = 3;
    c.scales = 2;
    c.down_channels = {4, 4};
    c.skip_channels = 2;
    c.out_channels = 2;
    c.use_norm = norm;
    const Tensor input = make_noise_input(3, 8, 8, 1);
    const Tensor target = testing::random_tensor({2, 8, 8}, 2);
    Tensor lm({2, 8, 8}, 1.0);
    for (std::size_t i = 0; i < lm.size(); i += 3) lm[i] = 0.0;
    worst = std::max(worst, grad_check(c, input, target, LossMask(lm), 1e-5, 200, 3));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst < kGradTolerance && secs < kGradSeconds,
          fmt("max_rel_err=%.3g", worst) + fmt(" seconds=%.2f", secs)};
}

Outcome metric_oracle_criterion() {
  double ssim_err = 0, rmse_err = 0;
  bool identities = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Tensor x = testing::random_tensor({3, 16, 16}, 2 * seed);
    const Tensor y = testing::random_tensor({3, 16, 16}, 2 * seed + 1);
    const double ref = oracle::mean_map(oracle::brute_ssim_map(x, y), nullptr);
    ssim_err = std::max(ssim_err, std::abs(ssim(x, y) - ref));
    rmse_err = std::max(rmse_err, std::abs(rmse(x, y) - oracle::brute_rmse(x, y, nullptr)));
    identities = identities && ssim(x, x) == 1.0 && rmse(x, x) == 0.0;
  }
  return {ssim_err <= kSsimTolerance && rmse_err <= kRmseTolerance && identities,
          fmt("ssim_err=%.3g", ssim_err) + fmt(" rmse_err=%.3g", rmse_err) +
              (identities ? " identities=exact" : " identities=broken")};
}

Outcome known_pixel_criterion(const fs::path& root) {
  const fs::path data = root / "kp_data";
  make_dataset(data, kSide, kScenes);
  testing::StubServer stub([](const httplib::Request& rq, httplib::Response& rs) {
    // Perturbs every pixel so preservation must come from compositing.
    auto req = wire::decode_request(rq.body);
    Tensor v = req.image.values();
    for (double& x : v.data()) x = 1.0 - x;
    rs.set_content(wire::encode_response(RGBImage(std::move(v)), "invert"), "application/json");
  });
  ExperimentConfig c = desk_config(data, root / "kp_out");
  c.methods = {Method::sd_inpaint, Method::edge_guided, Method::direct_dip,
               Method::direct_dip_hist, Method::ideal_rgb, Method::mock};
  c.backend_endpoint = stub.endpoint();
  c.train_spec.steps = 40;
  const RunResult r = run_pipeline(c);
  std::size_t checked = 0, mismatched = 0;
  for (const auto& dir : list_samples(data)) {
    const LoadedSample s = load_sample(dir);
    const fs::path out = c.output_dir / "samples" / s.id;
    const auto mask = InpaintMask::from_tensor(load_tensor(out / "mask.npy"));
    const auto& truth = s.scene->current().values();
    const std::size_t plane = kSide * kSide;
    for (Method m : c.methods) {
      const Tensor got = load_tensor(out / (std::string(to_string(m)) + ".npy"));
      ++checked;
      for (std::size_t b = 0; b < kBandCount; ++b) {
        for (std::size_t p = 0; p < plane; ++p) {
          if (mask.missing(p)) continue;
          if (std::bit_cast<std::uint64_t>(got[b * plane + p]) !=
              std::bit_cast<std::uint64_t>(truth[b * plane + p])) {
            ++mismatched;
          }
        }
      }
    }
  }
  const bool ok = r.failures.empty() && checked == kScenes * c.methods.size() && mismatched == 0;
  return {ok, "outputs=" + std::to_string(checked) + " mismatched_values=" +
                  std::to_string(mismatched) + " failures=" + std::to_string(r.failures.size())};
}

struct FitRuns {
  RunResult main;
  std::vector<RunResult> ideal_by_seed;
  fs::path data;
};

FitRuns fit_runs(const fs::path& root) {
  FitRuns f;
  f.data = root / "fit_data";
  make_dataset(f.data, kSide, kScenes);
  ExperimentConfig c = desk_config(f.data, root / "fit_out");
  c.methods = {Method::direct_dip, Method::direct_dip_hist, Method::ideal_rgb};
  c.write_artifacts = false;
  f.main = run_pipeline(c);
  c.methods = {Method::ideal_rgb};
  for (std::uint64_t seed : kBaselineSeeds) {
    if (seed == c.seed) {
      f.ideal_by_seed.push_back(f.main);
      continue;
    }
    ExperimentConfig s = c;
    s.seed = seed;
    f.ideal_by_seed.push_back(run_pipeline(s));
  }
  return f;
}

Outcome ssim_ordering(const RunResult& r, const std::string& better, const std::string& worse) {
  const auto by = masked_by_method(r, &EvalReport::ssim_mask);
  const auto b = by.find(better), w = by.find(worse);
  if (b == by.end() || w == by.end() || b->second.size() != kScenes ||
      w->second.size() != kScenes) {
    return {false, "missing reports"};
  }
  const double mb = mean_of(b->second), mw = mean_of(w->second);
  return {mb > mw, better + fmt("=%.4f ", mb) + worse + fmt("=%.4f", mw) +
                       " n=" + std::to_string(kScenes)};
}

Outcome mean_fill_criterion(const FitRuns& f) {
  std::map<std::string, double> baseline;
  for (const auto& dir : list_samples(f.data)) {
    const LoadedSample s = load_sample(dir);
    const MSICube filled = mean_fill(s.scene->current(), *s.mask);
    baseline[s.id] = rmse(filled.values(), s.scene->current().values(), *s.mask);
  }
  std::size_t wins = 0, total = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string worst_case;
  for (std::size_t k = 0; k < f.ideal_by_seed.size(); ++k) {
    const auto by = masked_by_method(f.ideal_by_seed[k], &EvalReport::rmse_mask);
    const auto it = by.find("ideal-rgb");
    if (it == by.end()) continue;
    for (const auto& [id, v] : it->second) {
      ++total;
      wins += v < baseline.at(id);
      if (baseline.at(id) - v < worst_margin) {
        worst_margin = baseline.at(id) - v;
        worst_case = id + "/seed" + std::to_string(kBaselineSeeds[k]);
      }
    }
  }
  const std::size_t expected = kScenes * std::size(kBaselineSeeds);
  return {total == expected && wins == total,
          "wins=" + std::to_string(wins) + "/" + std::to_string(expected) +
              fmt(" min_margin=%.4f", worst_margin) + " at " + worst_case +
              fmt(" baseline_mean=%.4f", mean_of(baseline))};
}

Outcome cli_determinism_criterion(const fs::path& root, const std::string& cli) {
  if (cli.empty()) return {false, "no --cli given"};
  const fs::path data = root / "cli_data";
  make_dataset(data, 32, 3);
  ExperimentConfig c;
  c.dataset_dir = data;
  c.methods = {Method::mock, Method::direct_dip, Method::direct_dip_hist, Method::ideal_rgb};
  c.skip_config = SkipNetConfig::desk(c.skip_config.input_channels, kBandCount);
  c.train_spec.steps = 60;
  c.output_dir = root / "unused";
  {
    std::ofstream(root / "cli.json") << config_to_json(c);
  }
  std::vector<std::string> csvs;
  for (const char* name : {"cli_a", "cli_b"}) {
    const std::string cmd = "\"" + cli + "\" run --config \"" + (root / "cli.json").string() +
                            "\" --seed 7 --out \"" + (root / name).string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "run exited nonzero"};
    csvs.push_back(slurp(root / name / "reports.csv") + slurp(root / name / "summary.csv"));
  }
  const bool same = csvs[0] == csvs[1] && csvs[0].size() > 200;
  return {same, same ? "reports.csv and summary.csv byte-identical (" +
                           std::to_string(csvs[0].size()) + " bytes)"
                     : "CSV differs"};
}

Outcome io_criterion() {
  bool exact = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Tensor t = testing::random_tensor({13, 9, 7}, seed, -1e3, 1e3);
    t[0] = std::numeric_limits<double>::denorm_min();
    t[1] = -0.0;
    const Tensor back = parse_npy(encode_npy(t));
    exact = exact && back.shape() == t.shape();
    for (std::size_t i = 0; exact && i < t.size(); ++i) {
      exact = std::bit_cast<std::uint64_t>(back[i]) == std::bit_cast<std::uint64_t>(t[i]);
    }
  }
  testing::StubServer stub([](const httplib::Request& rq, httplib::Response& rs) {
    const auto req = wire::decode_request(rq.body);
    rs.set_content(wire::encode_response(req.image, "echo"), "application/json");
  });
  DiffusionClient client(stub.endpoint(), std::chrono::milliseconds(10000));
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ScenePair s = generate_scene_pair(32, 32, seed);
    const auto mask = generate_mask(32, 32, kCoverage, MaskKind::blob, seed);
    const BackendRequest req = make_backend_request(s, mask, InpaintParams{});
    const RGBImage got = client.inpaint(req);
    for (std::size_t i = 0; i < got.values().size(); ++i) {
      worst = std::max(worst, std::abs(got.values()[i] - req.image.values()[i]));
    }
  }
  return {exact && worst <= kQuantTolerance,
          std::string(exact ? "npy=bit-exact" : "npy=mismatch") +
              fmt(" wire_max_err=%.5f", worst) + fmt(" (bound %.5f)", kQuantTolerance)};
}

Outcome sweep_criterion(const fs::path& root) {
  const fs::path data = root / "sweep_data";
  make_dataset(data, 32, 2);
  ExperimentConfig c = desk_config(data, root / "sweep_out");
  c.methods = {Method::mock};
  const SweepReport rep = sweep(c, table1_grid());
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"mask_fill_mode", "blank"}, {"mask_fill_mode", "historical"},
      {"text_guidance_scale", "0.0"}, {"text_guidance_scale", "1.0"},
      {"text_guidance_scale", "7.5"}, {"num_steps", "20"},
      {"num_steps", "50"}, {"num_steps", "100"},
      {"edge_guidance_scale", "0.1"}, {"edge_guidance_scale", "0.5"},
      {"edge_guidance_scale", "1.0"}};
  bool ok = rep.rows.size() == expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) {
    ok = rep.rows[i].parameter == expected[i].first && rep.rows[i].value == expected[i].second;
  }
  // The mock ignores every knob except the fill, so each non-fill row must
  // reproduce the default (historical) fill row.
  for (std::size_t i = 2; ok && i < rep.rows.size(); ++i) {
    ok = rep.rows[i].metrics.ssim_mask == rep.rows[1].metrics.ssim_mask &&
         rep.rows[i].metrics.rmse_mask == rep.rows[1].metrics.rmse_mask;
  }
  // Bold defaults: a recording stub sees exactly one knob off its default.
  std::mutex mu;
  std::vector<InpaintParams> seen;
  testing::StubServer stub([&](const httplib::Request& rq, httplib::Response& rs) {
    const auto req = wire::decode_request(rq.body);
    {
      std::lock_guard lock(mu);
      seen.push_back(req.params);
    }
    rs.set_content(wire::encode_response(req.image, "echo"), "application/json");
  });
  ExperimentConfig rec = c;
  rec.methods = {Method::sd_inpaint};
  rec.backend_endpoint = stub.endpoint();
  const SweepReport rec_rep = sweep(rec, table1_grid());
  const InpaintParams d;
  std::size_t bad = 0;
  for (const auto& p : seen) {
    const int off = (p.mask_fill_mode != d.mask_fill_mode) +
                    (p.text_guidance_scale != d.text_guidance_scale) +
                    (p.num_steps != d.num_steps) +
                    (p.edge_guidance_scale != d.edge_guidance_scale);
    bad += off > 1;
  }
  ok = ok && rec_rep.rows.size() == 11 && seen.size() == 11 * 2 && bad == 0;
  return {ok, "rows=" + std::to_string(rep.rows.size()) + " requests=" +
                  std::to_string(seen.size()) + " multi_knob_requests=" + std::to_string(bad)};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) {
      cli = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--cli <msinpaint>]\n", argv[0]);
      return 1;
    }
  }
  testing::TempDir root;
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s [%d] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  };

  report(1, "gradient check, norm on and off", grad_check_criterion);
  report(2, "metrics match reference oracles", metric_oracle_criterion);
  report(3, "known pixels preserved bit-exactly, all methods",
         [&] { return known_pixel_criterion(root.path()); });
  std::optional<FitRuns> fits;
  std::string fit_error;
  try {
    fits = fit_runs(root.path());
  } catch (const std::exception& e) {
    fit_error = e.what();
  }
  auto need_fits = [&]() -> const FitRuns& {
    if (!fits) throw std::runtime_error("fit runs failed: " + fit_error);
    return *fits;
  };
  report(4, "masked SSIM: direct-dip-hist > direct-dip",
         [&] { return ssim_ordering(need_fits().main, "direct-dip-hist", "direct-dip"); });
  report(5, "masked SSIM: ideal-rgb > direct-dip",
         [&] { return ssim_ordering(need_fits().main, "ideal-rgb", "direct-dip"); });
  report(6, "masked RMSE: ideal-rgb < mean fill, every scene and seed",
         [&] { return mean_fill_criterion(need_fits()); });
  report(7, "repeated CLI run gives byte-identical CSV",
         [&] { return cli_determinism_criterion(root.path(), cli); });
  report(8, "NPY round trip exact, wire quantization within one step", io_criterion);
  report(9, "sweep over four axes gives 11 rows with defaults held",
         [&] { return sweep_criterion(root.path()); });
  std::printf("%s: %d failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
