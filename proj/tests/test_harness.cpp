// Copyright 2026 The roughou Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "roughou/errors.hpp"
#include "roughou/harness.hpp"

using namespace roughou;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.model = make_model(SymMatrix{{1.0, 2.0}, {2.0, 5.0}}, 1.0, 0.45);
  c.schedule = {{10.0, 512, std::nullopt}, {10.0, 1024, 0.4}};
  c.mc_paths = 24;
  c.seed = 7;
  c.substeps = 2;
  c.mode = Mode::table2;
  return c;
}

}  // namespace

TEST_CASE("presets") {
  const ExperimentConfig t1 = preset_config("table1");
  CHECK(t1.schedule.size() == 36);
  CHECK(t1.model.d == 1);
  CHECK(t1.model.gamma.matrix()(0, 0) == 2.0);
  CHECK(t1.mc_paths == 200);
  CHECK(t1.substeps == 1);
  CHECK(t1.mode == Mode::table1);

  const ExperimentConfig t2 = preset_config("table2");
  CHECK(t2.schedule.size() == 12);
  CHECK(t2.model.gamma.matrix() == Matrix{{1.0, 2.0}, {2.0, 5.0}});
  bool found = false;
  for (const auto& c : t2.schedule)
    if (c.hurst && *c.hurst == 0.45 && c.horizon == 40.0 && c.steps == 8192) found = true;
  CHECK(found);

  CHECK(preset_config("boxplot").mode == Mode::boxplot);
  const ExperimentConfig fs = preset_config("freq_sweep");
  CHECK(fs.mode == Mode::freq_sweep);
  for (const auto& c : fs.schedule) CHECK(c.horizon == 40.0);
  CHECK(preset_config("diagnostics").mc_paths == kFullScalePaths);
  CHECK_THROWS_AS(preset_config("table3"), ValidationError);
  for (const char* name : {"table1", "table2", "boxplot", "freq_sweep", "diagnostics"})
    CHECK_NOTHROW(validate_config(preset_config(name)));
}

TEST_CASE("table shapes") {
  TempDir tmp("roughou_test_shapes");
  for (const char* name : {"table1", "table2"}) {
    ExperimentConfig c = preset_config(name);
    c.mc_paths = 2;
    const MCReport r = run_mc(c);
    emit_outputs(r, tmp.path / name);
    const auto rows = lines(slurp(tmp.path / name / "table.csv"));
    CHECK(rows.front() == "H,T,n,h,entry_i,entry_j,mean,std");
    CHECK(rows.size() == 1 + (std::string(name) == "table1" ? 36 : 48));
    CHECK(r.cells.size() == (std::string(name) == "table1" ? 36u : 12u));
  }
}

TEST_CASE("empty schedule writes a header-only CSV") {
  TempDir tmp("roughou_test_empty");
  ExperimentConfig c = small_config();
  c.schedule.clear();
  const MCReport r = run_mc(c);
  CHECK(r.cells.empty());
  const auto files = emit_outputs(r, tmp.path);
  CHECK(slurp(tmp.path / "table.csv") == "H,T,n,h,entry_i,entry_j,mean,std\n");
  CHECK(files.back().filename() == "manifest.json");
}

TEST_CASE("runs are deterministic and independent of the thread count") {
  ExperimentConfig c = small_config();
  c.threads = 1;
  const MCReport a = run_mc(c);
  const MCReport b = run_mc(c);
  c.threads = 4;
  const MCReport p = run_mc(c);
  REQUIRE(a.cells.size() == 2);
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    CHECK(a.cells[k].mean == b.cells[k].mean);
    CHECK(a.cells[k].std == b.cells[k].std);
    CHECK(a.cells[k].mean == p.cells[k].mean);
    CHECK(a.cells[k].std == p.cells[k].std);
    for (std::size_t i = 0; i < a.cells[k].samples.size(); ++i) CHECK(*a.cells[k].samples[i] == *p.cells[k].samples[i]);
    CHECK(a.cells[k].hurst == (k == 0 ? 0.45 : 0.4));
    CHECK(a.cells[k].seed == cell_seed(7, k));
  }
  CHECK(a.cells[0].seed != a.cells[1].seed);

  TempDir tmp("roughou_test_det");
  emit_outputs(a, tmp.path / "a");
  emit_outputs(p, tmp.path / "b");
  CHECK(slurp(tmp.path / "a" / "table.csv") == slurp(tmp.path / "b" / "table.csv"));
}

TEST_CASE("cell statistics match the per-path estimates") {
  ExperimentConfig c = small_config();
  c.schedule = {{10.0, 512, std::nullopt}};
  const MCReport r = run_mc(c);
  const CellReport& cell = r.cells.front();
  CHECK(cell.failures == 0);
  CHECK_FALSE(cell.failed);
  const PathPipeline pipe(c.model, 10.0, 512, 2);
  std::vector<double> g00;
  for (std::size_t p = 0; p < c.mc_paths; ++p) {
    const EstimationResult e = pipe.run(cell.seed, p);
    CHECK(e.gamma_hat == *cell.samples[p]);
    g00.push_back(e.gamma_hat(0, 0));
  }
  const auto m = oracle::moments(g00);
  CHECK(std::abs(cell.mean(0, 0) - m.mean) < 1e-13 * std::abs(m.mean));
  CHECK(std::abs(cell.std(0, 0) - std::sqrt(m.var)) < 1e-12 * std::sqrt(m.var));
  CHECK_FALSE(cell.schedule.ok);
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("pairwise summation and sample statistics") {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(pairwise_sum(v) == 500500.0);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  std::vector<double> tiny(1 << 16, 0.1);
  tiny[0] = 1e8;
  CHECK(std::abs(pairwise_sum(tiny) - (1e8 + 0.1 * ((1 << 16) - 1))) < 1e-6);

  const SampleStats s = sample_stats(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.std == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
  CHECK(sample_stats(std::vector<double>{4.2}).std == 0.0);
  CHECK(std::isnan(sample_stats(std::vector<double>{}).mean));
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
  CHECK_THROWS_AS(parallel_for(10, 2,
                               [](std::size_t i) {
                                 if (i == 7) throw NumericError("boom");
                               }),
                  NumericError);
}

TEST_CASE("noiseless run from the origin fails every path") {
  ExperimentConfig c = small_config();
  c.model = make_model(SymMatrix{{2.0}}, 0.0, 0.45);
  c.schedule = {{10.0, 256, std::nullopt}};
  c.mc_paths = 5;
  const MCReport r = run_mc(c);
  CHECK(r.cells[0].failures == 5);
  CHECK(r.cells[0].failed);
  CHECK_FALSE(r.warnings.empty());
  for (const auto& s : r.cells[0].samples) CHECK_FALSE(s.has_value());
}

TEST_CASE("noiseless run from a displaced start recovers the drift up to the Euler bias") {
  ExperimentConfig c = small_config();
  c.model = make_model(SymMatrix{{2.0}}, 0.0, 0.45, {1.0});
  c.schedule = {{10.0, 4096, std::nullopt}};
  c.mc_paths = 1;
  c.substeps = 1;
  const MCReport r = run_mc(c);
  const double h = 10.0 / 4096;
  CHECK(std::abs(r.cells[0].mean(0, 0) - 2.0) <= 4.0 * h);
  CHECK(r.cells[0].std(0, 0) == 0.0);
}

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(R"({"preset": "table2", "mc_paths": 10, "seed": 5,
      "schedule": [{"T": 12.5, "n": 100, "hurst": 0.4}], "outputs": "x", "threads": 2, "beta": 0.3})");
  CHECK(c.mode == Mode::table2);
  CHECK(c.model.d == 2);
  CHECK(c.mc_paths == 10);
  CHECK(c.seed == 5);
  CHECK(c.schedule.size() == 1);
  CHECK(c.schedule[0].horizon == 12.5);
  CHECK(*c.schedule[0].hurst == 0.4);
  CHECK(c.outputs == "x");
  CHECK(c.threads == 2);
  CHECK(c.beta == 0.3);

  const ExperimentConfig back = parse_config(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.model.gamma.matrix() == c.model.gamma.matrix());

  const ModelSpec m = parse_model(R"({"gamma": [[2.0]], "sigma": 0.5, "hurst": 0.4, "x0": [1.5]})");
  CHECK(m.sigma == 0.5);
  CHECK(initial_state(m) == std::vector<double>{1.5});
  CHECK(parse_model(model_to_json(m)).x0 == m.x0);

  for (const char* bad : {"[]", "{", R"({"mc_paths": 0})", R"({"mc_paths": -3})", R"({"seed": -1})",
                          R"({"wat": 1})", R"({"preset": 3})", R"({"schedule": [{"T": 1}]})",
                          R"({"schedule": [{"T": -1, "n": 10}]})",
                          R"({"beta": 1.5})", R"({"mode": "histogram"})", R"({"substeps": 0})",
                          R"({"model": {"gamma": [[1, 2], [3, 4]], "sigma": 1, "hurst": 0.4}})",
                          R"({"model": {"gamma": [[1]], "sigma": 1, "hurst": 0.4, "d": 2}})"})
    CHECK_THROWS_AS(parse_config(bad), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"schedule": [{"T": 1, "n": 10, "hurst": 0.7}]})"), DomainError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"gamma": [[1]], "sigma": 1, "hurst": 0.2}})"), DomainError);

  TempDir tmp("roughou_test_config");
  CHECK_THROWS_AS(load_config(tmp.path / "missing.json"), ValidationError);
  std::filesystem::create_directories(tmp.path);
  std::ofstream(tmp.path / "c.json") << config_to_json(c);
  CHECK(config_to_json(load_config(tmp.path / "c.json")) == config_to_json(c));
  CHECK(parse_mode("freq_sweep") == Mode::freq_sweep);
  CHECK(mode_name(Mode::boxplot) == "boxplot");
}

TEST_CASE("schedule warnings") {
  ExperimentConfig c = small_config();
  c.schedule = {{1.0, 1 << 16, std::nullopt}};
  c.mc_paths = 1;
  c.substeps = 1;
  const MCReport r = run_mc(c);
  CHECK(r.cells[0].schedule.ok);
  CHECK(r.warnings.empty());
}

TEST_CASE("boxplot and frequency sweep files") {
  TempDir tmp("roughou_test_files");
  ExperimentConfig c = small_config();
  c.mc_paths = 3;
  c.mode = Mode::boxplot;
  MCReport r = run_mc(c);
  auto files = emit_outputs(r, tmp.path / "box");
  CHECK(files.size() == 3);
  const auto box = lines(slurp(tmp.path / "box" / "boxplot.csv"));
  CHECK(box.front() == "H,T,n,path,entry_i,entry_j,gamma_hat");
  CHECK(box.size() == 1 + 2 * 3 * 4);

  c.mode = Mode::freq_sweep;
  r = run_mc(c);
  files = emit_outputs(r, tmp.path / "fs");
  const auto fs = lines(slurp(tmp.path / "fs" / "freq_sweep.csv"));
  CHECK(fs.size() == 3);
  CHECK(fs[1].find(",1,2,") != std::string::npos);

  const auto manifest = nlohmann::json::parse(slurp(tmp.path / "fs" / "manifest.json"));
  CHECK(manifest.at("seed") == 7);
  CHECK(manifest.at("cells").size() == 2);
  CHECK(manifest.at("files").size() == 3);
  CHECK(manifest.at("config").at("mode") == "freq_sweep");
  CHECK(manifest.contains("kernel_backend"));
  CHECK(manifest.contains("version"));
}

TEST_CASE("diagnostics battery for H = 1/2") {
  ExperimentConfig c;
  c.model = make_model(SymMatrix{{2.0}}, 1.0, 0.5);
  c.schedule = {{40.0, 16384, std::nullopt}};
  c.mc_paths = 60;
  c.mode = Mode::diagnostics;
  const DiagnosticsReport r = diagnostics(c);
  CHECK(r.checks.size() == 6);
  for (const auto& k : r.checks) {
    INFO(k.name << " measured " << k.measured << " threshold " << k.threshold);
    CHECK(k.pass);
  }
  CHECK(r.all_passed());
  const auto j = nlohmann::json::parse(diagnostics_json(r));
  CHECK(j.at("all_passed") == true);
  CHECK(j.at("checks").size() == 6);

  c.schedule.clear();
  CHECK_THROWS_AS(diagnostics(c), ValidationError);
}

TEST_CASE("Holder slope of a Brownian path") {
  const SampleGrid g(40.0, 16384);
  const CirculantFbmSampler s(0.5, g);
  double total = 0.0;
  for (std::uint64_t p = 0; p < 5; ++p) total += holder_slope(s.sample(1, 3, p));
  CHECK(std::abs(total / 5 - 0.5) < 0.05);
  CHECK_THROWS_AS(holder_slope(s.sample(1, 3, 0).subsample(512)), ValidationError);
}
