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

#include "roughou/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "csv_util.hpp"
#include "json.hpp"
#include "roughou/errors.hpp"
#include "roughou/kernels.hpp"
#include "roughou/rng.hpp"

namespace roughou {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<ScheduleCell> grid_schedule(std::initializer_list<double> horizons, std::initializer_list<std::size_t> steps,
                                        std::initializer_list<double> hursts) {
  std::vector<ScheduleCell> out;
  for (double t : horizons)
    for (std::size_t n : steps)
      for (double h : hursts) out.push_back({t, n, h});
  return out;
}

double json_number(const json& j, const char* key) {
  if (!j.is_number()) throw ValidationError(std::string("config: '") + key + "' must be a number");
  return j.get<double>();
}

std::size_t json_count(const json& j, const char* key) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw ValidationError(std::string("config: '") + key + "' must be a non-negative integer");
  return j.get<std::size_t>();
}

ModelSpec model_from(const json& j) {
  if (!j.is_object()) throw ValidationError("config: 'model' must be an object");
  if (!j.contains("gamma") || !j["gamma"].is_array()) throw ValidationError("config: model.gamma must be a matrix");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j["gamma"]) {
    if (!row.is_array()) throw ValidationError("config: model.gamma must be an array of rows");
    std::vector<double> r;
    for (const auto& v : row) r.push_back(json_number(v, "gamma"));
    rows.push_back(std::move(r));
  }
  const double sigma = j.contains("sigma") ? json_number(j["sigma"], "sigma") : 1.0;
  const double hurst = j.contains("hurst") ? json_number(j["hurst"], "hurst") : 0.5;
  std::vector<double> x0;
  if (j.contains("x0")) {
    if (!j["x0"].is_array()) throw ValidationError("config: model.x0 must be an array");
    for (const auto& v : j["x0"]) x0.push_back(json_number(v, "x0"));
  }
  ModelSpec m = make_model(SymMatrix(Matrix::from_rows(rows)), sigma, hurst, std::move(x0));
  if (j.contains("d") && json_count(j["d"], "d") != m.d) throw ValidationError("config: model.d does not match gamma");
  return m;
}

json model_json(const ModelSpec& m) {
  json j;
  j["d"] = m.d;
  j["gamma"] = m.gamma.matrix().to_rows();
  j["sigma"] = m.sigma;
  j["hurst"] = m.hurst;
  if (!m.x0.empty()) j["x0"] = m.x0;
  return j;
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["model"] = model_json(c.model);
  j["schedule"] = json::array();
  for (const auto& cell : c.schedule) {
    json s{{"T", cell.horizon}, {"n", cell.steps}};
    if (cell.hurst) s["hurst"] = *cell.hurst;
    j["schedule"].push_back(s);
  }
  j["mc_paths"] = c.mc_paths;
  j["seed"] = c.seed;
  j["substeps"] = c.substeps;
  j["outputs"] = c.outputs.string();
  j["mode"] = std::string(mode_name(c.mode));
  j["threads"] = c.threads;
  j["beta"] = c.beta;
  return j;
}

json parse_json(std::string_view text, const std::string& where) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(where + ": invalid JSON: " + e.what());
  }
}

std::string read_file(const std::filesystem::path& file) {
  auto in = detail::open_input(file);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Matrix mean_of(const std::vector<Matrix>& items) {
  const std::size_t r = items.front().rows(), c = items.front().cols();
  Matrix out(r, c);
  std::vector<double> column(items.size());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      for (std::size_t k = 0; k < items.size(); ++k) column[k] = items[k](i, j);
      out(i, j) = pairwise_sum(column) / static_cast<double>(items.size());
    }
  return out;
}

double relative_entry_error(const Matrix& measured, const Matrix& target) {
  const double scale = target.max_abs();
  double worst = 0.0;
  for (std::size_t i = 0; i < target.rows(); ++i)
    for (std::size_t j = 0; j < target.cols(); ++j) {
      const double ref = std::abs(target(i, j)) >= 1e-3 * scale ? std::abs(target(i, j)) : scale;
      worst = std::max(worst, std::abs(measured(i, j) - target(i, j)) / ref);
    }
  return worst;
}

std::string cell_label(const std::string& base, double hurst, double horizon, std::size_t steps) {
  std::ostringstream os;
  os << base << " (H=" << hurst << ", T=" << horizon << ", n=" << steps << ")";
  return os.str();
}

struct PathLifts {
  SimulatedPath sim;
  PathMatrix coarse;
  LiftedPath strat;
  LiftedPath ito;
};

PathLifts lifts_for(const PathPipeline& p, std::uint64_t seed, std::uint64_t index) {
  SimulatedPath sim = simulate_path(p.model, p.sampler, seed, index);
  PathMatrix coarse = p.substeps == 1 ? sim.path : sim.path.subsample(p.substeps);
  LiftedPath strat = strat_lift(sim.path, p.substeps);
  LiftedPath ito = to_ito_lift(strat, p.table, p.model.sigma);
  return {std::move(sim), std::move(coarse), std::move(strat), std::move(ito)};
}

}  // namespace

std::string_view mode_name(Mode m) noexcept {
  switch (m) {
    case Mode::table1: return "table1";
    case Mode::table2: return "table2";
    case Mode::boxplot: return "boxplot";
    case Mode::freq_sweep: return "freq_sweep";
    case Mode::diagnostics: return "diagnostics";
  }
  return "table1";
}

Mode parse_mode(std::string_view s) {
  for (Mode m : {Mode::table1, Mode::table2, Mode::boxplot, Mode::freq_sweep, Mode::diagnostics})
    if (mode_name(m) == s) return m;
  throw ValidationError("unknown mode '" + std::string(s) + "'");
}

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig c;
  const SymMatrix scalar_gamma(Matrix{{2.0}});
  const SymMatrix matrix_gamma(Matrix{{1.0, 2.0}, {2.0, 5.0}});
  if (name == "table1") {
    c.model = make_model(scalar_gamma, 1.0, 0.5);
    c.schedule = grid_schedule({20.0, 30.0, 40.0}, {1024, 2048, 4096}, {0.50, 0.45, 0.40, 0.35});
    c.mc_paths = 200;
    c.substeps = 1;
    c.mode = Mode::table1;
  } else if (name == "table2") {
    c.model = make_model(matrix_gamma, 1.0, 0.45);
    c.schedule = {{20.0, 2048, 0.50}, {30.0, 4096, 0.50}, {40.0, 8192, 0.50},
                  {13.0, 2048, 0.45}, {22.0, 4096, 0.45}, {40.0, 8192, 0.45},
                  {14.0, 2048, 0.40}, {20.0, 4096, 0.40}, {35.0, 8192, 0.40},
                  {14.0, 2048, 0.35}, {20.0, 4096, 0.35}, {30.0, 8192, 0.35}};
    c.mc_paths = 100;
    c.substeps = 1;
    c.mode = Mode::table2;
  } else if (name == "boxplot") {
    c.model = make_model(scalar_gamma, 1.0, 0.5);
    c.schedule = grid_schedule({80.0}, {8192}, {0.35, 0.40, 0.45, 0.50});
    c.mc_paths = 200;
    c.substeps = 1;
    c.mode = Mode::boxplot;
  } else if (name == "freq_sweep") {
    c.model = make_model(matrix_gamma, 1.0, 0.45);
    c.schedule = grid_schedule({40.0}, {256, 512, 1024, 2048, 4096, 8192, 16384}, {0.35, 0.40, 0.45, 0.50});
    c.mc_paths = 100;
    c.substeps = 1;
    c.mode = Mode::freq_sweep;
  } else if (name == "diagnostics") {
    c.model = make_model(scalar_gamma, 1.0, 0.4);
    c.schedule = {{10.0, 16384, std::nullopt}};
    c.mc_paths = 1000;
    c.substeps = 1;
    c.mode = Mode::diagnostics;
  } else {
    throw ValidationError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

void validate_config(const ExperimentConfig& c) {
  validate_model(c.model);
  if (c.mc_paths < 1) throw ValidationError("mc_paths must be at least 1");
  if (c.substeps < 1) throw ValidationError("substeps must be at least 1");
  if (!(c.beta > 0.0 && c.beta < 1.0)) throw ValidationError("beta must lie in (0, 1)");
  for (const auto& cell : c.schedule) {
    if (!(cell.horizon > 0.0) || !std::isfinite(cell.horizon)) throw ValidationError("schedule T must be positive");
    if (cell.steps < 1) throw ValidationError("schedule n must be at least 1");
    if (cell.hurst) require_hurst(*cell.hurst);
  }
}

ExperimentConfig parse_config(std::string_view text) {
  const json j = parse_json(text, "config");
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  ExperimentConfig c;
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) throw ValidationError("config: 'preset' must be a string");
    c = preset_config(j["preset"].get<std::string>());
  } else {
    c.model = make_model(SymMatrix(Matrix{{1.0}}), 1.0, 0.5);
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "preset") continue;
    if (key == "model") {
      c.model = model_from(value);
    } else if (key == "schedule") {
      if (!value.is_array()) throw ValidationError("config: 'schedule' must be an array");
      c.schedule.clear();
      for (const auto& s : value) {
        if (!s.is_object() || !s.contains("T") || !s.contains("n"))
          throw ValidationError("config: schedule entries need 'T' and 'n'");
        ScheduleCell cell{json_number(s["T"], "T"), json_count(s["n"], "n"), std::nullopt};
        if (s.contains("hurst")) cell.hurst = json_number(s["hurst"], "hurst");
        c.schedule.push_back(cell);
      }
    } else if (key == "mc_paths") {
      c.mc_paths = json_count(value, "mc_paths");
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
        throw ValidationError("config: 'seed' must be a non-negative integer");
      c.seed = value.get<std::uint64_t>();
    } else if (key == "substeps") {
      c.substeps = json_count(value, "substeps");
    } else if (key == "outputs") {
      if (!value.is_string()) throw ValidationError("config: 'outputs' must be a string");
      c.outputs = value.get<std::string>();
    } else if (key == "mode") {
      if (!value.is_string()) throw ValidationError("config: 'mode' must be a string");
      c.mode = parse_mode(value.get<std::string>());
    } else if (key == "threads") {
      c.threads = json_count(value, "threads");
    } else if (key == "beta") {
      c.beta = json_number(value, "beta");
    } else {
      throw ValidationError("config: unknown key '" + key + "'");
    }
  }
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  try {
    return parse_config(read_file(file));
  } catch (const ValidationError& e) {
    throw ValidationError(file.string() + ": " + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

ModelSpec parse_model(std::string_view text) { return model_from(parse_json(text, "model")); }

std::string model_to_json(const ModelSpec& model) { return model_json(model).dump(2); }

std::size_t resolve_threads(std::size_t requested) noexcept {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(resolve_threads(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

SampleStats sample_stats(std::span<const double> values) {
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  const double mean = pairwise_sum(values) / static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  return {mean, std::sqrt(pairwise_sum(sq) / static_cast<double>(values.size() - 1))};
}

std::uint64_t cell_seed(std::uint64_t experiment_seed, std::size_t cell) noexcept {
  return splitmix64(experiment_seed ^ splitmix64(static_cast<std::uint64_t>(cell) + 1));
}

ModelSpec model_for_cell(const ModelSpec& model, const ScheduleCell& cell) {
  ModelSpec m = model;
  if (cell.hurst) m.hurst = *cell.hurst;
  validate_model(m);
  return m;
}

SimulatedPath simulate_path(const ModelSpec& model, const CirculantFbmSampler& sampler, std::uint64_t seed,
                            std::uint64_t index) {
  PathMatrix driver = sampler.sample(model.d, seed, index);
  PathMatrix path = euler_simulate(model, sampler.grid(), driver);
  return {std::move(driver), std::move(path)};
}

PathPipeline::PathPipeline(const ModelSpec& m, double horizon, std::size_t steps, std::size_t sub)
    : model(m),
      coarse(horizon, steps),
      substeps(sub),
      sampler(m.hurst, SampleGrid(horizon, steps).refined(sub)),
      table(m.gamma, m.hurst, SampleGrid(horizon, steps)) {}

EstimationResult PathPipeline::run(std::uint64_t seed, std::uint64_t index) const {
  const PathLifts l = lifts_for(*this, seed, index);
  return estimate_discrete(l.ito, l.coarse);
}

MCReport run_mc(const ExperimentConfig& config) {
  validate_config(config);
  MCReport report{config, {}, {}};
  for (std::size_t c = 0; c < config.schedule.size(); ++c) {
    const auto start = std::chrono::steady_clock::now();
    const ScheduleCell& cell = config.schedule[c];
    const ModelSpec model = model_for_cell(config.model, cell);
    CellReport r;
    r.cell = cell;
    r.hurst = model.hurst;
    r.seed = cell_seed(config.seed, c);
    r.mc_paths = config.mc_paths;
    r.schedule = check_schedule(cell.horizon, cell.steps, model.hurst, config.beta);
    if (!r.schedule.ok)
      report.warnings.push_back(cell_label("schedule outside the high-frequency regime, n h^p = " +
                                               detail::format_double(r.schedule.value),
                                           model.hurst, cell.horizon, cell.steps));

    const PathPipeline pipeline(model, cell.horizon, cell.steps, config.substeps);
    r.samples.assign(config.mc_paths, std::nullopt);
    parallel_for(config.mc_paths, config.threads, [&](std::size_t p) {
      try {
        r.samples[p] = pipeline.run(r.seed, p).gamma_hat;
      } catch (const EstimationError&) {
        r.samples[p] = std::nullopt;
      }
    });

    const std::size_t d = model.d;
    std::vector<std::vector<double>> entries(d * d);
    for (const auto& s : r.samples) {
      if (!s) {
        ++r.failures;
        continue;
      }
      for (std::size_t k = 0; k < d * d; ++k) entries[k].push_back((*s)(k / d, k % d));
    }
    r.failed = r.failures * 100 > config.mc_paths;
    if (r.failures > 0)
      report.warnings.push_back(cell_label(std::to_string(r.failures) + " of " + std::to_string(config.mc_paths) +
                                               " paths had a singular Gram matrix",
                                           model.hurst, cell.horizon, cell.steps));
    r.mean = Matrix(d, d);
    r.std = Matrix(d, d);
    for (std::size_t k = 0; k < d * d; ++k) {
      const SampleStats s = sample_stats(entries[k]);
      r.mean(k / d, k % d) = s.mean;
      r.std(k / d, k % d) = s.std;
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.cells.push_back(std::move(r));
  }
  return report;
}

bool DiagnosticsReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

CheckResult check_chen_defect(const ModelSpec& model, double horizon, std::size_t steps, std::size_t paths,
                              std::uint64_t seed, std::size_t substeps) {
  const PathPipeline pipeline(model, horizon, steps, substeps);
  double worst = 0.0;
  for (std::size_t p = 0; p < paths; ++p) {
    const PathLifts l = lifts_for(pipeline, seed, p);
    for (const LiftedPath* lift : {&l.strat, &l.ito}) {
      const double scale = chen_scale(*lift);
      const double defect = check_chen(*lift);
      worst = std::max(worst, scale > 0.0 ? defect / scale : defect);
    }
  }
  return {cell_label("chen_defect", model.hurst, horizon, steps), worst, 1e-12, worst <= 1e-12};
}

CheckResult check_zero_expectation(const ModelSpec& model, double horizon, std::size_t steps, std::size_t paths,
                                   std::uint64_t seed, std::size_t threads) {
  const PathPipeline pipeline(model, horizon, steps, 1);
  std::vector<Matrix> values(paths);
  parallel_for(paths, threads, [&](std::size_t p) {
    const SimulatedPath sim = simulate_path(model, pipeline.sampler, seed, p);
    const CrossLift cross = to_ito_cross(cross_lift(sim.path, sim.driver, 1), pipeline.table, model.sigma);
    values[p] = model.sigma * noise_integral(sim.path, sim.driver, cross);
  });
  const std::size_t d = model.d;
  double worst = 0.0;
  std::vector<double> column(paths);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t p = 0; p < paths; ++p) column[p] = values[p](i, j);
      const SampleStats s = sample_stats(column);
      const double stderr_ = s.std / std::sqrt(static_cast<double>(paths));
      worst = std::max(worst, stderr_ > 0.0 ? std::abs(s.mean) / stderr_ : std::abs(s.mean));
    }
  return {cell_label("zero_expectation |mean|/stderr", model.hurst, horizon, steps), worst, 3.0, worst < 3.0};
}

namespace {

struct ErgodicSample {
  Matrix gram;
  Matrix numerator;
  Matrix strat_total;
};

std::vector<ErgodicSample> ergodic_samples(const ModelSpec& model, double horizon, std::size_t steps,
                                           std::size_t paths, std::uint64_t seed, std::size_t threads) {
  const PathPipeline pipeline(model, horizon, steps, 1);
  std::vector<ErgodicSample> out(paths);
  parallel_for(paths, threads, [&](std::size_t p) {
    const PathLifts l = lifts_for(pipeline, seed, p);
    const EstimationResult e = estimate_discrete(l.ito, l.coarse);
    out[p] = {(1.0 / horizon) * e.denominator, (1.0 / horizon) * e.numerator,
              (1.0 / horizon) * l.strat.running_area(l.strat.intervals())};
  });
  return out;
}

}  // namespace

CheckResult check_c1_convergence(const ModelSpec& model, double horizon, std::size_t steps, std::size_t paths,
                                 std::uint64_t seed, std::size_t threads, double tolerance) {
  std::vector<Matrix> grams;
  for (auto& s : ergodic_samples(model, horizon, steps, paths, seed, threads)) grams.push_back(std::move(s.gram));
  const double err = relative_entry_error(mean_of(grams), c1_limit(model));
  return {cell_label("c1_relative_error", model.hurst, horizon, steps), err, tolerance, err <= tolerance};
}

CheckResult check_c2_convergence(const ModelSpec& model, double horizon, std::size_t steps, std::size_t paths,
                                 std::uint64_t seed, std::size_t threads, double tolerance) {
  std::vector<Matrix> nums;
  for (auto& s : ergodic_samples(model, horizon, steps, paths, seed, threads)) nums.push_back(std::move(s.numerator));
  const double err = relative_entry_error(mean_of(nums), c2_limit(model));
  return {cell_label("c2_relative_error", model.hurst, horizon, steps), err, tolerance, err <= tolerance};
}

CheckResult check_strat_area_decay(const ModelSpec& model, double horizon, std::size_t steps, std::size_t paths,
                                   std::uint64_t seed, std::size_t threads) {
  std::vector<Matrix> areas;
  for (auto& s : ergodic_samples(model, horizon, steps, paths, seed, threads))
    areas.push_back(std::move(s.strat_total));
  const double measured = mean_of(areas).max_abs();
  const double threshold = 0.1 * c1_limit(model).max_abs();
  return {cell_label("strat_area_over_T", model.hurst, horizon, steps), measured, threshold, measured < threshold};
}

double holder_slope(const PathMatrix& path, std::size_t max_level) {
  const std::size_t n = path.grid().steps();
  const std::size_t count = n >> max_level;
  if (max_level < 1 || count < 1) throw ValidationError("path too short for the requested dyadic lags");
  const double h = path.grid().mesh();
  double total = 0.0;
  for (std::size_t i = 0; i < path.dim(); ++i) {
    const auto x = path.component(i);
    std::vector<double> lx, ly;
    for (std::size_t level = 0; level <= max_level; ++level) {
      const std::size_t lag = std::size_t{1} << level;
      double m = 0.0;
      for (std::size_t q = 0; q < count; ++q) m = std::max(m, std::abs(x[(q + 1) * lag] - x[q * lag]));
      lx.push_back(std::log(static_cast<double>(lag) * h));
      ly.push_back(std::log(m));
    }
    const double k = static_cast<double>(lx.size());
    const double mx = pairwise_sum(lx) / k;
    const double my = pairwise_sum(ly) / k;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t t = 0; t < lx.size(); ++t) {
      sxy += (lx[t] - mx) * (ly[t] - my);
      sxx += (lx[t] - mx) * (lx[t] - mx);
    }
    total += sxy / sxx;
  }
  return total / static_cast<double>(path.dim());
}

CheckResult check_holder_slope(const ModelSpec& model, double horizon, std::size_t steps, std::size_t paths,
                               std::uint64_t seed) {
  const CirculantFbmSampler sampler(model.hurst, SampleGrid(horizon, steps));
  std::vector<double> slopes(paths);
  for (std::size_t p = 0; p < paths; ++p) slopes[p] = holder_slope(simulate_path(model, sampler, seed, p).path);
  const double slope = pairwise_sum(slopes) / static_cast<double>(paths);
  return {cell_label("holder_slope", model.hurst, horizon, steps), slope, 0.05,
          std::abs(slope - model.hurst) <= 0.05};
}

DiagnosticsReport diagnostics(const ExperimentConfig& config) {
  validate_config(config);
  if (config.schedule.empty()) throw ValidationError("diagnostics needs at least one schedule cell");
  const ScheduleCell& cell = config.schedule.front();
  const ModelSpec model = model_for_cell(config.model, cell);
  const std::uint64_t seed = cell_seed(config.seed, 0);
  const double t = cell.horizon;
  const std::size_t n = cell.steps;
  const std::size_t paths = config.mc_paths;
  DiagnosticsReport r;
  r.checks.push_back(check_chen_defect(model, t, n, std::min<std::size_t>(paths, 5), seed, config.substeps));
  r.checks.push_back(check_zero_expectation(model, t, n, paths, seed ^ 1, config.threads));
  r.checks.push_back(check_c1_convergence(model, t, n, paths, seed ^ 2, config.threads));
  r.checks.push_back(check_c2_convergence(model, t, n, paths, seed ^ 2, config.threads));
  r.checks.push_back(check_strat_area_decay(model, t, n, paths, seed ^ 2, config.threads));
  r.checks.push_back(check_holder_slope(model, t, n, std::min<std::size_t>(paths, 10), seed ^ 3));
  return r;
}

std::string diagnostics_json(const DiagnosticsReport& report) {
  json j;
  j["all_passed"] = report.all_passed();
  j["checks"] = json::array();
  for (const auto& c : report.checks)
    j["checks"].push_back({{"name", c.name}, {"measured", c.measured}, {"threshold", c.threshold}, {"pass", c.pass}});
  return j.dump(2);
}

void write_table_csv(const std::filesystem::path& file, const MCReport& report) {
  auto out = detail::open_output(file);
  out << "H,T,n,h,entry_i,entry_j,mean,std\n";
  for (const auto& c : report.cells) {
    const SampleGrid grid(c.cell.horizon, c.cell.steps);
    for (std::size_t i = 0; i < c.mean.rows(); ++i)
      for (std::size_t j = 0; j < c.mean.cols(); ++j)
        out << detail::format_double(c.hurst) << ',' << detail::format_double(grid.horizon()) << ',' << grid.steps()
            << ',' << detail::format_double(grid.mesh()) << ',' << (i + 1) << ',' << (j + 1) << ','
            << detail::format_double(c.mean(i, j)) << ',' << detail::format_double(c.std(i, j)) << '\n';
  }
  if (!out) throw Error("write failed: " + file.string());
}

void write_boxplot_csv(const std::filesystem::path& file, const MCReport& report) {
  auto out = detail::open_output(file);
  out << "H,T,n,path,entry_i,entry_j,gamma_hat\n";
  for (const auto& c : report.cells)
    for (std::size_t p = 0; p < c.samples.size(); ++p) {
      if (!c.samples[p]) continue;
      const Matrix& g = *c.samples[p];
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
          out << detail::format_double(c.hurst) << ',' << detail::format_double(c.cell.horizon) << ',' << c.cell.steps
              << ',' << p << ',' << (i + 1) << ',' << (j + 1) << ',' << detail::format_double(g(i, j)) << '\n';
    }
  if (!out) throw Error("write failed: " + file.string());
}

void write_freq_sweep_csv(const std::filesystem::path& file, const MCReport& report) {
  auto out = detail::open_output(file);
  out << "H,T,n,h,entry_i,entry_j,mean,std\n";
  for (const auto& c : report.cells) {
    const std::size_t j = c.mean.cols() > 1 ? 1 : 0;
    const SampleGrid grid(c.cell.horizon, c.cell.steps);
    out << detail::format_double(c.hurst) << ',' << detail::format_double(grid.horizon()) << ',' << grid.steps() << ','
        << detail::format_double(grid.mesh()) << ",1," << (j + 1) << ',' << detail::format_double(c.mean(0, j)) << ','
        << detail::format_double(c.std(0, j)) << '\n';
  }
  if (!out) throw Error("write failed: " + file.string());
}

std::vector<std::filesystem::path> emit_outputs(const MCReport& report, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files{dir / "table.csv"};
  write_table_csv(files.back(), report);
  if (report.config.mode == Mode::boxplot) {
    files.push_back(dir / "boxplot.csv");
    write_boxplot_csv(files.back(), report);
  }
  if (report.config.mode == Mode::freq_sweep) {
    files.push_back(dir / "freq_sweep.csv");
    write_freq_sweep_csv(files.back(), report);
  }

  json m;
  m["version"] = kVersion;
  m["seed"] = report.config.seed;
  m["config"] = config_json(report.config);
  m["kernel_backend"] = std::string(kernels::backend_name(kernels::active_backend()));
  m["compiler"] = __VERSION__;
  m["cells"] = json::array();
  for (const auto& c : report.cells)
    m["cells"].push_back({{"H", c.hurst},
                          {"T", c.cell.horizon},
                          {"n", c.cell.steps},
                          {"seed", c.seed},
                          {"mc_paths", c.mc_paths},
                          {"failures", c.failures},
                          {"failed", c.failed},
                          {"schedule_ok", c.schedule.ok},
                          {"n_h_p", c.schedule.value},
                          {"wall_seconds", c.wall_seconds}});
  m["warnings"] = report.warnings;
  files.push_back(dir / "manifest.json");
  json names = json::array();
  for (const auto& f : files) names.push_back(f.filename().string());
  m["files"] = names;
  auto out = detail::open_output(files.back());
  out << m.dump(2) << '\n';
  if (!out) throw Error("write failed: " + files.back().string());
  return files;
}

}  // namespace roughou
