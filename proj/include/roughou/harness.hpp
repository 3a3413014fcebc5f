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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roughou/estimate.hpp"
#include "roughou/fbm.hpp"
#include "roughou/fou.hpp"
#include "roughou/matrix.hpp"
#include "roughou/rough.hpp"

namespace roughou {

enum class Mode { table1, table2, boxplot, freq_sweep, diagnostics };

std::string_view mode_name(Mode m) noexcept;
Mode parse_mode(std::string_view s);

/// One (T, n) cell; `hurst` overrides the model's H for this cell.
struct ScheduleCell {
  double horizon = 0.0;
  std::size_t steps = 0;
  std::optional<double> hurst;
};

struct ExperimentConfig {
  ModelSpec model;
  std::vector<ScheduleCell> schedule;
  std::size_t mc_paths = 200;
  std::uint64_t seed = 20260101;
  std::size_t substeps = 8;
  std::filesystem::path outputs = "out";
  Mode mode = Mode::table1;
  std::size_t threads = 0;  // 0: one per hardware thread
  double beta = 0.5;
};

/// Paths used by `full_scale`.
inline constexpr std::size_t kFullScalePaths = 1000;

/// Presets: "table1", "table2", "boxplot", "freq_sweep", "diagnostics".
ExperimentConfig preset_config(std::string_view name);

/// Throws ValidationError on malformed or inconsistent configuration.
void validate_config(const ExperimentConfig& config);

/// JSON form: {"preset"?, "model": {"gamma", "sigma", "hurst", "x0"?},
/// "schedule": [{"T", "n", "hurst"?}], "mc_paths", "seed", "substeps",
/// "outputs", "mode", "threads", "beta"}. Keys absent from the document keep
/// the preset's (or the default) value.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& file);
std::string config_to_json(const ExperimentConfig& config);

ModelSpec parse_model(std::string_view json_text);
std::string model_to_json(const ModelSpec& model);

/// Worker count actually used for `requested` (0 means hardware concurrency).
std::size_t resolve_threads(std::size_t requested) noexcept;

/// Runs fn(i) for i in [0, count) on `threads` workers. Results land at their
/// own index, so the output does not depend on scheduling.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

/// Pairwise (tree) summation; the association order depends only on the length.
double pairwise_sum(std::span<const double> values);

struct SampleStats {
  double mean;
  double std;  // sample standard deviation, n - 1 denominator; 0 for one value
};
SampleStats sample_stats(std::span<const double> values);

/// Seed of schedule cell `cell` within an experiment.
std::uint64_t cell_seed(std::uint64_t experiment_seed, std::size_t cell) noexcept;

/// Model with H replaced, as used for a schedule cell.
ModelSpec model_for_cell(const ModelSpec& model, const ScheduleCell& cell);

struct SimulatedPath {
  PathMatrix driver;  // fBM on the fine grid
  PathMatrix path;    // fOU on the fine grid
};

/// fBM from `sampler` (path index `index` of stream `seed`) and its Euler fOU.
SimulatedPath simulate_path(const ModelSpec& model, const CirculantFbmSampler& sampler, std::uint64_t seed,
                            std::uint64_t index);

/// One full pipeline: fBM, Euler fOU on T/(n·substeps), Stratonovich lift
/// composed onto T/n, Itô correction, discrete estimator on the coarse points.
struct PathPipeline {
  PathPipeline(const ModelSpec& model, double horizon, std::size_t steps, std::size_t substeps);

  EstimationResult run(std::uint64_t seed, std::uint64_t index) const;

  ModelSpec model;
  SampleGrid coarse;
  std::size_t substeps;
  CirculantFbmSampler sampler;
  CorrectionTable table;
};

struct CellReport {
  ScheduleCell cell;
  double hurst = 0.0;
  std::uint64_t seed = 0;
  std::size_t mc_paths = 0;
  std::size_t failures = 0;
  bool failed = false;  // more than 1% of paths errored
  Matrix mean;
  Matrix std;
  std::vector<std::optional<Matrix>> samples;  // Γ̂ per path; empty where estimation failed
  ScheduleCheck schedule;
  double wall_seconds = 0.0;
};

struct MCReport {
  ExperimentConfig config;
  std::vector<CellReport> cells;
  std::vector<std::string> warnings;
};

MCReport run_mc(const ExperimentConfig& config);

struct CheckResult {
  std::string name;
  double measured;
  double threshold;
  bool pass;
};

struct DiagnosticsReport {
  std::vector<CheckResult> checks;
  bool all_passed() const noexcept;
};

/// Largest Chen defect relative to the path scale, over the Stratonovich and
/// Itô lifts of `paths` simulated paths. Threshold 1e-12.
CheckResult check_chen_defect(const ModelSpec& model, double horizon, std::size_t steps, std::size_t paths,
                              std::uint64_t seed, std::size_t substeps = 1);

/// Largest |mean| / standard error over the entries of σ∫X⊗d𝐁 in the Itô
/// sense, across `paths` paths. Threshold 3.
CheckResult check_zero_expectation(const ModelSpec& model, double horizon, std::size_t steps, std::size_t paths,
                                   std::uint64_t seed, std::size_t threads = 0);

/// Largest entrywise relative error of the path average of (1/T)∫X⊗X
/// against C1. Entries of C1 below 1e-3 max|C1| are compared against max|C1|.
CheckResult check_c1_convergence(const ModelSpec& model, double horizon, std::size_t steps, std::size_t paths,
                                 std::uint64_t seed, std::size_t threads = 0, double tolerance = 0.10);

/// Same for (1/T)(Itô numerator) against C2 = -Γ C1.
CheckResult check_c2_convergence(const ModelSpec& model, double horizon, std::size_t steps, std::size_t paths,
                                 std::uint64_t seed, std::size_t threads = 0, double tolerance = 0.15);

/// max entry of the path average of (1/T) 𝕏°_{0,T}, against 0.1 max|C1|.
CheckResult check_strat_area_decay(const ModelSpec& model, double horizon, std::size_t steps, std::size_t paths,
                                   std::uint64_t seed, std::size_t threads = 0);

/// Log-log slope of the largest increment against the lag over the dyadic lags
/// 1..64 mesh widths (the same number of disjoint increments at every lag),
/// averaged over paths and components. Passes within H ± 0.05.
CheckResult check_holder_slope(const ModelSpec& model, double horizon, std::size_t steps, std::size_t paths,
                               std::uint64_t seed);

double holder_slope(const PathMatrix& path, std::size_t max_level = 6);

/// Runs every check on the config's model and first schedule cell.
DiagnosticsReport diagnostics(const ExperimentConfig& config);
std::string diagnostics_json(const DiagnosticsReport& report);

/// Writes table.csv (every mode), boxplot.csv (boxplot mode),
/// freq_sweep.csv (freq_sweep mode) and manifest.json into `dir`.
/// Returns the files written.
std::vector<std::filesystem::path> emit_outputs(const MCReport& report, const std::filesystem::path& dir);

void write_table_csv(const std::filesystem::path& file, const MCReport& report);
void write_boxplot_csv(const std::filesystem::path& file, const MCReport& report);
void write_freq_sweep_csv(const std::filesystem::path& file, const MCReport& report);

}  // namespace roughou
