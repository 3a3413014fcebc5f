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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "roughou/errors.hpp"
#include "roughou/estimate.hpp"
#include "roughou/fbm.hpp"
#include "roughou/fou.hpp"
#include "roughou/harness.hpp"
#include "roughou/rough.hpp"

namespace fs = std::filesystem;
using namespace roughou;

namespace {

constexpr int kValidationExit = 2;
constexpr int kDiagnoseExit = 3;

struct ConfigFlags {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> paths;
  std::optional<std::size_t> threads;
  bool full_scale = false;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f, bool mc_flags) {
  cmd->add_option("--config", f.config, "Experiment config JSON file");
  cmd->add_option("--preset", f.preset, "Built-in config: table1, table2, boxplot, freq_sweep, diagnostics");
  cmd->add_option("--seed", f.seed, "Experiment seed (u64)");
  cmd->add_option("--out", f.out, "Output directory");
  if (mc_flags) {
    cmd->add_option("--paths", f.paths, "Monte Carlo paths per cell");
    cmd->add_option("--threads", f.threads, "Worker threads (0: all cores)");
    cmd->add_flag("--full-scale", f.full_scale, "Use 1000 paths per cell");
  }
}

ExperimentConfig resolve(const ConfigFlags& f, const char* fallback_preset) {
  if (!f.config.empty() && !f.preset.empty()) throw ValidationError("give either --config or --preset, not both");
  ExperimentConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  else if (!f.preset.empty()) c = preset_config(f.preset);
  else if (fallback_preset) c = preset_config(fallback_preset);
  else throw ValidationError("--config or --preset is required");
  if (f.full_scale && f.paths) throw ValidationError("--full-scale and --paths are exclusive");
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.outputs = *f.out;
  if (f.paths) c.mc_paths = *f.paths;
  if (f.full_scale) c.mc_paths = kFullScalePaths;
  if (f.threads) c.threads = *f.threads;
  validate_config(c);
  return c;
}

int cmd_simulate(const ConfigFlags& f, std::size_t cell_index) {
  const ExperimentConfig c = resolve(f, "diagnostics");
  if (cell_index >= c.schedule.size()) throw ValidationError("--cell is past the end of the schedule");
  const ScheduleCell& cell = c.schedule[cell_index];
  const PathPipeline pipeline(model_for_cell(c.model, cell), cell.horizon, cell.steps, c.substeps);
  const SimulatedPath sim = simulate_path(pipeline.model, pipeline.sampler, cell_seed(c.seed, cell_index), 0);
  const PathMatrix coarse = c.substeps == 1 ? sim.path : sim.path.subsample(c.substeps);
  const LiftedPath strat = strat_lift(sim.path, c.substeps);
  const LiftedPath ito = to_ito_lift(strat, pipeline.table, pipeline.model.sigma);
  write_path_csv(c.outputs / "driver.csv", sim.driver);
  write_path_csv(c.outputs / "path.csv", coarse);
  write_lift_csv(c.outputs / "lift_stratonovich.csv", strat);
  write_lift_csv(c.outputs / "lift_ito.csv", ito);
  for (const char* name : {"driver.csv", "path.csv", "lift_stratonovich.csv", "lift_ito.csv"})
    std::cout << (c.outputs / name).string() << '\n';
  return 0;
}

int cmd_estimate(const std::string& path_file, const std::string& lift_file, const std::string& out) {
  const PathMatrix path = read_path_csv(path_file, PathKind::fou);
  const LiftedPath lift = read_lift_csv(lift_file, path.initial_state());
  EstimationResult r = [&] {
    if (path.grid() == lift.grid()) return estimate_discrete(lift, path);
    const std::size_t refine = path.grid().steps() / lift.grid().steps();
    return estimate_continuous(lift, path, refine == 0 ? 1 : refine);
  }();
  const std::string text = result_json(r);
  if (out.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream os(out);
    if (!(os << text << '\n')) throw Error("cannot write " + out);
  }
  return 0;
}

int print_diagnostics(const ExperimentConfig& c) {
  const DiagnosticsReport r = diagnostics(c);
  for (const auto& check : r.checks)
    std::printf("%s  %s  measured=%.6g threshold=%.6g\n", check.pass ? "PASS" : "FAIL", check.name.c_str(),
                check.measured, check.threshold);
  fs::create_directories(c.outputs);
  std::ofstream os(c.outputs / "diagnostics.json");
  os << diagnostics_json(r) << '\n';
  return r.all_passed() ? 0 : kDiagnoseExit;
}

int cmd_mc(const ConfigFlags& f) {
  const ExperimentConfig c = resolve(f, nullptr);
  if (c.mode == Mode::diagnostics) return print_diagnostics(c);
  const MCReport report = run_mc(c);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& cell : report.cells) {
    std::printf("H=%.2f T=%g n=%zu paths=%zu failures=%zu  mean=", cell.hurst, cell.cell.horizon, cell.cell.steps,
                cell.mc_paths, cell.failures);
    for (double v : cell.mean.data()) std::printf(" %.4f", v);
    std::printf("  std=");
    for (double v : cell.std.data()) std::printf(" %.4f", v);
    std::printf("\n");
  }
  for (const auto& file : emit_outputs(report, c.outputs)) std::cout << file.string() << '\n';
  for (const auto& cell : report.cells)
    if (cell.failed) return 1;
  return 0;
}

int cmd_phi(const std::string& gamma_text, const std::string& model_file, double hurst, double horizon,
            std::size_t steps, const std::string& out) {
  SymMatrix gamma;
  if (!model_file.empty()) {
    gamma = load_config(model_file).model.gamma;
  } else {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(gamma_text);
      gamma = SymMatrix(Matrix::from_rows(j.get<std::vector<std::vector<double>>>()));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("--gamma must be a JSON matrix: ") + e.what());
    }
  }
  const SampleGrid grid(horizon, steps);
  const CorrectionTable table(gamma, hurst, grid);
  std::ofstream file;
  if (!out.empty()) {
    const fs::path p(out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    file.open(p);
    if (!file) throw Error("cannot write " + out);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  const std::size_t d = table.dim();
  os << 't';
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) os << ",phi" << (i + 1) << (j + 1);
  os << '\n';
  char buf[32];
  for (std::size_t l = 0; l <= steps; ++l) {
    std::snprintf(buf, sizeof buf, "%.17g", grid.time(l));
    os << buf;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", table.phi(i, j, l));
        os << ',' << buf;
      }
    os << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rough path drift estimation for fractional Ornstein-Uhlenbeck processes"};
  app.require_subcommand(1);

  ConfigFlags sim_flags, mc_flags, diag_flags;
  std::size_t cell_index = 0;
  auto* simulate = app.add_subcommand("simulate", "Simulate one path and write the path and lift CSVs");
  add_config_flags(simulate, sim_flags, false);
  simulate->add_option("--cell", cell_index, "Schedule cell to simulate");

  std::string path_file, lift_file, est_out;
  auto* estimate = app.add_subcommand("estimate", "Estimate the drift from a path CSV and an Itô lift CSV");
  estimate->add_option("--path", path_file, "Path CSV (t,x1..xd)")->required();
  estimate->add_option("--lift", lift_file, "Lift CSV (l,t,dX..,A..,flavor)")->required();
  estimate->add_option("--out", est_out, "Result JSON file (default: stdout)");

  auto* mc = app.add_subcommand("mc", "Run a Monte Carlo experiment and write the report CSVs");
  add_config_flags(mc, mc_flags, true);

  auto* diagnose = app.add_subcommand("diagnose", "Run the diagnostics battery");
  add_config_flags(diagnose, diag_flags, true);

  std::string gamma_text = "[[1]]", phi_model, phi_out;
  double phi_hurst = 0.5, phi_horizon = 1.0;
  std::size_t phi_steps = 10;
  auto* phi = app.add_subcommand("phi", "Tabulate the Itô correction on a grid");
  phi->add_option("--gamma", gamma_text, "Drift matrix as JSON, e.g. [[1,2],[2,5]]");
  phi->add_option("--config", phi_model, "Take the drift matrix from a config file");
  phi->add_option("--hurst", phi_hurst, "Hurst parameter");
  phi->add_option("--T", phi_horizon, "Horizon");
  phi->add_option("--n", phi_steps, "Grid intervals");
  phi->add_option("--out", phi_out, "CSV file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kValidationExit;
  }

  try {
    if (*simulate) return cmd_simulate(sim_flags, cell_index);
    if (*estimate) return cmd_estimate(path_file, lift_file, est_out);
    if (*mc) return cmd_mc(mc_flags);
    if (*diagnose) {
      const ExperimentConfig c = resolve(diag_flags, "diagnostics");
      return print_diagnostics(c);
    }
    if (*phi) return cmd_phi(gamma_text, phi_model, phi_hurst, phi_horizon, phi_steps, phi_out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationExit;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationExit;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationExit;
  } catch (const FlavorError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
