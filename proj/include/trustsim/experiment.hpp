#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "trustsim/metrics.hpp"
#include "trustsim/sim_engine.hpp"

namespace trustsim {

inline constexpr const char* kVersion = "1.0.0";

/// Validation or parse failure, message prefixed with the offending path
/// (file path and/or JSON pointer to the field).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::vector<std::string> scenarios = scenario_names();
  std::vector<ModelKind> models{kAllModels.begin(), kAllModels.end()};
  int runs_per_cell = 100;
  std::uint64_t base_seed = 1;
  double robot_mix = 0.5;
  SimConfig sim;
  std::filesystem::path output_dir = "results";
  bool step_log = false;

  /// Throws ConfigError.
  void validate() const;
};

/// Reads a JSON config; omitted fields take the defaults above. An empty
/// file yields the full default grid.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const nlohmann::json& doc, const std::string& origin = "config");

/// Serialises every setting that influences results (output location excluded).
nlohmann::json config_echo(const ExperimentConfig& cfg);

struct RunRow {
  std::string scenario;
  std::string model;
  int run = 0;
  std::uint64_t seed = 0;
  double tsr = 0.0;
  std::optional<double> act;
  int completed = 0;
  int total = 0;
  int steps = 0;
  std::optional<std::string> error;  // set when the episode aborted
};

struct CellSummary {
  std::string scenario;
  std::string model;
  SummaryStats tsr;
  std::optional<SummaryStats> act;
  int failed_runs = 0;
};

struct ExperimentReport {
  nlohmann::json config;
  std::string version = kVersion;
  std::vector<CellSummary> cells;
  std::vector<RunRow> runs;
  double wall_seconds = 0.0;
};

/// Seed of run `run` in a cell: base + FNV-1a("scenario/model") + run, mod 2^64.
std::uint64_t cell_seed(std::uint64_t base_seed, const std::string& scenario,
                        ModelKind model, int run);

using ProgressSink = std::function<void(std::size_t done, std::size_t total)>;

/// Runs the scenario x model x run grid on `jobs` worker threads. Output is
/// independent of `jobs`.
ExperimentReport run_experiment(const ExperimentConfig& cfg, int jobs = 1,
                                const ProgressSink& progress = {});

/// Summaries per (scenario, model), in first-appearance order of the rows.
std::vector<CellSummary> summarize_rows(const std::vector<RunRow>& rows);

inline constexpr const char* kRunsCsvHeader =
    "scenario,model,run,seed,tsr,act,completed,total,steps";

std::string runs_csv(const std::vector<RunRow>& rows);
nlohmann::json cells_json(const std::vector<CellSummary>& cells);
nlohmann::json summary_json(const ExperimentReport& report);

/// Writes runs.csv and summary.json into `dir`, creating it if needed.
void emit_outputs(const ExperimentReport& report, const std::filesystem::path& dir);

/// Parses a runs.csv produced by emit_outputs. Throws ConfigError.
std::vector<RunRow> read_runs_csv(const std::filesystem::path& path);

/// One JSON object for the step log.
nlohmann::json step_record_json(const StepRecord& rec);

}  // namespace trustsim
