// trustsim: runs the trust-model comparison grid and writes runs.csv /
// summary.json.
//
//   trustsim run --config exp.json [--out DIR] [--jobs N] [--seed U64]
//   trustsim validate --config exp.json
//   trustsim report --runs results/runs.csv [--out summary.json]
//
// TRUSTSIM_OUT_DIR overrides the config's output directory; --out overrides
// both.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "trustsim/experiment.hpp"

namespace {

using trustsim::ExperimentConfig;

void print_table(const std::vector<trustsim::CellSummary>& cells) {
  std::printf("%-8s %-9s %16s %18s\n", "scenario", "model", "TSR", "ACT (s)");
  for (const auto& c : cells) {
    char act[64] = "-";
    if (c.act) std::snprintf(act, sizeof(act), "%.2f +/- %.2f", c.act->mean, c.act->std);
    std::printf("%-8s %-9s %7.3f +/- %5.3f %18s%s\n", c.scenario.c_str(), c.model.c_str(),
                c.tsr.mean, c.tsr.std, act, c.failed_runs ? "  (runs aborted)" : "");
  }
}

int cmd_run(const std::string& config_path, const std::string& out_flag, int jobs,
            const std::optional<std::uint64_t>& seed) {
  ExperimentConfig cfg = trustsim::load_config(config_path);
  if (const char* env = std::getenv("TRUSTSIM_OUT_DIR"); env && *env) cfg.output_dir = env;
  if (!out_flag.empty()) cfg.output_dir = out_flag;
  if (seed) cfg.base_seed = *seed;

  const std::size_t total =
      cfg.scenarios.size() * cfg.models.size() * static_cast<std::size_t>(cfg.runs_per_cell);
  std::fprintf(stderr, "running %zu episodes on %d job(s)\n", total, jobs);
  const auto report = trustsim::run_experiment(cfg, jobs, [](std::size_t done, std::size_t n) {
    if (done == n || done % 100 == 0) std::fprintf(stderr, "\r%zu/%zu", done, n);
    if (done == n) std::fprintf(stderr, "\n");
  });
  trustsim::emit_outputs(report, cfg.output_dir);

  print_table(report.cells);
  std::fprintf(stderr, "wrote %s/runs.csv and summary.json in %.2f s\n",
               cfg.output_dir.string().c_str(), report.wall_seconds);

  for (const auto& c : report.cells) {
    if (c.failed_runs) return 1;
  }
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const ExperimentConfig cfg = trustsim::load_config(config_path);
  std::printf("%s: ok (%zu scenarios x %zu models x %d runs)\n", config_path.c_str(),
              cfg.scenarios.size(), cfg.models.size(), cfg.runs_per_cell);
  return 0;
}

int cmd_report(const std::string& runs_path, const std::string& out_path) {
  const auto rows = trustsim::read_runs_csv(runs_path);
  const auto cells = trustsim::summarize_rows(rows);
  const std::string text = nlohmann::json{{"cells", trustsim::cells_json(cells)}}.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out || !(out << text)) throw std::runtime_error(out_path + ": cannot write");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trust-aware task allocation simulator for multi-human multi-robot teams"};
  app.set_version_flag("--version", std::string(trustsim::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run the scenario x model x run grid");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--jobs", jobs, "Concurrent episodes")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Override base_seed");

  auto* validate = app.add_subcommand("validate", "Check a config file and exit");
  validate->add_option("--config", config_path, "Experiment config (JSON)")->required();

  std::string runs_path;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Recompute per-cell summaries from runs.csv");
  report->add_option("--runs", runs_path, "runs.csv written by `run`")->required();
  report->add_option("--out", report_out, "Write the summary here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir, jobs, seed);
    if (*validate) return cmd_validate(config_path);
    if (*report) return cmd_report(runs_path, report_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
