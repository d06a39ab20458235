#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "trustsim/experiment.hpp"

namespace trustsim {
namespace {

using nlohmann::json;

struct Job {
  std::size_t scenario_index;
  std::size_t model_index;
  int run;
};

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json stats_json(const std::optional<SummaryStats>& s) {
  if (!s) return {{"mean", nullptr}, {"std", nullptr}, {"n", 0}};
  return {{"mean", s->mean}, {"std", s->std}, {"n", s->n}};
}

std::string step_log_name(const RunRow& row) {
  return row.scenario + "_" + row.model + "_" + std::to_string(row.run) + ".jsonl";
}

RunRow run_one(const ExperimentConfig& cfg, const Job& job) {
  const std::string& scenario_name = cfg.scenarios[job.scenario_index];
  const ModelKind model = cfg.models[job.model_index];

  RunRow row;
  row.scenario = scenario_name;
  row.model = std::string(model_name(model));
  row.run = job.run;
  row.seed = cell_seed(cfg.base_seed, scenario_name, model, job.run);
  row.total = cfg.sim.env.num_pois;

  try {
    const Scenario scenario = *named_scenario(scenario_name, cfg.robot_mix);
    std::ofstream log;
    StepObserver observer;
    if (cfg.step_log) {
      const auto dir = cfg.output_dir / "steps";
      std::filesystem::create_directories(dir);
      const auto file = dir / step_log_name(row);
      log.open(file);
      if (!log) throw std::runtime_error("cannot open step log " + file.string());
      observer = [&log](const StepRecord& rec) { log << step_record_json(rec).dump() << '\n'; };
    }
    const EpisodeResult result = run_episode(scenario, model, cfg.sim, row.seed, observer);
    row.tsr = task_success_rate(result, result.total_tasks);
    row.act = average_completion_time(result);
    row.completed = result.completed_count();
    row.total = result.total_tasks;
    row.steps = result.steps_used;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t base_seed, const std::string& scenario, ModelKind model,
                        int run) {
  const std::string key = scenario + "/" + std::string(model_name(model));
  return base_seed + fnv1a64(key) + static_cast<std::uint64_t>(run);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, int jobs,
                                const ProgressSink& progress) {
  const auto start = std::chrono::steady_clock::now();

  std::vector<Job> queue;
  for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
    for (std::size_t m = 0; m < cfg.models.size(); ++m) {
      for (int r = 0; r < cfg.runs_per_cell; ++r) queue.push_back({s, m, r});
    }
  }

  // Each job writes only its own slot, so the row order is fixed by the
  // queue order whatever the thread count.
  std::vector<RunRow> rows(queue.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < queue.size(); i = next++) {
      rows[i] = run_one(cfg, queue[i]);
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, queue.size());
      }
    }
  };

  const int n_threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(queue.size(), 1)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  ExperimentReport report;
  report.config = config_echo(cfg);
  report.runs = std::move(rows);
  report.cells = summarize_rows(report.runs);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<CellSummary> summarize_rows(const std::vector<RunRow>& rows) {
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<const RunRow*>> groups;
  for (const RunRow& r : rows) {
    const auto key = std::make_pair(r.scenario, r.model);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }

  std::vector<CellSummary> cells;
  for (const auto& key : order) {
    CellSummary cell;
    cell.scenario = key.first;
    cell.model = key.second;
    std::vector<double> tsr;
    std::vector<std::optional<double>> act;
    for (const RunRow* r : groups[key]) {
      if (r->error) {
        ++cell.failed_runs;
        continue;
      }
      tsr.push_back(r->tsr);
      act.push_back(r->act);
    }
    if (!tsr.empty()) cell.tsr = aggregate_runs(tsr);
    cell.act = aggregate_present(act);
    cells.push_back(std::move(cell));
  }
  return cells;
}

std::string runs_csv(const std::vector<RunRow>& rows) {
  std::ostringstream out;
  out << kRunsCsvHeader << '\n';
  for (const RunRow& r : rows) {
    out << r.scenario << ',' << r.model << ',' << r.run << ',' << r.seed << ',';
    if (!r.error) out << format_double(r.tsr);
    out << ',';
    if (r.act && !r.error) out << format_double(*r.act);
    out << ',' << r.completed << ',' << r.total << ',' << r.steps << '\n';
  }
  return out.str();
}

json cells_json(const std::vector<CellSummary>& cells) {
  json out = json::array();
  for (const CellSummary& c : cells) {
    out.push_back({{"scenario", c.scenario},
                   {"model", c.model},
                   {"tsr", stats_json(c.tsr.n > 0 ? std::optional(c.tsr) : std::nullopt)},
                   {"act", stats_json(c.act)},
                   {"failed_runs", c.failed_runs}});
  }
  return out;
}

json summary_json(const ExperimentReport& report) {
  json errors = json::array();
  for (const RunRow& r : report.runs) {
    if (r.error) {
      errors.push_back({{"scenario", r.scenario}, {"model", r.model}, {"run", r.run},
                        {"seed", r.seed}, {"error", *r.error}});
    }
  }
  return {{"version", report.version},
          {"config", report.config},
          {"cells", cells_json(report.cells)},
          {"errors", errors}};
}

void emit_outputs(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error(dir.string() + ": " + ec.message());

  auto write = [](const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error(file.string() + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(file.string() + ": write failed");
  };
  write(dir / "runs.csv", runs_csv(report.runs));
  write(dir / "summary.json", summary_json(report).dump(2) + "\n");
}

std::vector<RunRow> read_runs_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  std::string line;
  if (!std::getline(in, line) || line != kRunsCsvHeader) {
    throw ConfigError(path.string() + ":1: unexpected header");
  }

  std::vector<RunRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (f.size() != 9) throw ConfigError(where + ": expected 9 fields");
    try {
      RunRow r;
      r.scenario = f[0];
      r.model = f[1];
      r.run = std::stoi(f[2]);
      r.seed = std::stoull(f[3]);
      if (f[4].empty()) {
        r.error = "aborted";
      } else {
        r.tsr = std::stod(f[4]);
      }
      if (!f[5].empty()) r.act = std::stod(f[5]);
      r.completed = std::stoi(f[6]);
      r.total = std::stoi(f[7]);
      r.steps = std::stoi(f[8]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ConfigError(where + ": malformed number");
    }
  }
  return rows;
}

json step_record_json(const StepRecord& rec) {
  json agents = json::array();
  if (rec.agents) {
    for (const AgentStepRecord& a : *rec.agents) {
      agents.push_back({{"id", a.id},
                        {"kind", agent_kind_name(a.kind)},
                        {"x", a.position.x},
                        {"y", a.position.y},
                        {"poi", a.assigned_poi ? json(*a.assigned_poi) : json(nullptr)},
                        {"action", action_name(a.action)},
                        {"reward", a.reward}});
    }
  }
  json pois = json::array();
  if (rec.pois) {
    for (const Poi& p : *rec.pois) {
      pois.push_back({{"id", p.id}, {"status", status_name(p.status)}});
    }
  }
  json trust = json::array();
  if (rec.team_trust) {
    for (const auto& [robot, t] : *rec.team_trust) {
      trust.push_back({{"robot", robot}, {"trust", t.value()}});
    }
  }
  return {{"step", rec.step}, {"agents", agents}, {"pois", pois}, {"team_trust", trust}};
}

}  // namespace trustsim
