#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "trustsim/experiment.hpp"

using namespace trustsim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("trustsim_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string error_of(const json& doc) {
  try {
    parse_config(doc, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.scenarios = {"2H-2R"};
  cfg.models = {ModelKind::kEct};
  cfg.runs_per_cell = 3;
  cfg.output_dir = out;
  return cfg;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("empty file means the full default grid") {
    const fs::path dir = scratch("empty");
    for (const char* text : {"", "  \n\t\n"}) {
      const ExperimentConfig cfg = load_config(write_file(dir / "c.json", text));
      CHECK(cfg.scenarios.size() == 3);
      CHECK(cfg.models.size() == 5);
      CHECK(cfg.runs_per_cell == 100);
      CHECK(cfg.base_seed == 1);
    }
    CHECK(load_config(write_file(dir / "o.json", "{}")).runs_per_cell == 100);
  }

  TEST_CASE("fields override defaults") {
    const ExperimentConfig cfg = parse_config(json::parse(R"({
      "scenarios": ["5H-5R"], "models": ["guo_yang", "monir"], "runs_per_cell": 7,
      "base_seed": 9, "monir": {"epsilon": 0.2}, "ect": {"facet_weights": [0.5, 0.25, 0.25]},
      "output": {"dir": "elsewhere", "step_log": true}
    })"));
    CHECK(cfg.scenarios == std::vector<std::string>{"5H-5R"});
    CHECK(cfg.models == std::vector<ModelKind>{ModelKind::kGuoYang, ModelKind::kMonir});
    CHECK(cfg.runs_per_cell == 7);
    CHECK(cfg.base_seed == 9);
    CHECK(cfg.sim.models.monir.epsilon == 0.2);
    CHECK(cfg.sim.models.ect.facet_weights[0] == 0.5);
    CHECK(cfg.output_dir == fs::path("elsewhere"));
    CHECK(cfg.step_log);
  }

  TEST_CASE("errors name the offending field") {
    const std::string bad_model = error_of(json::parse(R"({"models": ["ect", "foo"]})"));
    CHECK(bad_model.find("cfg.json") != std::string::npos);
    CHECK(bad_model.find("$.models[1]") != std::string::npos);
    CHECK(bad_model.find("foo") != std::string::npos);

    CHECK(error_of(json::parse(R"({"runs_per_cell": 0})")).find("$.runs_per_cell") !=
          std::string::npos);
    CHECK(error_of(json::parse(R"({"monir": {"fp": 0.3}})")).find("$.monir.fp") !=
          std::string::npos);
    CHECK(error_of(json::parse(R"({"scenarios": ["4H-4R"]})")).find("$.scenarios[0]") !=
          std::string::npos);
    CHECK(error_of(json::parse(R"({"runs_per_cell": "ten"})")).find("$.runs_per_cell") !=
          std::string::npos);
    CHECK_FALSE(error_of(json::parse(R"({"monir": {"f_p": 0.6}})")).empty());
    CHECK_FALSE(error_of(json::parse(R"({"ect": {"facet_weights": [1, 1, 1]}})")).empty());
    CHECK_FALSE(error_of(json::parse("[1, 2]")).empty());
  }

  TEST_CASE("malformed and missing files") {
    const fs::path dir = scratch("malformed");
    CHECK_THROWS_AS(load_config(write_file(dir / "c.json", "{ nope")), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "absent.json"), ConfigError);
    CHECK_THROWS_AS(load_config(dir), ConfigError);
  }

  TEST_CASE("the echo parses back to the same settings") {
    ExperimentConfig cfg;
    cfg.base_seed = 77;
    cfg.sim.q_learning.explore_rate = 0.2;
    cfg.sim.env.success = SuccessTable::certain();
    cfg.sim.models.xu_dudek.stochastic = true;
    const json echo = config_echo(cfg);
    CHECK(config_echo(parse_config(echo)) == echo);
    CHECK_FALSE(echo.contains("output"));
  }
}

TEST_SUITE("experiment") {
  TEST_CASE("seeds") {
    const std::uint64_t s = cell_seed(1, "2H-2R", ModelKind::kEct, 0);
    CHECK(cell_seed(1, "2H-2R", ModelKind::kEct, 5) == s + 5);
    CHECK(cell_seed(2, "2H-2R", ModelKind::kEct, 0) == s + 1);
    CHECK(cell_seed(1, "2H-2R", ModelKind::kMonir, 0) != s);
    CHECK(s == 1 + fnv1a64("2H-2R/ect"));
  }

  TEST_CASE("a small grid") {
    const fs::path dir = scratch("small");
    const ExperimentConfig cfg = small_config(dir);
    const ExperimentReport report = run_experiment(cfg);
    REQUIRE(report.runs.size() == 3);
    REQUIRE(report.cells.size() == 1);
    CHECK(report.cells[0].tsr.n == 3);
    CHECK(report.cells[0].failed_runs == 0);
    for (int i = 0; i < 3; ++i) {
      const RunRow& r = report.runs[i];
      CHECK(r.run == i);
      CHECK(r.seed == cell_seed(1, "2H-2R", ModelKind::kEct, i));
      CHECK(r.tsr == static_cast<double>(r.completed) / r.total);
      CHECK_FALSE(r.error.has_value());
    }

    const ExperimentReport again = run_experiment(cfg, 4);
    CHECK(runs_csv(again.runs) == runs_csv(report.runs));
    CHECK(summary_json(again) == summary_json(report));
  }

  TEST_CASE("outputs") {
    const fs::path dir = scratch("outputs");
    const ExperimentReport report = run_experiment(small_config(dir), 2);
    emit_outputs(report, dir);

    const std::string csv = read_file(dir / "runs.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "scenario,model,run,seed,tsr,act,completed,total,steps");

    const json summary = json::parse(read_file(dir / "summary.json"));
    CHECK(summary["version"] == kVersion);
    CHECK(summary["config"] == report.config);
    CHECK(summary["errors"].empty());
    REQUIRE(summary["cells"].size() == 1);
    const json& cell = summary["cells"][0];
    CHECK(cell["scenario"] == "2H-2R");
    CHECK(cell["model"] == "ect");
    CHECK(cell["tsr"]["n"] == 3);
    CHECK(cell["tsr"]["mean"].get<double>() == report.cells[0].tsr.mean);

    const auto rows = read_runs_csv(dir / "runs.csv");
    REQUIRE(rows.size() == report.runs.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].seed == report.runs[i].seed);
      CHECK(rows[i].tsr == report.runs[i].tsr);
      CHECK(rows[i].act == report.runs[i].act);
      CHECK(rows[i].steps == report.runs[i].steps);
    }
    CHECK(cells_json(summarize_rows(rows)) == summary["cells"]);
  }

  TEST_CASE("runs with nothing completed leave act empty") {
    RunRow r;
    r.scenario = "2H-2R";
    r.model = "monir";
    r.seed = 12;
    r.total = 10;
    r.steps = 500;
    const std::string csv = runs_csv({r});
    CHECK(csv == std::string(kRunsCsvHeader) + "\n2H-2R,monir,0,12,0,,0,10,500\n");

    const fs::path dir = scratch("noact");
    const auto rows = read_runs_csv(write_file(dir / "runs.csv", csv));
    REQUIRE(rows.size() == 1);
    CHECK_FALSE(rows[0].act.has_value());
    const auto cells = summarize_rows(rows);
    CHECK_FALSE(cells[0].act.has_value());
    CHECK(cells_json(cells)[0]["act"]["mean"].is_null());
  }

  TEST_CASE("bad runs.csv") {
    const fs::path dir = scratch("badcsv");
    CHECK_THROWS_AS(read_runs_csv(write_file(dir / "a.csv", "wrong,header\n")), ConfigError);
    CHECK_THROWS_AS(read_runs_csv(write_file(dir / "b.csv", std::string(kRunsCsvHeader) +
                                                               "\n2H-2R,ect,0,1\n")),
                    ConfigError);
    CHECK_THROWS_AS(read_runs_csv(write_file(dir / "c.csv", std::string(kRunsCsvHeader) +
                                                               "\n2H-2R,ect,x,1,0,,0,10,5\n")),
                    ConfigError);
  }

  TEST_CASE("step logs") {
    const fs::path dir = scratch("steps");
    ExperimentConfig cfg = small_config(dir);
    cfg.runs_per_cell = 1;
    cfg.step_log = true;
    const ExperimentReport report = run_experiment(cfg);
    const fs::path log = dir / "steps" / "2H-2R_ect_0.jsonl";
    REQUIRE(fs::exists(log));

    std::ifstream in(log);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      const json rec = json::parse(line);
      CHECK(rec["step"] == n);
      CHECK(rec["agents"].size() == 4);
      CHECK(rec["pois"].size() == 10);
      CHECK(rec["team_trust"].size() == 2);
      ++n;
    }
    CHECK(n == report.runs[0].steps);
  }
}
