#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "trustsim/experiment.hpp"

namespace trustsim {
namespace {

using nlohmann::json;

/// Walks one JSON object, tracking which keys were consumed so unknown keys
/// can be reported with their full path.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!node_.contains(key)) return;
    const json& v = node_.at(key);
    const std::string where = child(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(where, "expected a boolean");
      out = v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) fail(where, "expected a non-negative integer");
      out = v.get<std::uint64_t>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(where, "expected an integer");
      out = v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(where, "expected a number");
      out = v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(where, "expected a string");
      out = v.get<std::string>();
    } else {
      static_assert(sizeof(T) == 0, "unsupported field type");
    }
  }

  /// Returns a reader for a nested object, or nullopt when absent.
  std::optional<ObjectReader> object(const char* key) {
    seen_.insert(key);
    if (!node_.contains(key)) return std::nullopt;
    return ObjectReader(node_.at(key), child(key));
  }

  const json* raw(const char* key) {
    seen_.insert(key);
    return node_.contains(key) ? &node_.at(key) : nullptr;
  }

  std::string child(const std::string& key) const { return path_ + "." + key; }

  /// Rejects any key that no read() asked for.
  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) fail(child(key), "unknown key");
    }
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void checked(const std::string& where, Fn&& validate) {
  try {
    validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + "." + e.what());
  }
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
  if (!v.is_array()) ObjectReader::fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) {
      ObjectReader::fail(where + "[" + std::to_string(i) + "]", "expected a string");
    }
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (scenarios.empty()) ObjectReader::fail("$.scenarios", "must not be empty");
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (!named_scenario(scenarios[i])) {
      ObjectReader::fail("$.scenarios[" + std::to_string(i) + "]",
                         "unknown scenario \"" + scenarios[i] + "\"");
    }
  }
  if (models.empty()) ObjectReader::fail("$.models", "must not be empty");
  if (runs_per_cell < 1) ObjectReader::fail("$.runs_per_cell", "must be at least 1");
  if (!(robot_mix >= 0.0 && robot_mix <= 1.0)) {
    ObjectReader::fail("$.team.robot_mix", "must lie in [0, 1]");
  }
  if (sim.env.num_pois < 1) ObjectReader::fail("$.environment.num_pois", "must be at least 1");
  checked("$.monir", [&] { sim.models.monir.validate(); });
  checked("$.xu_dudek", [&] { sim.models.xu_dudek.validate(); });
  checked("$.guo_yang", [&] { sim.models.guo_yang.validate(); });
  checked("$.ect", [&] { sim.models.ect.validate(); });
  checked("$.q_learning", [&] { sim.q_learning.validate(); });
  checked("$.reward", [&] { sim.reward.validate(); });
  checked("$.allocation", [&] { sim.allocation.validate(); });
  checked("$.environment", [&] { sim.env.validate(); });
  checked("$.simulation", [&] { sim.validate(); });
  if (!(sim.work_seconds_per_complexity > 0.0)) {
    ObjectReader::fail("$.simulation.work_seconds_per_complexity", "must be positive");
  }
}

ExperimentConfig parse_config(const json& doc, const std::string& origin) {
  ExperimentConfig cfg;
  try {
    ObjectReader root(doc, "$");

    if (const json* v = root.raw("scenarios")) cfg.scenarios = string_list(*v, "$.scenarios");
    if (const json* v = root.raw("models")) {
      cfg.models.clear();
      const auto names = string_list(*v, "$.models");
      for (std::size_t i = 0; i < names.size(); ++i) {
        const auto kind = parse_model(names[i]);
        if (!kind) {
          ObjectReader::fail("$.models[" + std::to_string(i) + "]",
                             "unknown model \"" + names[i] +
                                 "\" (expected no_trust, monir, xu_dudek, guo_yang or ect)");
        }
        cfg.models.push_back(*kind);
      }
    }
    root.read("runs_per_cell", cfg.runs_per_cell);
    root.read("base_seed", cfg.base_seed);

    if (auto out = root.object("output")) {
      std::string dir = cfg.output_dir.string();
      out->read("dir", dir);
      cfg.output_dir = dir;
      out->read("step_log", cfg.step_log);
      out->finish();
    }
    if (auto team = root.object("team")) {
      team->read("robot_mix", cfg.robot_mix);
      team->finish();
    }
    if (auto env = root.object("environment")) {
      EnvConfig& e = cfg.sim.env;
      env->read("width", e.width);
      env->read("height", e.height);
      env->read("num_pois", e.num_pois);
      env->read("min_poi_separation", e.min_poi_separation);
      bool certain = false;
      env->read("certain_success", certain);
      if (certain) e.success = SuccessTable::certain();
      env->finish();
    }
    if (auto sim = root.object("simulation")) {
      sim->read("perception_noise", cfg.sim.perception_noise);
      sim->read("work_seconds_per_complexity", cfg.sim.work_seconds_per_complexity);
      sim->read("distance_bins", cfg.sim.n_distance_bins);
      sim->read("trust_bins", cfg.sim.n_trust_bins);
      sim->finish();
    }
    if (auto q = root.object("q_learning")) {
      q->read("learn_rate", cfg.sim.q_learning.learn_rate);
      q->read("discount", cfg.sim.q_learning.discount);
      q->read("explore_rate", cfg.sim.q_learning.explore_rate);
      q->finish();
    }
    if (auto r = root.object("reward")) {
      r->read("completion_reward", cfg.sim.reward.completion_reward);
      r->read("step_cost", cfg.sim.reward.step_cost);
      r->read("failure_cost", cfg.sim.reward.failure_cost);
      r->finish();
    }
    if (auto a = root.object("allocation")) {
      a->read("w_trust", cfg.sim.allocation.w_trust);
      a->read("w_distance", cfg.sim.allocation.w_distance);
      a->finish();
    }
    if (auto m = root.object("monir")) {
      MonirConfig& c = cfg.sim.models.monir;
      m->read("f_p", c.f_predictable);
      m->read("f_d", c.f_dependable);
      m->read("f_f", c.f_faith);
      m->read("epsilon", c.epsilon);
      m->read("slope_c", c.slope);
      m->finish();
    }
    if (auto x = root.object("xu_dudek")) {
      XuDudekConfig& c = cfg.sim.models.xu_dudek;
      x->read("w_tb", c.w_bias);
      x->read("w_tp", c.w_performance);
      x->read("w_td", c.w_performance_delta);
      x->read("sigma_t", c.sigma);
      x->read("w_ib", c.w_intervention_bias);
      x->read("w_it", c.w_intervention_trust);
      x->read("w_id", c.w_intervention_trust_delta);
      x->read("w_ie", c.w_intervention_task_change);
      x->read("stochastic", c.stochastic);
      x->finish();
    }
    if (auto g = root.object("guo_yang")) {
      GuoYangConfig& c = cfg.sim.models.guo_yang;
      g->read("w_s", c.w_success);
      g->read("w_f", c.w_failure);
      g->read("alpha0", c.alpha0);
      g->read("beta0", c.beta0);
      g->finish();
    }
    if (auto e = root.object("ect")) {
      EctConfig& c = cfg.sim.models.ect;
      e->read("learn_rate", c.learn_rate);
      e->read("scale", c.scale);
      e->read("decay", c.decay);
      if (const json* w = e->raw("facet_weights")) {
        const std::string where = e->child("facet_weights");
        if (!w->is_array() || w->size() != 3) {
          ObjectReader::fail(where, "expected an array of three numbers");
        }
        for (std::size_t i = 0; i < 3; ++i) {
          if (!(*w)[i].is_number()) {
            ObjectReader::fail(where + "[" + std::to_string(i) + "]", "expected a number");
          }
          c.facet_weights[i] = (*w)[i].get<double>();
        }
      }
      e->finish();
    }
    root.finish();
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in || std::filesystem::is_directory(path)) {
    throw ConfigError(path.string() + ": cannot open config file");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  json doc = json::object();
  if (!std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(path.string() + ": parse error: " + e.what());
    }
  }
  return parse_config(doc, path.string());
}

nlohmann::json config_echo(const ExperimentConfig& cfg) {
  json models = json::array();
  for (ModelKind m : cfg.models) models.push_back(std::string(model_name(m)));
  const SimConfig& s = cfg.sim;
  const auto& mc = s.models;
  const bool certain = s.env.success.base == SuccessTable::certain().base;
  return {
      {"scenarios", cfg.scenarios},
      {"models", models},
      {"runs_per_cell", cfg.runs_per_cell},
      {"base_seed", cfg.base_seed},
      {"team", {{"robot_mix", cfg.robot_mix}}},
      {"environment",
       {{"width", s.env.width},
        {"height", s.env.height},
        {"num_pois", s.env.num_pois},
        {"min_poi_separation", s.env.min_poi_separation},
        {"certain_success", certain}}},
      {"simulation",
       {{"perception_noise", s.perception_noise},
        {"work_seconds_per_complexity", s.work_seconds_per_complexity},
        {"distance_bins", s.n_distance_bins},
        {"trust_bins", s.n_trust_bins}}},
      {"q_learning",
       {{"learn_rate", s.q_learning.learn_rate},
        {"discount", s.q_learning.discount},
        {"explore_rate", s.q_learning.explore_rate}}},
      {"reward",
       {{"completion_reward", s.reward.completion_reward},
        {"step_cost", s.reward.step_cost},
        {"failure_cost", s.reward.failure_cost}}},
      {"allocation", {{"w_trust", s.allocation.w_trust}, {"w_distance", s.allocation.w_distance}}},
      {"monir",
       {{"f_p", mc.monir.f_predictable},
        {"f_d", mc.monir.f_dependable},
        {"f_f", mc.monir.f_faith},
        {"epsilon", mc.monir.epsilon},
        {"slope_c", mc.monir.slope}}},
      {"xu_dudek",
       {{"w_tb", mc.xu_dudek.w_bias},
        {"w_tp", mc.xu_dudek.w_performance},
        {"w_td", mc.xu_dudek.w_performance_delta},
        {"sigma_t", mc.xu_dudek.sigma},
        {"w_ib", mc.xu_dudek.w_intervention_bias},
        {"w_it", mc.xu_dudek.w_intervention_trust},
        {"w_id", mc.xu_dudek.w_intervention_trust_delta},
        {"w_ie", mc.xu_dudek.w_intervention_task_change},
        {"stochastic", mc.xu_dudek.stochastic}}},
      {"guo_yang",
       {{"w_s", mc.guo_yang.w_success},
        {"w_f", mc.guo_yang.w_failure},
        {"alpha0", mc.guo_yang.alpha0},
        {"beta0", mc.guo_yang.beta0}}},
      {"ect",
       {{"learn_rate", mc.ect.learn_rate},
        {"scale", mc.ect.scale},
        {"decay", mc.ect.decay},
        {"facet_weights", mc.ect.facet_weights}}},
  };
}

}  // namespace trustsim
