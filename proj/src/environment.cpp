#include "trustsim/environment.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "trustsim/trust_models.hpp"

namespace trustsim {

TerrainProfile terrain_profile(Terrain kind) {
  switch (kind) {
    case Terrain::kFlat: return {kind, 1.0, 1.0, 0.5};
    case Terrain::kRough: return {kind, 0.7, 0.85, 0.7};
    case Terrain::kObstacleDense: return {kind, 0.5, 0.7, 0.9};
  }
  throw std::invalid_argument("unknown terrain");
}

std::string_view terrain_name(Terrain kind) {
  switch (kind) {
    case Terrain::kFlat: return "flat";
    case Terrain::kRough: return "rough";
    case Terrain::kObstacleDense: return "obstacle_dense";
  }
  return "unknown";
}

std::string_view attribute_name(PoiAttribute a) {
  switch (a) {
    case PoiAttribute::kSurvivor: return "survivor";
    case PoiAttribute::kHazard: return "hazard";
    case PoiAttribute::kResource: return "resource";
  }
  return "unknown";
}

std::string_view status_name(PoiStatus s) {
  switch (s) {
    case PoiStatus::kPending: return "pending";
    case PoiStatus::kAssigned: return "assigned";
    case PoiStatus::kCompleted: return "completed";
    case PoiStatus::kFailed: return "failed";
  }
  return "unknown";
}

double attribute_complexity(PoiAttribute a) {
  switch (a) {
    case PoiAttribute::kSurvivor: return 0.7;
    case PoiAttribute::kHazard: return 0.9;
    case PoiAttribute::kResource: return 0.4;
  }
  return 0.0;
}

std::string_view agent_kind_name(AgentKind k) {
  switch (k) {
    case AgentKind::kHuman: return "human";
    case AgentKind::kUav: return "uav";
    case AgentKind::kUgv: return "ugv";
  }
  return "unknown";
}

AgentAttributes agent_catalog(AgentKind kind) {
  switch (kind) {
    case AgentKind::kHuman: return {1.0, 10.0};
    case AgentKind::kUav: return {2.0, 20.0};
    case AgentKind::kUgv: return {1.5, 15.0};
  }
  throw std::invalid_argument("unknown agent kind");
}

double robot_capability(AgentKind kind) {
  switch (kind) {
    case AgentKind::kUav: return 0.8;
    case AgentKind::kUgv: return 0.6;
    case AgentKind::kHuman: break;
  }
  throw std::invalid_argument("robot_capability: humans carry no capability prior");
}

AgentState AgentState::make(int id, AgentKind kind, Vec2 position) {
  const AgentAttributes attrs = agent_catalog(kind);
  AgentState a;
  a.id = id;
  a.kind = kind;
  a.position = position;
  a.speed = attrs.speed;
  a.sensing_range = attrs.sensing_range;
  return a;
}

SuccessTable SuccessTable::defaults() {
  SuccessTable t;
  //            survivor hazard resource
  t.base[0] = {0.9, 0.5, 0.7};  // human
  t.base[1] = {0.6, 0.7, 0.8};  // uav
  t.base[2] = {0.7, 0.8, 0.8};  // ugv
  return t;
}

SuccessTable SuccessTable::certain() {
  SuccessTable t;
  for (auto& row : t.base) row = {1.0, 1.0, 1.0};
  return t;
}

void EnvConfig::validate() const {
  if (!(width > 0.0) || !(height > 0.0)) {
    throw std::invalid_argument("width/height: must be positive");
  }
  if (num_pois < 0) throw std::invalid_argument("num_pois: must be non-negative");
  if (min_poi_separation < 0.0) {
    throw std::invalid_argument("min_poi_separation: must be non-negative");
  }
  for (const auto& row : success.base) {
    for (double p : row) {
      if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("success table: probabilities must lie in [0, 1]");
      }
    }
  }
}

Poi& Environment::poi(int id) {
  return const_cast<Poi&>(std::as_const(*this).poi(id));
}

const Poi& Environment::poi(int id) const {
  if (id < 0 || id >= static_cast<int>(pois.size()) || pois[id].id != id) {
    throw ContractViolation("unknown POI id " + std::to_string(id));
  }
  return pois[id];
}

Environment generate_environment(RandomSource& rng, const EnvConfig& cfg,
                                 TerrainProfile terrain) {
  constexpr int kMaxAttempts = 10'000;

  Environment env;
  env.width = cfg.width;
  env.height = cfg.height;
  env.terrain = terrain;
  env.pois.reserve(cfg.num_pois);

  for (int id = 0; id < cfg.num_pois; ++id) {
    Vec2 pos;
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      pos = {rng.uniform(0.0, cfg.width), rng.uniform(0.0, cfg.height)};
      placed = std::none_of(env.pois.begin(), env.pois.end(), [&](const Poi& other) {
        return distance(other.position, pos) < cfg.min_poi_separation;
      });
    }
    if (!placed) {
      throw std::runtime_error("generate_environment: could not place POI " +
                               std::to_string(id) + " after " +
                               std::to_string(kMaxAttempts) + " attempts");
    }
    Poi poi;
    poi.id = id;
    poi.position = pos;
    poi.attribute = static_cast<PoiAttribute>(rng.below(3));
    poi.complexity = attribute_complexity(poi.attribute);
    env.pois.push_back(poi);
  }
  return env;
}

Environment generate_environment(std::uint64_t seed, const EnvConfig& cfg,
                                 TerrainProfile terrain) {
  RngStream streams(seed);
  return generate_environment(streams.env(), cfg, terrain);
}

AgentState step_agent_motion(const AgentState& agent, Vec2 target,
                             const TerrainProfile& terrain) {
  AgentState next = agent;
  const double remaining = distance(agent.position, target);
  const double stride = agent.speed * terrain.speed_multiplier;  // 1 s step
  if (remaining <= stride) {
    next.position = target;
  } else {
    const double f = stride / remaining;
    next.position = {agent.position.x + f * (target.x - agent.position.x),
                     agent.position.y + f * (target.y - agent.position.y)};
  }
  return next;
}

std::vector<int> sense_pois(const AgentState& agent, const Environment& env) {
  std::vector<std::pair<double, int>> visible;
  for (const Poi& p : env.pois) {
    if (p.status != PoiStatus::kPending) continue;
    const double d = distance(agent.position, p.position);
    if (d <= agent.sensing_range) visible.emplace_back(d, p.id);
  }
  std::sort(visible.begin(), visible.end());
  std::vector<int> ids;
  ids.reserve(visible.size());
  for (const auto& [d, id] : visible) ids.push_back(id);
  return ids;
}

TaskOutcome attempt_task(const AgentState& agent, Poi& poi,
                         const TerrainProfile& terrain, double rng_draw, int step,
                         const SuccessTable& table) {
  if (distance(agent.position, poi.position) > agent.sensing_range) {
    throw ContractViolation("attempt_task: agent " + std::to_string(agent.id) +
                            " is out of range of POI " + std::to_string(poi.id));
  }
  const bool available =
      poi.status == PoiStatus::kPending ||
      (poi.status == PoiStatus::kAssigned && poi.assigned_agent == agent.id);
  if (!available) {
    throw ContractViolation("attempt_task: POI " + std::to_string(poi.id) +
                            " is not available to agent " + std::to_string(agent.id));
  }

  const double p = table.at(agent.kind, poi.attribute) * terrain.success_modifier;
  const int started = poi.assigned_step.value_or(step);

  TaskOutcome out;
  out.poi_id = poi.id;
  out.agent_id = agent.id;
  out.success = rng_draw < p;
  out.step = step + 1;
  out.elapsed_steps = out.step - started;

  if (out.success) {
    poi.status = PoiStatus::kCompleted;
    poi.completion_step = out.step;
  } else {
    poi.status = PoiStatus::kPending;
  }
  poi.assigned_agent.reset();
  poi.assigned_step.reset();
  return out;
}

double evaluate_performance(const TaskOutcome& outcome) {
  return ect_evaluate_performance(outcome.success, outcome.elapsed_steps);
}

}  // namespace trustsim
