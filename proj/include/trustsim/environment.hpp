#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "trustsim/rng.hpp"

namespace trustsim {

/// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// ---------------------------------------------------------------------------
// Terrain

enum class Terrain { kFlat, kRough, kObstacleDense };

struct TerrainProfile {
  Terrain kind = Terrain::kFlat;
  double speed_multiplier = 1.0;
  double success_modifier = 1.0;
  double complexity = 0.5;
};

TerrainProfile terrain_profile(Terrain kind);
std::string_view terrain_name(Terrain kind);

// ---------------------------------------------------------------------------
// Points of interest

enum class PoiAttribute { kSurvivor = 0, kHazard = 1, kResource = 2 };
enum class PoiStatus { kPending, kAssigned, kCompleted, kFailed };

std::string_view attribute_name(PoiAttribute a);
std::string_view status_name(PoiStatus s);

/// Task complexity is a fixed function of the POI attribute.
double attribute_complexity(PoiAttribute a);

struct Poi {
  int id = 0;
  Vec2 position;
  PoiAttribute attribute = PoiAttribute::kSurvivor;
  double complexity = 0.0;
  PoiStatus status = PoiStatus::kPending;
  std::optional<int> completion_step;
  std::optional<int> assigned_agent;
  std::optional<int> assigned_step;

  friend bool operator==(const Poi&, const Poi&) = default;
};

// ---------------------------------------------------------------------------
// Agents

enum class AgentKind { kHuman = 0, kUav = 1, kUgv = 2 };

std::string_view agent_kind_name(AgentKind k);

struct AgentAttributes {
  double speed = 0.0;          // m/s
  double sensing_range = 0.0;  // m
};

AgentAttributes agent_catalog(AgentKind kind);

inline bool is_robot(AgentKind kind) { return kind != AgentKind::kHuman; }

/// Prior capability used to seed expectations of a robot. Humans have none.
double robot_capability(AgentKind kind);

struct AgentState {
  int id = 0;
  AgentKind kind = AgentKind::kHuman;
  Vec2 position;
  double speed = 0.0;
  double sensing_range = 0.0;
  std::optional<int> assigned_poi;
  std::optional<int> busy_until;

  static AgentState make(int id, AgentKind kind, Vec2 position);
};

// ---------------------------------------------------------------------------
// Success probabilities per (agent kind, POI attribute), before the terrain
// modifier is applied.

struct SuccessTable {
  std::array<std::array<double, 3>, 3> base{};

  static SuccessTable defaults();
  /// Every base probability set to 1.
  static SuccessTable certain();

  double at(AgentKind kind, PoiAttribute attribute) const {
    return base[static_cast<int>(kind)][static_cast<int>(attribute)];
  }
};

struct TaskOutcome {
  int poi_id = 0;
  int agent_id = 0;
  bool success = false;
  int elapsed_steps = 0;  // since the POI was assigned to the agent
  int step = 0;           // episode time (s) at which the attempt concluded

  friend bool operator==(const TaskOutcome&, const TaskOutcome&) = default;
};

// ---------------------------------------------------------------------------
// Environment

struct EnvConfig {
  double width = 100.0;
  double height = 100.0;
  int num_pois = 10;
  double min_poi_separation = 1.0;
  SuccessTable success = SuccessTable::defaults();

  double diagonal() const { return std::hypot(width, height); }
  void validate() const;
};

struct Environment {
  double width = 100.0;
  double height = 100.0;
  std::vector<Poi> pois;
  TerrainProfile terrain;

  double diagonal() const { return std::hypot(width, height); }
  Poi& poi(int id);
  const Poi& poi(int id) const;
};

/// Scatters cfg.num_pois POIs uniformly over the arena, keeping them at
/// least cfg.min_poi_separation apart. Throws std::runtime_error if
/// rejection sampling exhausts its attempt budget.
Environment generate_environment(RandomSource& rng, const EnvConfig& cfg,
                                 TerrainProfile terrain);
Environment generate_environment(std::uint64_t seed, const EnvConfig& cfg,
                                 TerrainProfile terrain = terrain_profile(Terrain::kFlat));

/// Moves one second toward `target`, never overshooting.
AgentState step_agent_motion(const AgentState& agent, Vec2 target,
                             const TerrainProfile& terrain);

/// Pending POIs within sensing range, nearest first (ties by id).
std::vector<int> sense_pois(const AgentState& agent, const Environment& env);

/// Resolves one task attempt at episode time `step`. Updates the POI: it
/// becomes completed on success and returns to pending on failure.
TaskOutcome attempt_task(const AgentState& agent, Poi& poi,
                         const TerrainProfile& terrain, double rng_draw, int step,
                         const SuccessTable& table = SuccessTable::defaults());

/// Performance score of an outcome (see ect_evaluate_performance).
double evaluate_performance(const TaskOutcome& outcome);

}  // namespace trustsim
