#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trustsim/allocation.hpp"
#include "trustsim/environment.hpp"
#include "trustsim/rng.hpp"
#include "trustsim/trust_models.hpp"

namespace trustsim {

inline constexpr int kMaxEpisodeSteps = 500;

struct Scenario {
  std::string name;
  int n_humans = 0;
  int n_robots = 0;
  Terrain terrain = Terrain::kFlat;
  double robot_mix = 0.5;  // fraction of robots that are UAVs, rounded up

  void validate() const;
};

/// The three named team/terrain settings: "2H-2R", "5H-5R", "10H-10R".
std::optional<Scenario> named_scenario(std::string_view name, double robot_mix = 0.5);
const std::vector<std::string>& scenario_names();

/// Everything an episode needs besides the scenario, model and seed.
struct SimConfig {
  ModelConfigs models;
  QLearningConfig q_learning;
  RewardConfig reward;
  AllocationConfig allocation;
  EnvConfig env;
  double perception_noise = 0.05;  // std of each evaluator's score noise
  // On-site work per attempt lasts ceil(this * POI complexity) seconds.
  double work_seconds_per_complexity = 1.0;
  int n_distance_bins = 5;
  int n_trust_bins = 5;

  void validate() const;
};

struct TrustSample {
  int step = 0;
  TrustLevel trust;

  friend bool operator==(const TrustSample&, const TrustSample&) = default;
};

struct RobotTrustTrace {
  int robot_id = 0;
  std::vector<TrustSample> samples;

  friend bool operator==(const RobotTrustTrace&, const RobotTrustTrace&) = default;
};

struct EpisodeResult {
  std::string scenario;
  std::string model;
  std::uint64_t seed = 0;
  int total_tasks = 0;
  int steps_used = 0;
  std::vector<TaskOutcome> outcomes;  // every attempt, in execution order
  std::vector<RobotTrustTrace> trust_trace;
  std::vector<Poi> final_pois;

  int completed_count() const;
  friend bool operator==(const EpisodeResult&, const EpisodeResult&) = default;
};

struct AgentStepRecord {
  int id = 0;
  AgentKind kind = AgentKind::kHuman;
  Vec2 position;
  std::optional<int> assigned_poi;
  Action action = Action::kWait;
  double reward = 0.0;
};

/// Snapshot handed to a step observer after each simulated second.
struct StepRecord {
  int step = 0;
  const std::vector<AgentStepRecord>* agents = nullptr;
  const std::vector<Poi>* pois = nullptr;
  const std::vector<std::pair<int, TrustLevel>>* team_trust = nullptr;
};

using StepObserver = std::function<void(const StepRecord&)>;

/// Humans first, then UAVs, then UGVs; ids are dense from 0. Positions are
/// drawn from the env substream.
std::vector<AgentState> build_team(const Scenario& scenario, RngStream& rng,
                                   double width = 100.0, double height = 100.0);

/// Runs one episode to completion or the step cap. Contract violations in
/// lower layers propagate as exceptions.
EpisodeResult run_episode(const Scenario& scenario, ModelKind model,
                          const SimConfig& cfg, std::uint64_t seed,
                          const StepObserver& observer = {});

}  // namespace trustsim
