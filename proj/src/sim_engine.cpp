#include "trustsim/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace trustsim {

void Scenario::validate() const {
  if (n_humans < 0 || n_robots < 0) {
    throw std::invalid_argument("scenario " + name + ": team sizes must be non-negative");
  }
  if (!(robot_mix >= 0.0 && robot_mix <= 1.0)) {
    throw std::invalid_argument("scenario " + name + ": robot_mix must lie in [0, 1]");
  }
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"2H-2R", "5H-5R", "10H-10R"};
  return names;
}

std::optional<Scenario> named_scenario(std::string_view name, double robot_mix) {
  if (name == "2H-2R") return Scenario{"2H-2R", 2, 2, Terrain::kFlat, robot_mix};
  if (name == "5H-5R") return Scenario{"5H-5R", 5, 5, Terrain::kRough, robot_mix};
  if (name == "10H-10R") {
    return Scenario{"10H-10R", 10, 10, Terrain::kObstacleDense, robot_mix};
  }
  return std::nullopt;
}

void SimConfig::validate() const {
  models.validate();
  q_learning.validate();
  reward.validate();
  allocation.validate();
  env.validate();
  if (perception_noise < 0.0) {
    throw std::invalid_argument("perception_noise: must be non-negative");
  }
  if (n_distance_bins < 1 || n_trust_bins < 1) {
    throw std::invalid_argument("state bins: must be positive");
  }
}

int EpisodeResult::completed_count() const {
  return static_cast<int>(std::count_if(outcomes.begin(), outcomes.end(),
                                        [](const TaskOutcome& o) { return o.success; }));
}

std::vector<AgentState> build_team(const Scenario& scenario, RngStream& rng,
                                   double width, double height) {
  const int n_uav = std::clamp(
      static_cast<int>(std::ceil(scenario.n_robots * scenario.robot_mix - 1e-9)), 0,
      scenario.n_robots);

  std::vector<AgentState> team;
  team.reserve(scenario.n_humans + scenario.n_robots);
  auto add = [&](AgentKind kind) {
    const Vec2 pos{rng.env().uniform(0.0, width), rng.env().uniform(0.0, height)};
    team.push_back(AgentState::make(static_cast<int>(team.size()), kind, pos));
  };
  for (int i = 0; i < scenario.n_humans; ++i) add(AgentKind::kHuman);
  for (int i = 0; i < n_uav; ++i) add(AgentKind::kUav);
  for (int i = n_uav; i < scenario.n_robots; ++i) add(AgentKind::kUgv);
  return team;
}

namespace {

/// One human's running belief about one robot. Only the members relevant to
/// the active model are touched.
struct Evaluator {
  TrustLevel trust{0.5};
  double prev_score = 0.5;
  GuoYangState beta;
  EctState ect;
};

Evaluator initial_evaluator(ModelKind model, const ModelConfigs& cfg,
                            AgentKind robot, const TerrainProfile& terrain) {
  Evaluator ev;
  switch (model) {
    case ModelKind::kNoTrust:
      ev.trust = no_trust({});
      break;
    case ModelKind::kMonir:
      // Interaction starts in the dependable region.
      ev.trust = monir_trust(cfg.monir.f_dependable, cfg.monir);
      break;
    case ModelKind::kXuDudek:
      ev.trust = TrustLevel{0.5};
      break;
    case ModelKind::kGuoYang:
      ev.beta = guo_yang_initial(cfg.guo_yang);
      ev.trust = guo_yang_predict(ev.beta);
      break;
    case ModelKind::kEct:
      ev.ect = ect_initialize(robot_capability(robot), terrain.complexity, cfg.ect);
      ev.trust = ev.ect.trust;
      break;
  }
  return ev;
}

class Episode {
 public:
  Episode(const Scenario& scenario, ModelKind model, const SimConfig& cfg,
          std::uint64_t seed, const StepObserver& observer)
      : scenario_(scenario), model_(model), cfg_(cfg), observer_(observer), rng_(seed) {
    env_ = generate_environment(rng_.env(), cfg.env, terrain_profile(scenario.terrain));
    agents_ = build_team(scenario, rng_, env_.width, env_.height);

    for (const AgentState& a : agents_) {
      tables_.emplace_back(cfg.n_distance_bins, cfg.n_trust_bins, env_.diagonal());
      if (is_robot(a.kind)) robots_.push_back(a.id);
    }
    evaluators_.resize(scenario.n_humans);
    for (auto& row : evaluators_) {
      for (int r : robots_) {
        row.push_back(initial_evaluator(model, cfg.models, agents_[r].kind, env_.terrain));
      }
    }
    discovered_.assign(env_.pois.size(), false);
    work_state_.assign(agents_.size(), 0);
    team_trust_.assign(agents_.size(), TrustLevel{1.0});
    for (int r : robots_) team_trust_[r] = neutral_trust(r);

    result_.scenario = scenario.name;
    result_.model = std::string(model_name(model));
    result_.seed = seed;
    result_.total_tasks = static_cast<int>(env_.pois.size());
    for (int r : robots_) result_.trust_trace.push_back({r, {}});
  }

  EpisodeResult run() {
    std::vector<TaskOutcome> last_outcomes;
    for (int step = 0; step < kMaxEpisodeSteps; ++step) {
      if (all_done()) break;
      update_trust(last_outcomes);
      discover();
      assign(step);
      last_outcomes = act(step);
      record(step);
      result_.steps_used = step + 1;
    }
    for (Poi& p : env_.pois) {
      if (p.status != PoiStatus::kCompleted) {
        p.status = PoiStatus::kFailed;
        p.assigned_agent.reset();
        p.assigned_step.reset();
      }
    }
    result_.final_pois = env_.pois;
    return std::move(result_);
  }

 private:
  TrustLevel neutral_trust(int robot) const {
    if (evaluators_.empty()) {
      return initial_evaluator(model_, cfg_.models, agents_[robot].kind, env_.terrain).trust;
    }
    return team_trust_of(robot);
  }

  TrustLevel team_trust_of(int robot) const {
    const int slot = robot_slot(robot);
    std::vector<TrustLevel> members;
    members.reserve(evaluators_.size());
    for (const auto& row : evaluators_) members.push_back(row[slot].trust);
    return team_trust_aggregate(members);
  }

  int robot_slot(int robot) const {
    return static_cast<int>(std::find(robots_.begin(), robots_.end(), robot) - robots_.begin());
  }

  bool all_done() const {
    return std::all_of(env_.pois.begin(), env_.pois.end(),
                       [](const Poi& p) { return p.status == PoiStatus::kCompleted; });
  }

  void observe(Evaluator& ev, const TaskOutcome& outcome) {
    const double truth = evaluate_performance(outcome);
    const double noisy =
        std::clamp(truth + cfg_.perception_noise * rng_.noise().normal(), 0.0, 1.0);
    PerformanceObservation obs;
    obs.success = outcome.success;
    obs.score = noisy;
    obs.prev_score = ev.prev_score;

    const ModelConfigs& m = cfg_.models;
    switch (model_) {
      case ModelKind::kNoTrust:
        ev.trust = no_trust(obs);
        break;
      case ModelKind::kMonir:
        ev.trust = monir_trust(obs.score, m.monir);
        break;
      case ModelKind::kXuDudek: {
        std::optional<double> draw;
        if (m.xu_dudek.stochastic) draw = rng_.noise().normal();
        ev.trust = xu_dudek_update(ev.trust, obs, m.xu_dudek, draw);
        break;
      }
      case ModelKind::kGuoYang:
        ev.beta = guo_yang_update(ev.beta, obs.success, m.guo_yang);
        ev.trust = guo_yang_predict(ev.beta);
        break;
      case ModelKind::kEct:
        ev.ect = ect_update(ev.ect, obs.score, m.ect, true);
        ev.trust = ev.ect.trust;
        break;
    }
    ev.prev_score = noisy;
  }

  void update_trust(const std::vector<TaskOutcome>& outcomes) {
    std::vector<bool> interacted(robots_.size(), false);
    for (const TaskOutcome& o : outcomes) {
      if (!is_robot(agents_[o.agent_id].kind)) continue;
      const int slot = robot_slot(o.agent_id);
      interacted[slot] = true;
      for (auto& row : evaluators_) observe(row[slot], o);
    }
    if (model_ == ModelKind::kEct) {
      for (std::size_t slot = 0; slot < robots_.size(); ++slot) {
        if (interacted[slot]) continue;
        for (auto& row : evaluators_) {
          row[slot].ect = ect_update(row[slot].ect, 0.0, cfg_.models.ect, false);
          row[slot].trust = row[slot].ect.trust;
        }
      }
    }
    if (!evaluators_.empty()) {
      for (int r : robots_) team_trust_[r] = team_trust_of(r);
    }
  }

  void discover() {
    for (const AgentState& a : agents_) {
      for (int id : sense_pois(a, env_)) discovered_[id] = true;
    }
  }

  void assign(int step) {
    std::vector<AgentState> idle;
    for (const AgentState& a : agents_) {
      if (!a.assigned_poi) idle.push_back(a);
    }
    std::vector<Poi> pending;
    for (const Poi& p : env_.pois) {
      if (p.status == PoiStatus::kPending && discovered_[p.id]) pending.push_back(p);
    }
    if (idle.empty() || pending.empty()) return;

    const auto pairs = assign_tasks(
        idle, pending, [this](int id) { return team_trust_[id]; }, cfg_.allocation,
        env_.diagonal());
    for (const Assignment& as : pairs) {
      Poi& poi = env_.poi(as.poi_id);
      poi.status = PoiStatus::kAssigned;
      poi.assigned_agent = as.agent_id;
      poi.assigned_step = step;
      agents_[as.agent_id].assigned_poi = as.poi_id;
    }
  }

  // Distance fed into the agent's learning state: its assigned POI, else the
  // nearest known pending POI, else the far end of the distance range.
  double state_distance(const AgentState& a) const {
    if (a.assigned_poi) return distance(a.position, env_.poi(*a.assigned_poi).position);
    double best = std::numeric_limits<double>::infinity();
    for (const Poi& p : env_.pois) {
      if (p.status == PoiStatus::kPending && discovered_[p.id]) {
        best = std::min(best, distance(a.position, p.position));
      }
    }
    return std::isfinite(best) ? best : env_.diagonal();
  }

  int learning_state(const AgentState& a) const {
    return discretize_state(state_distance(a), team_trust_[a.id], tables_[a.id]);
  }

  // Where move_to_poi heads: the assigned POI, else the nearest visible one.
  std::optional<int> move_target(const AgentState& a) const {
    if (a.assigned_poi) return a.assigned_poi;
    const auto visible = sense_pois(a, env_);
    if (visible.empty()) return std::nullopt;
    return visible.front();
  }

  // With nothing known to head for, move_to_poi searches: one stride in a
  // freshly drawn random heading, clamped to the arena.
  Vec2 search_step(const AgentState& a) {
    const double heading = rng_.policy().uniform(0.0, 2.0 * std::numbers::pi);
    const double stride = a.speed * env_.terrain.speed_multiplier;
    return {std::clamp(a.position.x + stride * std::cos(heading), 0.0, env_.width),
            std::clamp(a.position.y + stride * std::sin(heading), 0.0, env_.height)};
  }

  // Which POI perform_task would work on, if any is within range.
  std::optional<int> work_target(const AgentState& a) const {
    if (a.assigned_poi) {
      const Poi& p = env_.poi(*a.assigned_poi);
      if (distance(a.position, p.position) <= a.sensing_range) return p.id;
      return std::nullopt;
    }
    const auto visible = sense_pois(a, env_);
    if (visible.empty()) return std::nullopt;
    return visible.front();
  }

  int work_duration(const Poi& poi) const {
    return std::max(1, static_cast<int>(std::ceil(cfg_.work_seconds_per_complexity *
                                                   poi.complexity - 1e-9)));
  }

  // Resolves the attempt an agent has been working on. Returns the reward.
  double finish_work(AgentState& agent, int step, std::vector<TaskOutcome>& outcomes) {
    const TaskOutcome o = attempt_task(agent, env_.poi(*agent.assigned_poi), env_.terrain,
                                       rng_.tasks().uniform(), step, cfg_.env.success);
    agent.assigned_poi.reset();
    agent.busy_until.reset();
    outcomes.push_back(o);
    result_.outcomes.push_back(o);
    return compute_reward(o.success ? RewardEvent::kTaskCompleted : RewardEvent::kTaskFailed,
                          cfg_.reward);
  }

  std::vector<TaskOutcome> act(int step) {
    std::vector<TaskOutcome> outcomes;
    step_agents_.clear();
    for (AgentState& agent : agents_) {
      if (agent.busy_until) {
        // Mid-task: no decision this step; the attempt resolves on its last second.
        double reward = 0.0;
        if (step + 1 >= *agent.busy_until) {
          reward = finish_work(agent, step, outcomes);
          q_update(tables_[agent.id], work_state_[agent.id], Action::kPerformTask, reward,
                   learning_state(agent), cfg_.q_learning);
        }
        log_agent(agent, Action::kPerformTask, reward);
        continue;
      }

      const int s = learning_state(agent);
      const double explore_draw = rng_.policy().uniform();
      const std::uint64_t tiebreak = rng_.policy().next_u64();
      const Action action =
          select_action(tables_[agent.id], s, cfg_.q_learning, explore_draw, tiebreak);

      double reward = compute_reward(RewardEvent::kStepElapsed, cfg_.reward);
      bool learn_now = true;
      switch (action) {
        case Action::kMoveToPoi:
          if (auto target = move_target(agent)) {
            agent = step_agent_motion(agent, env_.poi(*target).position, env_.terrain);
          } else {
            agent = step_agent_motion(agent, search_step(agent), env_.terrain);
          }
          break;
        case Action::kPerformTask:
          if (auto target = work_target(agent)) {
            Poi& poi = env_.poi(*target);
            if (!agent.assigned_poi) {
              poi.status = PoiStatus::kAssigned;
              poi.assigned_agent = agent.id;
              poi.assigned_step = step;
              agent.assigned_poi = poi.id;
            }
            agent.busy_until = step + work_duration(poi);
            work_state_[agent.id] = s;
            if (step + 1 >= *agent.busy_until) {
              reward = finish_work(agent, step, outcomes);
            } else {
              learn_now = false;
              reward = 0.0;
            }
          }
          break;
        case Action::kWait:
          break;
      }

      if (learn_now) {
        q_update(tables_[agent.id], s, action, reward, learning_state(agent), cfg_.q_learning);
      }
      log_agent(agent, action, reward);
    }
    return outcomes;
  }

  void log_agent(const AgentState& agent, Action action, double reward) {
    if (!observer_) return;
    step_agents_.push_back(
        {agent.id, agent.kind, agent.position, agent.assigned_poi, action, reward});
  }

  void record(int step) {
    for (std::size_t slot = 0; slot < robots_.size(); ++slot) {
      result_.trust_trace[slot].samples.push_back({step, team_trust_[robots_[slot]]});
    }
    if (!observer_) return;
    std::vector<std::pair<int, TrustLevel>> trust;
    for (int r : robots_) trust.emplace_back(r, team_trust_[r]);
    observer_(StepRecord{step, &step_agents_, &env_.pois, &trust});
  }

  const Scenario& scenario_;
  ModelKind model_;
  const SimConfig& cfg_;
  const StepObserver& observer_;
  RngStream rng_;

  Environment env_;
  std::vector<AgentState> agents_;
  std::vector<QTable> tables_;
  std::vector<int> robots_;                       // agent ids of robots
  std::vector<std::vector<Evaluator>> evaluators_;  // [human][robot slot]
  std::vector<TrustLevel> team_trust_;            // by agent id; humans fixed at 1
  std::vector<AgentStepRecord> step_agents_;
  std::vector<bool> discovered_;                  // by POI id, shared by the team
  std::vector<int> work_state_;                   // by agent id, state when work began
  EpisodeResult result_;
};

}  // namespace

EpisodeResult run_episode(const Scenario& scenario, ModelKind model, const SimConfig& cfg,
                          std::uint64_t seed, const StepObserver& observer) {
  scenario.validate();
  cfg.validate();
  return Episode(scenario, model, cfg, seed, observer).run();
}

}  // namespace trustsim
