#include "trustsim/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trustsim {

std::string_view action_name(Action a) {
  switch (a) {
    case Action::kMoveToPoi: return "move_to_poi";
    case Action::kPerformTask: return "perform_task";
    case Action::kWait: return "wait";
  }
  return "unknown";
}

void QLearningConfig::validate() const {
  if (!(learn_rate > 0.0 && learn_rate <= 1.0)) {
    throw std::invalid_argument("learn_rate: must lie in (0, 1]");
  }
  if (!(discount >= 0.0 && discount < 1.0)) {
    throw std::invalid_argument("discount: must lie in [0, 1)");
  }
  if (!(explore_rate >= 0.0 && explore_rate <= 1.0)) {
    throw std::invalid_argument("explore_rate: must lie in [0, 1]");
  }
}

void RewardConfig::validate() const {
  if (!(completion_reward > 0.0)) {
    throw std::invalid_argument("completion_reward: must be positive");
  }
  if (!(step_cost < 0.0)) throw std::invalid_argument("step_cost: must be negative");
}

void AllocationConfig::validate() const {
  if (w_trust < 0.0) throw std::invalid_argument("w_trust: must be non-negative");
  if (w_distance < 0.0) throw std::invalid_argument("w_distance: must be non-negative");
  if (!(w_trust + w_distance > 0.0)) {
    throw std::invalid_argument("w_trust/w_distance: weights must not both be zero");
  }
}

QTable::QTable(int n_distance_bins, int n_trust_bins, double max_distance)
    : n_distance_bins_(n_distance_bins),
      n_trust_bins_(n_trust_bins),
      max_distance_(max_distance) {
  if (n_distance_bins < 1 || n_trust_bins < 1) {
    throw std::invalid_argument("QTable: bin counts must be positive");
  }
  if (!(max_distance > 0.0)) {
    throw std::invalid_argument("QTable: max_distance must be positive");
  }
  values_.assign(static_cast<std::size_t>(n_states()) * kNumActions, 0.0);
}

int QTable::index(int state, int action) const {
  if (state < 0 || state >= n_states() || action < 0 || action >= kNumActions) {
    throw std::out_of_range("QTable: index (" + std::to_string(state) + ", " +
                            std::to_string(action) + ") out of range");
  }
  return state * kNumActions + action;
}

double QTable::value(int state, int action) const { return values_[index(state, action)]; }

void QTable::set(int state, int action, double v) { values_[index(state, action)] = v; }

double QTable::max_value(int state) const {
  const int base = index(state, 0);
  return *std::max_element(values_.begin() + base, values_.begin() + base + kNumActions);
}

namespace {

int bin(double fraction, int n) {
  const int b = static_cast<int>(std::floor(fraction * n));
  return std::clamp(b, 0, n - 1);
}

}  // namespace

int discretize_state(double distance, TrustLevel trust, const QTable& table) {
  const int d_bin = bin(distance / table.max_distance(), table.n_distance_bins());
  const int t_bin = bin(trust.value(), table.n_trust_bins());
  return d_bin * table.n_trust_bins() + t_bin;
}

Action select_action(const QTable& table, int state, const QLearningConfig& cfg,
                     double rng_draw, std::uint64_t tiebreak_rng) {
  if (rng_draw < cfg.explore_rate) {
    return static_cast<Action>(tiebreak_rng % kNumActions);
  }
  int best = 0;
  for (int a = 1; a < kNumActions; ++a) {
    if (table.value(state, a) > table.value(state, best)) best = a;
  }
  return static_cast<Action>(best);
}

void q_update(QTable& table, int state, Action action, double reward, int next_state,
              const QLearningConfig& cfg) {
  const int a = static_cast<int>(action);
  const double q = table.value(state, a);
  const double target = reward + cfg.discount * table.max_value(next_state);
  table.set(state, a, q + cfg.learn_rate * (target - q));
}

double compute_reward(RewardEvent event, const RewardConfig& cfg) {
  switch (event) {
    case RewardEvent::kTaskCompleted: return cfg.completion_reward;
    case RewardEvent::kTaskFailed: return cfg.failure_cost;
    case RewardEvent::kStepElapsed: return cfg.step_cost;
  }
  return 0.0;
}

std::vector<Assignment> assign_tasks(const std::vector<AgentState>& agents,
                                     const std::vector<Poi>& pois,
                                     const TrustLookup& trust_of,
                                     const AllocationConfig& cfg, double diagonal) {
  std::vector<const Poi*> order;
  order.reserve(pois.size());
  for (const Poi& p : pois) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const Poi* a, const Poi* b) {
    if (a->complexity != b->complexity) return a->complexity > b->complexity;
    return a->id < b->id;
  });

  std::vector<double> trust(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    trust[i] = trust_of(agents[i].id).value();
  }

  std::vector<bool> taken(agents.size(), false);
  std::vector<Assignment> out;
  for (const Poi* poi : order) {
    int best = -1;
    double best_score = 0.0;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (taken[i]) continue;
      const double d = distance(agents[i].position, poi->position);
      const double score = cfg.w_trust * trust[i] + cfg.w_distance * (1.0 - d / diagonal);
      if (best < 0 || score > best_score ||
          (score == best_score && agents[i].id < agents[best].id)) {
        best = static_cast<int>(i);
        best_score = score;
      }
    }
    if (best < 0) break;
    taken[best] = true;
    out.push_back({agents[best].id, poi->id});
  }
  return out;
}

}  // namespace trustsim
