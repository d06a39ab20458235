#pragma once

#include <array>
#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "trustsim/environment.hpp"
#include "trustsim/trust_models.hpp"

namespace trustsim {

enum class Action { kMoveToPoi = 0, kPerformTask = 1, kWait = 2 };

inline constexpr int kNumActions = 3;

std::string_view action_name(Action a);

struct QLearningConfig {
  double learn_rate = 0.1;
  double discount = 0.9;
  double explore_rate = 0.1;

  void validate() const;
};

struct RewardConfig {
  double completion_reward = 1.0;
  double step_cost = -0.01;
  double failure_cost = -0.1;

  void validate() const;
};

struct AllocationConfig {
  double w_trust = 0.5;
  double w_distance = 0.5;

  void validate() const;
};

/// Tabular action values over a (distance bin x trust bin) state grid.
class QTable {
 public:
  explicit QTable(int n_distance_bins = 5, int n_trust_bins = 5,
                  double max_distance = 141.42);

  int n_distance_bins() const { return n_distance_bins_; }
  int n_trust_bins() const { return n_trust_bins_; }
  int n_states() const { return n_distance_bins_ * n_trust_bins_; }
  double max_distance() const { return max_distance_; }

  double value(int state, int action) const;
  void set(int state, int action, double v);
  double max_value(int state) const;

  const std::vector<double>& values() const { return values_; }

 private:
  int index(int state, int action) const;

  int n_distance_bins_;
  int n_trust_bins_;
  double max_distance_;
  std::vector<double> values_;
};

/// Uniform binning of distance over [0, max_distance] and trust over [0, 1];
/// the top edge falls in the last bin. Index is d_bin * n_trust_bins + t_bin.
int discretize_state(double distance, TrustLevel trust, const QTable& table);

/// Epsilon-greedy: explores (tiebreak_rng mod 3) when rng_draw < explore_rate,
/// otherwise returns the lowest-index argmax.
Action select_action(const QTable& table, int state, const QLearningConfig& cfg,
                     double rng_draw, std::uint64_t tiebreak_rng);

/// One temporal-difference update of Q(state, action).
void q_update(QTable& table, int state, Action action, double reward,
              int next_state, const QLearningConfig& cfg);

enum class RewardEvent { kTaskCompleted, kTaskFailed, kStepElapsed };

double compute_reward(RewardEvent event, const RewardConfig& cfg);

struct Assignment {
  int agent_id = 0;
  int poi_id = 0;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

using TrustLookup = std::function<TrustLevel(int agent_id)>;

/// Greedy matching: the most complex POIs are placed first, each with the
/// best-scoring unassigned agent. `diagonal` normalises distances.
std::vector<Assignment> assign_tasks(const std::vector<AgentState>& agents,
                                     const std::vector<Poi>& pois,
                                     const TrustLookup& trust_of,
                                     const AllocationConfig& cfg,
                                     double diagonal = 141.42);

}  // namespace trustsim
