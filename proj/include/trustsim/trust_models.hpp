#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

namespace trustsim {

/// Scalar trust in [0, 1]. Out-of-range inputs are clamped on construction.
class TrustLevel {
 public:
  constexpr TrustLevel() = default;
  constexpr explicit TrustLevel(double value)
      : value_(std::clamp(value, 0.0, 1.0)) {}

  constexpr double value() const { return value_; }

  friend constexpr bool operator==(TrustLevel, TrustLevel) = default;

 private:
  double value_ = 0.0;
};

/// What a human evaluator observed about one robot task attempt.
struct PerformanceObservation {
  bool success = false;
  double score = 0.0;       // continuous performance in [0, 1]
  double prev_score = 0.0;  // previous observed performance in [0, 1]
  bool intervention = false;
  bool task_change = false;
};

// ---------------------------------------------------------------------------
// Configurations. Each validate() throws std::invalid_argument naming the
// offending field.

struct MonirConfig {
  double f_predictable = 0.3;
  double f_dependable = 0.5;
  double f_faith = 0.9;
  double epsilon = 0.1;
  double slope = 1.0;

  void validate() const;
};

struct XuDudekConfig {
  // Trust dynamics.
  double w_bias = 0.0;
  double w_performance = 0.1;
  double w_performance_delta = 0.05;
  double sigma = 0.0;
  // Intervention observation.
  double w_intervention_bias = 0.0;
  double w_intervention_trust = 0.0;
  double w_intervention_trust_delta = 0.0;
  double w_intervention_task_change = 0.0;
  bool stochastic = false;
  // The trust-change self-report observation has no parametric form and is
  // not modelled; there is deliberately no field for it.

  void validate() const;
};

struct GuoYangConfig {
  double w_success = 1.0;
  double w_failure = 1.0;
  double alpha0 = 1.0;
  double beta0 = 1.0;

  void validate() const;
};

struct GuoYangState {
  double alpha = 1.0;
  double beta = 1.0;

  friend bool operator==(const GuoYangState&, const GuoYangState&) = default;
};

struct EctConfig {
  double learn_rate = 0.1;
  double scale = 2.0;
  double decay = 0.0;
  std::array<double, 3> facet_weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

  void validate() const;
};

enum class Facet { kCompetence = 0, kAbility = 1, kDependability = 2 };

struct EctState {
  TrustLevel trust{0.5};
  double expectation = 0.5;
  std::array<TrustLevel, 3> facets{TrustLevel{0.5}, TrustLevel{0.5},
                                   TrustLevel{0.5}};
  TrustLevel initial_trust{0.5};
  double initial_expectation = 0.5;

  TrustLevel facet(Facet f) const { return facets[static_cast<int>(f)]; }
};

/// Result of one ECT update with the combined trust before the final clamp,
/// i.e. the facet-weighted sum of the unclamped facet updates.
struct EctStep {
  EctState state;
  double unclamped_trust = 0.0;
};

// ---------------------------------------------------------------------------
// Model operations. All are pure.

/// Four-region step function of robot performance.
TrustLevel monir_trust(double score, const MonirConfig& cfg);

/// Mean trust dynamics. In stochastic mode `noise_draw` must hold a
/// standard-normal sample; it is scaled by cfg.sigma.
TrustLevel xu_dudek_update(TrustLevel prev, const PerformanceObservation& obs,
                           const XuDudekConfig& cfg,
                           std::optional<double> noise_draw = std::nullopt);

/// Probability of a human intervention given the current and previous trust.
/// Diagnostic only.
double xu_dudek_intervention_prob(TrustLevel trust, TrustLevel prev_trust,
                                  const PerformanceObservation& obs,
                                  const XuDudekConfig& cfg);

GuoYangState guo_yang_initial(const GuoYangConfig& cfg);
GuoYangState guo_yang_update(const GuoYangState& state, bool success,
                             const GuoYangConfig& cfg);
TrustLevel guo_yang_predict(const GuoYangState& state);

/// Builds the starting ECT state. Both inputs must be in [0, 1].
EctState ect_initialize(double robot_capability, double task_complexity,
                        const EctConfig& cfg);

/// Episode step cap used to normalise elapsed time in the performance score.
inline constexpr int kPerformanceTimeCap = 500;

/// Performance score from an attempt outcome: half for success, half for
/// speed relative to the episode cap.
double ect_evaluate_performance(bool success, int elapsed_steps);

EctStep ect_step(const EctState& state, double perf, const EctConfig& cfg,
                 bool interacted);
EctState ect_update(const EctState& state, double perf, const EctConfig& cfg,
                    bool interacted);

/// Arithmetic mean of the members' trust in one robot. Throws on empty input.
TrustLevel team_trust_aggregate(std::span<const TrustLevel> member_trusts);

/// Baseline: constant neutral trust.
TrustLevel no_trust(const PerformanceObservation& obs);

// ---------------------------------------------------------------------------
// Model selection.

enum class ModelKind { kNoTrust, kMonir, kXuDudek, kGuoYang, kEct };

inline constexpr std::array<ModelKind, 5> kAllModels{
    ModelKind::kNoTrust, ModelKind::kMonir, ModelKind::kXuDudek,
    ModelKind::kGuoYang, ModelKind::kEct};

std::string_view model_name(ModelKind kind);
std::optional<ModelKind> parse_model(std::string_view name);

struct ModelConfigs {
  MonirConfig monir;
  XuDudekConfig xu_dudek;
  GuoYangConfig guo_yang;
  EctConfig ect;

  void validate() const;
};

}  // namespace trustsim
