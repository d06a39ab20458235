#include "trustsim/trust_models.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace trustsim {
namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) {
    throw std::invalid_argument(std::string(field) + ": " + what);
  }
}

bool unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void MonirConfig::validate() const {
  require(unit_interval(f_predictable) && unit_interval(f_faith), "f_p/f_f",
          "thresholds must lie in [0, 1]");
  require(f_predictable < f_dependable && f_dependable < f_faith, "f_d",
          "thresholds must satisfy f_p < f_d < f_f");
  require(unit_interval(epsilon), "epsilon", "must lie in [0, 1]");
  require(slope > 0.0, "slope_c", "must be positive");
}

void XuDudekConfig::validate() const {
  require(sigma >= 0.0, "sigma_t", "must be non-negative");
}

void GuoYangConfig::validate() const {
  require(w_success > 0.0, "w_s", "must be positive");
  require(w_failure > 0.0, "w_f", "must be positive");
  require(alpha0 > 0.0, "alpha0", "must be positive");
  require(beta0 > 0.0, "beta0", "must be positive");
}

void EctConfig::validate() const {
  require(learn_rate > 0.0, "learn_rate", "must be positive");
  require(scale > 0.0, "scale", "must be positive");
  require(decay >= 0.0 && decay < 1.0, "decay", "must lie in [0, 1)");
  for (double w : facet_weights) {
    require(w >= 0.0, "facet_weights", "weights must be non-negative");
  }
  const double sum =
      std::accumulate(facet_weights.begin(), facet_weights.end(), 0.0);
  require(std::abs(sum - 1.0) <= 1e-9, "facet_weights", "must sum to 1");
}

void ModelConfigs::validate() const {
  monir.validate();
  xu_dudek.validate();
  guo_yang.validate();
  ect.validate();
}

TrustLevel monir_trust(double score, const MonirConfig& cfg) {
  if (score < cfg.f_predictable) return TrustLevel{0.0};
  if (score < cfg.f_dependable) return TrustLevel{cfg.epsilon};
  if (score < cfg.f_faith) {
    const double delta = score - cfg.f_dependable;
    return TrustLevel{std::min(1.0, cfg.epsilon + std::tanh(cfg.slope * delta))};
  }
  return TrustLevel{1.0};
}

TrustLevel xu_dudek_update(TrustLevel prev, const PerformanceObservation& obs,
                           const XuDudekConfig& cfg,
                           std::optional<double> noise_draw) {
  double next = prev.value() + cfg.w_bias + cfg.w_performance * obs.score +
                cfg.w_performance_delta * (obs.score - obs.prev_score);
  if (cfg.stochastic) {
    if (!noise_draw) {
      throw std::logic_error(
          "xu_dudek_update: stochastic mode requires a noise draw");
    }
    next += cfg.sigma * *noise_draw;
  }
  return TrustLevel{next};
}

double xu_dudek_intervention_prob(TrustLevel trust, TrustLevel prev_trust,
                                  const PerformanceObservation& obs,
                                  const XuDudekConfig& cfg) {
  const double x = cfg.w_intervention_bias +
                   cfg.w_intervention_trust * trust.value() +
                   cfg.w_intervention_trust_delta *
                       (trust.value() - prev_trust.value()) +
                   cfg.w_intervention_task_change * (obs.task_change ? 1.0 : 0.0);
  return sigmoid(x);
}

GuoYangState guo_yang_initial(const GuoYangConfig& cfg) {
  return {cfg.alpha0, cfg.beta0};
}

GuoYangState guo_yang_update(const GuoYangState& state, bool success,
                             const GuoYangConfig& cfg) {
  GuoYangState next = state;
  if (success) {
    next.alpha += cfg.w_success;
  } else {
    next.beta += cfg.w_failure;
  }
  return next;
}

TrustLevel guo_yang_predict(const GuoYangState& state) {
  return TrustLevel{state.alpha / (state.alpha + state.beta)};
}

EctState ect_initialize(double robot_capability, double task_complexity,
                        const EctConfig& /*cfg*/) {
  if (!unit_interval(robot_capability)) {
    throw std::invalid_argument("ect_initialize: robot_capability outside [0, 1]");
  }
  if (!unit_interval(task_complexity)) {
    throw std::invalid_argument("ect_initialize: task_complexity outside [0, 1]");
  }
  const TrustLevel t0{0.5};
  const double e0 = std::clamp(robot_capability - 0.3 * task_complexity, 0.0, 1.0);
  EctState s;
  s.trust = t0;
  s.expectation = e0;
  s.facets = {t0, t0, t0};
  s.initial_trust = t0;
  s.initial_expectation = e0;
  return s;
}

double ect_evaluate_performance(bool success, int elapsed_steps) {
  const double cap = kPerformanceTimeCap;
  const double elapsed = std::clamp(static_cast<double>(elapsed_steps), 0.0, cap);
  return 0.5 * (success ? 1.0 : 0.0) + 0.5 * (1.0 - elapsed / cap);
}

EctStep ect_step(const EctState& state, double perf, const EctConfig& cfg,
                 bool interacted) {
  const double delta = perf - state.expectation;
  const double push = interacted ? cfg.learn_rate * std::tanh(cfg.scale * delta) : 0.0;

  EctStep out{state, 0.0};
  double combined = 0.0;
  for (std::size_t i = 0; i < state.facets.size(); ++i) {
    const double raw = (1.0 - cfg.decay) * state.facets[i].value() + push;
    out.unclamped_trust += cfg.facet_weights[i] * raw;
    out.state.facets[i] = TrustLevel{raw};
    combined += cfg.facet_weights[i] * out.state.facets[i].value();
  }
  out.state.trust = TrustLevel{combined};
  if (interacted) {
    out.state.expectation = 0.9 * state.expectation + 0.1 * perf;
  }
  return out;
}

EctState ect_update(const EctState& state, double perf, const EctConfig& cfg,
                    bool interacted) {
  return ect_step(state, perf, cfg, interacted).state;
}

TrustLevel team_trust_aggregate(std::span<const TrustLevel> member_trusts) {
  if (member_trusts.empty()) {
    throw std::invalid_argument("team_trust_aggregate: empty member list");
  }
  double sum = 0.0;
  for (TrustLevel t : member_trusts) sum += t.value();
  return TrustLevel{sum / static_cast<double>(member_trusts.size())};
}

TrustLevel no_trust(const PerformanceObservation& /*obs*/) {
  return TrustLevel{0.5};
}

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kNoTrust: return "no_trust";
    case ModelKind::kMonir: return "monir";
    case ModelKind::kXuDudek: return "xu_dudek";
    case ModelKind::kGuoYang: return "guo_yang";
    case ModelKind::kEct: return "ect";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model(std::string_view name) {
  for (ModelKind k : kAllModels) {
    if (model_name(k) == name) return k;
  }
  return std::nullopt;
}

}  // namespace trustsim
