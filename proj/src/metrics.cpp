#include "trustsim/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace trustsim {

double task_success_rate(const EpisodeResult& result, int total_tasks) {
  if (total_tasks < 1) {
    throw std::invalid_argument("task_success_rate: total_tasks must be at least 1");
  }
  return static_cast<double>(result.completed_count()) / total_tasks;
}

std::optional<double> average_completion_time(const EpisodeResult& result) {
  double sum = 0.0;
  int n = 0;
  for (const TaskOutcome& o : result.outcomes) {
    if (!o.success) continue;
    sum += o.step;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

SummaryStats aggregate_runs(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("aggregate_runs: no values");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;

  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd, static_cast<int>(values.size())};
}

std::optional<SummaryStats> aggregate_present(
    std::span<const std::optional<double>> values) {
  std::vector<double> present;
  for (const auto& v : values) {
    if (v) present.push_back(*v);
  }
  if (present.empty()) return std::nullopt;
  return aggregate_runs(present);
}

}  // namespace trustsim
