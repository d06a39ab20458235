#pragma once

#include <optional>
#include <span>

#include "trustsim/sim_engine.hpp"

namespace trustsim {

/// Mean and sample standard deviation (n - 1 denominator; 0 when n == 1).
struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;
  int n = 0;

  friend bool operator==(const SummaryStats&, const SummaryStats&) = default;
};

/// Completed tasks over total tasks. Throws if total_tasks < 1.
double task_success_rate(const EpisodeResult& result, int total_tasks);

/// Mean completion time (s) over completed tasks; empty when none completed.
std::optional<double> average_completion_time(const EpisodeResult& result);

/// Throws std::invalid_argument on an empty input.
SummaryStats aggregate_runs(std::span<const double> values);

/// Aggregates the present values only; nullopt when every value is absent.
std::optional<SummaryStats> aggregate_present(std::span<const std::optional<double>> values);

}  // namespace trustsim
