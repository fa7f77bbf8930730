#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "normgrid/discretization.hpp"
#include "normgrid/function_spaces.hpp"

namespace normgrid {

/// Builds the N-dimensional member of a named family: "trig" (N odd,
/// degree (N-1)/2) or "discrete" (K = 8 max(N, 64) uniform atoms).
Subspace family_subspace(const std::string& family, int dimension, std::uint64_t seed);

struct SweepConfig {
  std::string family = "trig";
  std::vector<int> sizes;
  double p = 2.0;
  double eps = 0.5;
  double delta = 0.1;
  std::size_t trials = 200;
  std::size_t m_min = 1;
  std::size_t m_max = 1'000'000;
  int restarts = 4;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on eps/delta outside (0,1), an empty or
  /// non-increasing size list, or inconsistent m bounds.
  void validate() const;
};

/// One success-rate evaluation at (N, m).
struct SweepRecord {
  int dimension = 0;
  std::size_t m = 0;
  SuccessEstimate estimate;
};

struct SweepRow {
  int dimension = 0;
  std::size_t m_star = 0;
  bool censored = false;
  SuccessEstimate estimate;  // at m_star (at m_max when censored)
};

/// m* ~ C N (log N)^s.
struct ScalingFit {
  double C = 0.0;
  double s = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
  std::vector<SweepRecord> records;
  /// Absent when any size is censored or fewer than two sizes are >= 3.
  std::optional<ScalingFit> fit;
  bool lower_bound_semantics = false;
};

/// For each N, the smallest m whose Wilson lower bound on the success rate
/// reaches 1 - delta. The search starts at max(N, m_min, previous m*) and
/// proceeds by doubling, then bisection. A size whose doubling passes m_max
/// without success is recorded as censored at m_max.
SweepResult sweep_minimal_m(const SweepConfig& config);

/// Least-squares fit of log m* - log N = log C + s log log N over sizes >= 3.
std::optional<ScalingFit> fit_scaling(const std::vector<SweepRow>& rows);

/// Header N,m,trials,successes,rate,wilson_lo,wilson_hi,censored; one row per N.
std::string sweep_csv(const SweepResult& result);

}  // namespace normgrid
