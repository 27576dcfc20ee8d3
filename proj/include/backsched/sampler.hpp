#pragma once

// Overlap-parameterized placement distribution and the greedy sampling loop.
//
// The preference surface G is built from the density estimate F as
// (2a - 1) * F shifted to be non-negative, where a is the requested overlap:
// a = 1 prefers the busiest times, a = 0 the quietest, and a = 0.5 (which the
// formula maps to the all-zero surface) falls back to a uniform preference.
// Placement repeatedly takes the argmax cell, then zeroes an exclusion
// interval around the pick and halves a collar beside it, so later picks keep
// their distance. When every cell reaches zero before the requested count is
// placed, the session fails with SupportExhausted.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "backsched/density.hpp"
#include "backsched/schedule.hpp"

namespace backsched {

struct SamplingDistribution {
  double period_hours = kWeekHours;
  std::vector<double> values;  // non-negative; zero inside recorded exclusions
  double overlap = 0.5;
  std::vector<std::pair<double, double>> exclusions;  // closed [lo, hi] mod P

  int grid_size() const { return static_cast<int>(values.size()); }
  double grid_step() const { return period_hours / grid_size(); }
  double grid_time(int j) const { return j * grid_step(); }
};

/// Shifted overlap transform of the density; near-constant results (the
/// a = 0.5 degeneracy) become a uniform surface of ones.
SamplingDistribution build_sampling_distribution(const DensityEstimate& density, double overlap);

/// Uniform surface for schedules with no history.
SamplingDistribution uniform_sampling_distribution(double period_hours, int grid_size,
                                                   double overlap);

/// Zeroes [tau - spacing, tau + spacing] (closed, mod P) and halves the two
/// collar bands of width spacing * (1 - self_affinity) beside it. Collars
/// from successive calls compose multiplicatively.
void apply_exclusion(SamplingDistribution& dist, double tau, double spacing,
                     double self_affinity);

/// Zeroes every cell whose would-be window (cell += window_hours/2) touches a
/// region already running `limit` or more jobs, so a placement there can
/// never push concurrency past the limit.
void mask_concurrency(SamplingDistribution& dist, const Schedule& schedule, double window_hours,
                      int limit);

/// Zeroes every bucket of bucket_hours that already holds `cap` chosen
/// centers. bucket_hours must divide the period.
void mask_day_cap(SamplingDistribution& dist, std::span<const double> chosen, int cap,
                  double bucket_hours);

struct SampleStep {
  int grid_index = 0;
  int tie_count = 0;        // argmax cells within relative 1e-12 at this step
  double support_mass = 0;  // sum of G after this step's exclusion
};

struct SamplingOutcome {
  std::vector<double> centers;
  std::vector<JobWindow> windows;
  std::vector<SampleStep> trace;
  std::uint64_t seed = 0;
  const char* rng_algorithm = "mt19937_64";
};

struct SupportExhausted {
  SamplingOutcome partial;
  int failed_iteration = 0;  // 1-based step at which no support remained
};

using SampleResult = std::variant<SamplingOutcome, SupportExhausted>;

bool sample_succeeded(const SampleResult& result);

enum class SampleMode {
  Argmax,      // deterministic argmax, ties broken by the seeded generator
  Stochastic,  // inverse-CDF draw proportional to G
};

/// Runs the full placement session. `density` may be empty only for schedules
/// with no windows (uniform start). Throws std::invalid_argument when the
/// request fails validate_request. Identical inputs and seed give bit-equal
/// outcomes. `final_state`, when given, receives the end-of-session G.
SampleResult greedy_sample(const std::optional<DensityEstimate>& density,
                           const Schedule& schedule, const IntentParams& intent,
                           std::uint64_t seed, SampleMode mode = SampleMode::Argmax,
                           int uniform_grid_size = kDefaultGridSize,
                           SamplingDistribution* final_state = nullptr);

}  // namespace backsched
