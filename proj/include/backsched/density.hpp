#pragma once

// Boundary-corrected periodic kernel density estimate of window-center
// activity. Plain KDEs assume an unbounded axis and misbehave at t = 0 and
// t = P; here the data is replicated into an expanded domain [-u, P+u],
// evaluated on a fixed grid over [0, P), and renormalized, so the estimate
// is continuous across the period seam and integrates to one.

#include <span>
#include <vector>

#include "backsched/schedule.hpp"

namespace backsched {

// Full replication by default: every point is mirrored one period out on
// both sides, so seam continuity survives even the large bandwidths the
// sample-based rules pick on spread-out data.
inline constexpr double kDefaultExpansionFraction = 1.0;

struct DensityEstimate {
  double period_hours = kWeekHours;
  std::vector<double> values;  // density at grid_time(j), non-negative
  double bandwidth = 1.0;      // kernel width in hours
  double expansion = 0.0;      // replication margin u in hours

  int grid_size() const { return static_cast<int>(values.size()); }
  double grid_step() const { return period_hours / grid_size(); }
  double grid_time(int j) const { return j * grid_step(); }

  /// Trapezoidal integral over one period, treating values as periodic.
  double periodic_integral() const;
  double max_value() const;
};

/// 0.9 * min(sd, IQR/1.34) * n^(-1/5); falls back to period/24 when the
/// sample is degenerate (n < 2 or zero spread).
double silverman_bandwidth(std::span<const double> points, double period_hours = kWeekHours);

/// sd * n^(-1/5) with the same degenerate fallback.
double scott_bandwidth(std::span<const double> points, double period_hours = kWeekHours);

/// Gaussian-kernel estimate over the schedule's window centers. Points within
/// expansion_fraction * P of either boundary are mirrored across it before
/// evaluation. Requires at least one window and a positive bandwidth.
DensityEstimate periodic_kde(const Schedule& schedule, double bandwidth,
                             double expansion_fraction = kDefaultExpansionFraction,
                             int grid_size = kDefaultGridSize);

/// Uncorrected estimate (no replication, plain trapezoid normalization) for
/// visualizing the edge artifacts the periodic version removes.
std::vector<double> raw_kde(const Schedule& schedule, double bandwidth,
                            int grid_size = kDefaultGridSize);

}  // namespace backsched
