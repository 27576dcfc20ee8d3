#include "backsched/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace backsched {

namespace {

double sample_sd(std::span<const double> points) {
  const std::size_t n = points.size();
  double mean = std::accumulate(points.begin(), points.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : points) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1));
}

// Linear-interpolation quantile of a sorted sample.
double quantile(const std::vector<double>& sorted, double p) {
  double pos = p * (sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  double frac = pos - lo;
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double bandwidth_or_fallback(double h, double period_hours) {
  if (!(h > 0.0) || !std::isfinite(h)) return period_hours / 24.0;
  return h;
}

std::vector<double> kernel_sum(std::span<const double> centers, double bandwidth,
                               double period_hours, int grid_size) {
  std::vector<double> values(grid_size, 0.0);
  const double step = period_hours / grid_size;
  const double inv2h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  for (int j = 0; j < grid_size; ++j) {
    double t = j * step;
    double sum = 0.0;
    for (double c : centers) {
      double d = t - c;
      sum += std::exp(-d * d * inv2h2);
    }
    values[j] = sum;
  }
  return values;
}

}  // namespace

double DensityEstimate::periodic_integral() const {
  // Uniform grid + periodic closure makes the trapezoid rule a plain sum.
  return std::accumulate(values.begin(), values.end(), 0.0) * grid_step();
}

double DensityEstimate::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

double silverman_bandwidth(std::span<const double> points, double period_hours) {
  if (points.empty()) throw std::invalid_argument("bandwidth selection needs at least one point");
  if (points.size() < 2) return period_hours / 24.0;
  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  double spread = std::min(sample_sd(points), iqr / 1.34);
  double h = 0.9 * spread * std::pow(static_cast<double>(points.size()), -0.2);
  return bandwidth_or_fallback(h, period_hours);
}

double scott_bandwidth(std::span<const double> points, double period_hours) {
  if (points.empty()) throw std::invalid_argument("bandwidth selection needs at least one point");
  if (points.size() < 2) return period_hours / 24.0;
  double h = sample_sd(points) * std::pow(static_cast<double>(points.size()), -0.2);
  return bandwidth_or_fallback(h, period_hours);
}

DensityEstimate periodic_kde(const Schedule& schedule, double bandwidth,
                             double expansion_fraction, int grid_size) {
  if (schedule.windows.empty())
    throw std::invalid_argument("periodic_kde needs a schedule with at least one window");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (!(expansion_fraction > 0.0) || expansion_fraction > 1.0)
    throw std::invalid_argument("expansion_fraction must lie in (0, 1]");
  if (grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");

  const double period = schedule.period.period_hours;
  const double u = expansion_fraction * period;

  // Mirror points near the seam so kernel mass wraps instead of leaking.
  std::vector<double> points;
  points.reserve(schedule.windows.size() * 2);
  for (const auto& w : schedule.windows) {
    double c = schedule.period.wrap(w.center);
    points.push_back(c);
    if (c >= period - u) points.push_back(c - period);
    if (c <= u) points.push_back(c + period);
  }

  DensityEstimate density;
  density.period_hours = period;
  density.bandwidth = bandwidth;
  density.expansion = u;
  density.values = kernel_sum(points, bandwidth, period, grid_size);

  double integral = density.periodic_integral();
  if (!(integral > 0.0)) throw std::invalid_argument("degenerate density: zero total mass");
  for (auto& v : density.values) v /= integral;
  return density;
}

std::vector<double> raw_kde(const Schedule& schedule, double bandwidth, int grid_size) {
  if (schedule.windows.empty())
    throw std::invalid_argument("raw_kde needs a schedule with at least one window");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  std::vector<double> centers;
  for (const auto& w : schedule.windows) centers.push_back(schedule.period.wrap(w.center));
  auto values = kernel_sum(centers, bandwidth, schedule.period.period_hours, grid_size);
  // Plain (non-periodic) trapezoid over [0, P): keeps the edge mismatch visible.
  double step = schedule.period.period_hours / grid_size;
  double integral = 0.0;
  for (int j = 0; j + 1 < grid_size; ++j) integral += 0.5 * (values[j] + values[j + 1]) * step;
  if (integral > 0.0)
    for (auto& v : values) v /= integral;
  return values;
}

}  // namespace backsched
