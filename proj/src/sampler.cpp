#include "backsched/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace backsched {

namespace {

constexpr double kTieRelTol = 1e-12;
// Keeps cells at exactly `spacing` distance inside the closed exclusion in
// spite of grid-time roundoff.
constexpr double kEdgeNudge = 1e-9;

// Uniform draw over [0, n) that depends only on the generator stream.
std::size_t bounded_uniform(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t span = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= span);
  return static_cast<std::size_t>(r % n);
}

double canonical_double(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

struct Arc {
  double center;
  double half_width;
};

// Open arcs where count_active >= limit.
std::vector<Arc> saturated_arcs(const Schedule& schedule, int limit) {
  std::vector<Arc> arcs;
  if (schedule.windows.empty()) return arcs;
  const double period = schedule.period.period_hours;
  std::vector<double> bounds;
  for (const auto& w : schedule.windows) {
    bounds.push_back(w.start(schedule.period));
    bounds.push_back(w.end(schedule.period));
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    double lo = bounds[i];
    double hi = (i + 1 < bounds.size()) ? bounds[i + 1] : bounds[0] + period;
    double mid = schedule.period.wrap((lo + hi) / 2.0);
    if (count_active(schedule, mid) >= limit)
      arcs.push_back({schedule.period.wrap((lo + hi) / 2.0), (hi - lo) / 2.0});
  }
  return arcs;
}

}  // namespace

SamplingDistribution build_sampling_distribution(const DensityEstimate& density, double overlap) {
  if (overlap < 0.0 || overlap > 1.0)
    throw std::invalid_argument("overlap must lie in [0, 1]");
  SamplingDistribution dist;
  dist.period_hours = density.period_hours;
  dist.overlap = overlap;
  dist.values.resize(density.values.size());

  const double coeff = 2.0 * overlap - 1.0;
  double lo = 0.0, hi = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < density.values.size(); ++j) {
    double v = coeff * density.values[j];
    dist.values[j] = v;
    if (j == 0) { lo = hi = v; }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    peak = std::max(peak, std::fabs(density.values[j]));
  }
  if (hi - lo < 1e-12 * std::max(1.0, peak)) {
    // The overlap = 0.5 degeneracy: no preference either way.
    std::fill(dist.values.begin(), dist.values.end(), 1.0);
    return dist;
  }
  for (auto& v : dist.values) v -= lo;
  return dist;
}

SamplingDistribution uniform_sampling_distribution(double period_hours, int grid_size,
                                                   double overlap) {
  if (overlap < 0.0 || overlap > 1.0)
    throw std::invalid_argument("overlap must lie in [0, 1]");
  if (grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");
  SamplingDistribution dist;
  dist.period_hours = period_hours;
  dist.overlap = overlap;
  dist.values.assign(grid_size, 1.0);
  return dist;
}

void apply_exclusion(SamplingDistribution& dist, double tau, double spacing,
                     double self_affinity) {
  const double period = dist.period_hours;
  const double collar = spacing * (1.0 - self_affinity);
  const int n = dist.grid_size();
  for (int j = 0; j < n; ++j) {
    double d = circular_distance(dist.grid_time(j), tau, period);
    if (d <= spacing + kEdgeNudge)
      dist.values[j] = 0.0;
    else if (d <= spacing + collar + kEdgeNudge)
      dist.values[j] *= 0.5;
  }
  double lo = tau - spacing;
  lo -= period * std::floor(lo / period);
  double hi = tau + spacing;
  hi -= period * std::floor(hi / period);
  dist.exclusions.emplace_back(lo, hi);
}

void mask_concurrency(SamplingDistribution& dist, const Schedule& schedule, double window_hours,
                      int limit) {
  if (limit < 1) throw std::invalid_argument("concurrency limit must be >= 1");
  auto arcs = saturated_arcs(schedule, limit);
  if (arcs.empty()) return;
  const double period = dist.period_hours;
  const double reach = window_hours / 2.0;
  for (int j = 0; j < dist.grid_size(); ++j) {
    double t = dist.grid_time(j);
    for (const auto& arc : arcs) {
      if (circular_distance(t, arc.center, period) < reach + arc.half_width) {
        dist.values[j] = 0.0;
        break;
      }
    }
  }
}

void mask_day_cap(SamplingDistribution& dist, std::span<const double> chosen, int cap,
                  double bucket_hours) {
  if (cap < 1) throw std::invalid_argument("daily cap must be >= 1");
  const double period = dist.period_hours;
  double ratio = period / bucket_hours;
  if (std::fabs(ratio - std::round(ratio)) > 1e-9)
    throw std::invalid_argument("bucket length must divide the period");
  const int buckets = static_cast<int>(std::round(ratio));
  std::vector<int> counts(buckets, 0);
  for (double c : chosen) {
    int b = static_cast<int>(std::floor(c / bucket_hours));
    if (b >= 0 && b < buckets) ++counts[b];
  }
  for (int j = 0; j < dist.grid_size(); ++j) {
    int b = static_cast<int>(std::floor(dist.grid_time(j) / bucket_hours));
    if (b < buckets && counts[b] >= cap) dist.values[j] = 0.0;
  }
}

bool sample_succeeded(const SampleResult& result) {
  return std::holds_alternative<SamplingOutcome>(result);
}

SampleResult greedy_sample(const std::optional<DensityEstimate>& density,
                           const Schedule& schedule, const IntentParams& intent,
                           std::uint64_t seed, SampleMode mode, int uniform_grid_size,
                           SamplingDistribution* final_state) {
  auto check = validate_request(schedule, intent);
  if (!check.ok) throw std::invalid_argument(check.detail);
  if (!density && !schedule.windows.empty())
    throw std::invalid_argument("a density estimate is required once the schedule has windows");
  if (density && std::fabs(density->period_hours - schedule.period.period_hours) > 1e-9)
    throw std::invalid_argument("density and schedule disagree on the period");

  SamplingDistribution dist =
      density ? build_sampling_distribution(*density, intent.overlap)
              : uniform_sampling_distribution(schedule.period.period_hours, uniform_grid_size,
                                              intent.overlap);

  if (int limit = intent.concurrency_limit.value_or(schedule.concurrency_limit.value_or(0));
      limit >= 1)
    mask_concurrency(dist, schedule, intent.window_hours, limit);

  const double spacing = intent.effective_spacing();
  std::mt19937_64 rng(seed);

  SamplingOutcome outcome;
  outcome.seed = seed;
  std::vector<std::size_t> ties;

  for (int step = 1; step <= intent.count; ++step) {
    int chosen_index = -1;
    int tie_count = 0;

    if (mode == SampleMode::Argmax) {
      double max_v = *std::max_element(dist.values.begin(), dist.values.end());
      if (!(max_v > 0.0)) {
        if (final_state) *final_state = std::move(dist);
        return SupportExhausted{std::move(outcome), step};
      }
      ties.clear();
      const double threshold = max_v * (1.0 - kTieRelTol);
      for (std::size_t j = 0; j < dist.values.size(); ++j)
        if (dist.values[j] >= threshold) ties.push_back(j);
      tie_count = static_cast<int>(ties.size());
      chosen_index = static_cast<int>(ties.size() == 1 ? ties[0]
                                                       : ties[bounded_uniform(rng, ties.size())]);
    } else {
      double total = std::accumulate(dist.values.begin(), dist.values.end(), 0.0);
      if (!(total > 0.0)) {
        if (final_state) *final_state = std::move(dist);
        return SupportExhausted{std::move(outcome), step};
      }
      double target = canonical_double(rng) * total;
      double running = 0.0;
      chosen_index = dist.grid_size() - 1;
      for (int j = 0; j < dist.grid_size(); ++j) {
        running += dist.values[j];
        if (running > target) {
          chosen_index = j;
          break;
        }
      }
    }

    double tau = dist.grid_time(chosen_index);
    outcome.centers.push_back(tau);
    JobWindow w;
    w.client = intent.asset.value_or("new-client");
    w.center = tau;
    w.width = intent.window_hours;
    w.label = "new-" + std::to_string(step);
    outcome.windows.push_back(std::move(w));

    apply_exclusion(dist, tau, spacing, intent.self_affinity);
    if (intent.daily_cap)
      mask_day_cap(dist, outcome.centers, *intent.daily_cap, intent.cap_bucket_hours);

    double mass = std::accumulate(dist.values.begin(), dist.values.end(), 0.0);
    outcome.trace.push_back({chosen_index, tie_count, mass});
  }

  if (final_state) *final_state = std::move(dist);
  return outcome;
}

}  // namespace backsched
