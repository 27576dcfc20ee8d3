#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "backsched/density.hpp"
#include "backsched/sampler.hpp"

using namespace backsched;

namespace {

Schedule schedule_from_centers(const std::vector<double>& centers, double width = 2.0) {
  Schedule s;
  for (std::size_t i = 0; i < centers.size(); ++i)
    s.windows.push_back({"c" + std::to_string(i), centers[i], width, ""});
  return s;
}

IntentParams basic_intent(int k, double epsilon, double alpha) {
  IntentParams p;
  p.count = k;
  p.min_spacing_hours = epsilon;
  p.overlap = alpha;
  p.self_affinity = 1.0;
  p.window_hours = 1.0;
  return p;
}

int argmax_index(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

int argmin_index(const std::vector<double>& v) {
  return static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST_CASE("overlap transform hits its limiting shapes") {
  auto s = schedule_from_centers({30.0, 31.0, 100.0});
  auto density = periodic_kde(s, 3.0);

  auto high = build_sampling_distribution(density, 1.0);
  // alpha = 1: G is F shifted down by its minimum.
  double f_min = *std::min_element(density.values.begin(), density.values.end());
  for (int j = 0; j < high.grid_size(); ++j)
    CHECK(high.values[j] == doctest::Approx(density.values[j] - f_min).epsilon(1e-12));
  CHECK(argmax_index(high.values) == argmax_index(density.values));

  // alpha = 0: the top of G sits where F is minimal and vice versa. Compare
  // through F because cells of the near-zero plateau tie after the shift.
  auto low = build_sampling_distribution(density, 0.0);
  double f_low = *std::min_element(density.values.begin(), density.values.end());
  CHECK(density.values[argmax_index(low.values)] <= f_low + 1e-9 * density.max_value());
  CHECK(argmin_index(low.values) == argmax_index(density.values));

  auto neutral = build_sampling_distribution(density, 0.5);
  for (double v : neutral.values) CHECK(v == 1.0);

  CHECK_THROWS_AS(build_sampling_distribution(density, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(build_sampling_distribution(density, -0.1), std::invalid_argument);
}

TEST_CASE("exclusion zeroes the window and halves the collar") {
  auto dist = uniform_sampling_distribution(168.0, kDefaultGridSize, 0.5);
  SUBCASE("full self-affinity leaves no collar") {
    apply_exclusion(dist, 84.0, 10.0, 1.0);
    for (int j = 0; j < dist.grid_size(); ++j) {
      double d = circular_distance(dist.grid_time(j), 84.0, 168.0);
      if (d <= 10.0) CHECK(dist.values[j] == 0.0);
      else CHECK(dist.values[j] == 1.0);
    }
    REQUIRE(dist.exclusions.size() == 1);
    CHECK(dist.exclusions[0].first == doctest::Approx(74.0));
    CHECK(dist.exclusions[0].second == doctest::Approx(94.0));
  }
  SUBCASE("zero self-affinity halves a spacing-wide band on each side") {
    apply_exclusion(dist, 84.0, 10.0, 0.0);
    for (int j = 0; j < dist.grid_size(); ++j) {
      double d = circular_distance(dist.grid_time(j), 84.0, 168.0);
      if (d <= 10.0) CHECK(dist.values[j] == 0.0);
      else if (d <= 20.0 + 1e-7) CHECK(dist.values[j] == 0.5);
      else CHECK(dist.values[j] == 1.0);
    }
  }
  SUBCASE("overlapping collars compose multiplicatively") {
    apply_exclusion(dist, 60.0, 10.0, 0.0);  // collar up to distance 20
    apply_exclusion(dist, 95.0, 10.0, 0.0);
    // 77.5 is 17.5 from both centers: inside both collars, outside both cores.
    int j = static_cast<int>(std::lround(77.5 / dist.grid_step()));
    CHECK(dist.values[j] == 0.25);
  }
}

TEST_CASE("exclusions wrap across the period seam") {
  auto dist = uniform_sampling_distribution(168.0, kDefaultGridSize, 0.5);
  apply_exclusion(dist, 2.0, 10.0, 1.0);
  CHECK(dist.values[0] == 0.0);
  CHECK(dist.values[dist.grid_size() - 1] == 0.0);  // 167.9167 is 5.9 h before 2.0
  int far = static_cast<int>(std::lround(84.0 / dist.grid_step()));
  CHECK(dist.values[far] == 1.0);
}

TEST_CASE("exclusion soundness for random parameters") {
  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> tau_dist(0.0, 168.0);
  std::uniform_real_distribution<double> s_dist(1.0, 40.0);
  std::uniform_real_distribution<double> w_dist(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto density = periodic_kde(schedule_from_centers({tau_dist(rng), tau_dist(rng)}), 5.0);
    auto dist = build_sampling_distribution(density, 0.9);
    auto before = dist.values;
    double tau = tau_dist(rng), spacing = s_dist(rng), omega = w_dist(rng);
    apply_exclusion(dist, tau, spacing, omega);
    double collar = spacing * (1.0 - omega);
    for (int j = 0; j < dist.grid_size(); ++j) {
      double d = circular_distance(dist.grid_time(j), tau, 168.0);
      if (d <= spacing) CHECK(dist.values[j] == 0.0);
      if (d > spacing + collar + 1e-6) CHECK(dist.values[j] == before[j]);
    }
  }
}

TEST_CASE("empty schedule samples uniformly with spacing") {
  Schedule empty;
  auto result = greedy_sample(std::nullopt, empty, basic_intent(3, 40.0, 0.7), 123);
  REQUIRE(sample_succeeded(result));
  const auto& outcome = std::get<SamplingOutcome>(result);
  REQUIRE(outcome.centers.size() == 3);
  CHECK(outcome.trace[0].tie_count == kDefaultGridSize);  // every cell tied at first
  CHECK(validate_spacing(outcome.centers, 40.0, empty.period).empty());
  for (const auto& w : outcome.windows) CHECK(w.width == doctest::Approx(1.0));
}

TEST_CASE("identical seeds reproduce outcomes exactly") {
  auto s = schedule_from_centers({20.0, 21.0, 90.0, 140.0});
  auto density = periodic_kde(s, silverman_bandwidth(s.centers(), 168.0));
  auto intent = basic_intent(4, 12.0, 0.8);

  auto a = greedy_sample(density, s, intent, 777);
  auto b = greedy_sample(density, s, intent, 777);
  REQUIRE(sample_succeeded(a));
  REQUIRE(sample_succeeded(b));
  const auto& oa = std::get<SamplingOutcome>(a);
  const auto& ob = std::get<SamplingOutcome>(b);
  REQUIRE(oa.centers.size() == ob.centers.size());
  for (std::size_t i = 0; i < oa.centers.size(); ++i)
    CHECK(oa.centers[i] == ob.centers[i]);  // bit-exact
  for (std::size_t i = 0; i < oa.trace.size(); ++i) {
    CHECK(oa.trace[i].grid_index == ob.trace[i].grid_index);
    CHECK(oa.trace[i].tie_count == ob.trace[i].tie_count);
  }
}

TEST_CASE("seeds only matter when ties exist") {
  Schedule empty;
  auto intent = basic_intent(1, 10.0, 0.5);
  auto a = greedy_sample(std::nullopt, empty, intent, 1);
  auto b = greedy_sample(std::nullopt, empty, intent, 2);
  const auto& oa = std::get<SamplingOutcome>(a);
  const auto& ob = std::get<SamplingOutcome>(b);
  CHECK(oa.centers[0] != ob.centers[0]);  // 2016-way tie, different draws
}

TEST_CASE("alpha limits steer the first pick") {
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> c_dist(0.0, 168.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> centers;
    for (int i = 0; i < 8; ++i) centers.push_back(c_dist(rng));
    auto s = schedule_from_centers(centers);
    auto density = periodic_kde(s, 4.0);
    double f_max = density.max_value();
    double f_min = *std::min_element(density.values.begin(), density.values.end());

    auto top = greedy_sample(density, s, basic_intent(1, 10.0, 1.0), trial);
    int top_idx = std::get<SamplingOutcome>(top).trace[0].grid_index;
    CHECK(density.values[top_idx] >= f_max * (1.0 - 1e-9));

    auto bottom = greedy_sample(density, s, basic_intent(1, 10.0, 0.0), trial);
    int bottom_idx = std::get<SamplingOutcome>(bottom).trace[0].grid_index;
    CHECK(density.values[bottom_idx] <= f_min + 1e-9 * f_max);
  }
}

TEST_CASE("spacing survives tight-but-feasible requests") {
  Schedule empty;
  // 4 x 41 = 164 < 168 passes the sanity bound; succeed or not, spacing holds.
  auto intent = basic_intent(4, 41.0, 0.5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto result = greedy_sample(std::nullopt, empty, intent, seed);
    if (sample_succeeded(result)) {
      const auto& o = std::get<SamplingOutcome>(result);
      CHECK(validate_spacing(o.centers, 41.0, empty.period).empty());
    } else {
      CHECK(std::get<SupportExhausted>(result).partial.centers.size() < 4);
    }
  }
  // 4 x 42 = 168 fails the sanity bound outright.
  CHECK_THROWS_AS(greedy_sample(std::nullopt, empty, basic_intent(4, 42.0, 0.5), 0),
                  std::invalid_argument);
}

TEST_CASE("concurrency mask blocks saturated regions") {
  auto dist = uniform_sampling_distribution(168.0, kDefaultGridSize, 0.5);
  Schedule s = schedule_from_centers({84.0}, 6.0);  // one window [81, 87]

  SUBCASE("slack limit changes nothing") {
    mask_concurrency(dist, s, 2.0, 5);
    for (double v : dist.values) CHECK(v == 1.0);
  }
  SUBCASE("limit 1 dilates the busy span by half a window") {
    mask_concurrency(dist, s, 2.0, 1);
    for (int j = 0; j < dist.grid_size(); ++j) {
      double t = dist.grid_time(j);
      double d = circular_distance(t, 84.0, 168.0);
      if (d < 4.0 - 1e-9) CHECK(dist.values[j] == 0.0);   // span reach 3 + 1
      if (d > 4.0 + 1e-9) CHECK(dist.values[j] == 1.0);
    }
  }
}

TEST_CASE("saturated whole-period schedule exhausts instantly") {
  Schedule s;
  for (int i = 0; i < 7; ++i) s.windows.push_back({"c", 12.0 + 24.0 * i, 24.5, ""});
  s.concurrency_limit = 1;
  auto density = periodic_kde(s, 5.0);
  auto result = greedy_sample(density, s, basic_intent(1, 4.0, 0.5), 9);
  REQUIRE_FALSE(sample_succeeded(result));
  const auto& fail = std::get<SupportExhausted>(result);
  CHECK(fail.failed_iteration == 1);
  CHECK(fail.partial.centers.empty());
}

TEST_CASE("day cap masks filled buckets") {
  auto dist = uniform_sampling_distribution(168.0, kDefaultGridSize, 0.5);
  SUBCASE("two picks on one day zero that day") {
    std::vector<double> chosen = {25.0, 40.0};  // both on day 1 ([24, 48))
    mask_day_cap(dist, chosen, 2, 24.0);
    for (int j = 0; j < dist.grid_size(); ++j) {
      double t = dist.grid_time(j);
      if (t >= 24.0 && t < 48.0) CHECK(dist.values[j] == 0.0);
      else CHECK(dist.values[j] == 1.0);
    }
  }
  SUBCASE("below the cap nothing is masked") {
    std::vector<double> chosen = {25.0, 60.0, 100.0};
    mask_day_cap(dist, chosen, 2, 24.0);
    for (double v : dist.values) CHECK(v == 1.0);
  }
  SUBCASE("bucket length must divide the period") {
    std::vector<double> chosen = {25.0};
    CHECK_THROWS_AS(mask_day_cap(dist, chosen, 1, 13.0), std::invalid_argument);
  }
}

TEST_CASE("pigeonhole day cap exhausts at the predicted iteration") {
  Schedule empty;
  auto intent = basic_intent(8, 1.0, 0.5);
  intent.daily_cap = 1;  // 7 buckets, 8 requests
  for (std::uint64_t seed : {0ULL, 5ULL, 99ULL}) {
    auto result = greedy_sample(std::nullopt, empty, intent, seed);
    REQUIRE_FALSE(sample_succeeded(result));
    const auto& fail = std::get<SupportExhausted>(result);
    CHECK(fail.failed_iteration == 8);
    CHECK(fail.partial.centers.size() == 7);
    // One pick per day.
    std::vector<int> buckets(7, 0);
    for (double c : fail.partial.centers) ++buckets[static_cast<int>(c / 24.0)];
    for (int b : buckets) CHECK(b == 1);
  }
}

TEST_CASE("stochastic mode is seeded and respects spacing") {
  auto s = schedule_from_centers({40.0, 41.0, 120.0});
  auto density = periodic_kde(s, 4.0);
  auto intent = basic_intent(3, 20.0, 0.8);
  auto a = greedy_sample(density, s, intent, 11, SampleMode::Stochastic);
  auto b = greedy_sample(density, s, intent, 11, SampleMode::Stochastic);
  REQUIRE(sample_succeeded(a));
  const auto& oa = std::get<SamplingOutcome>(a);
  const auto& ob = std::get<SamplingOutcome>(b);
  for (std::size_t i = 0; i < oa.centers.size(); ++i) CHECK(oa.centers[i] == ob.centers[i]);
  CHECK(validate_spacing(oa.centers, 20.0, s.period).empty());
}

TEST_CASE("support mass in the trace is non-increasing") {
  Schedule empty;
  auto result = greedy_sample(std::nullopt, empty, basic_intent(4, 20.0, 0.5), 3);
  const auto& o = std::get<SamplingOutcome>(result);
  for (std::size_t i = 1; i < o.trace.size(); ++i)
    CHECK(o.trace[i].support_mass <= o.trace[i - 1].support_mass);
}

TEST_CASE("masked placements never push concurrency past the limit") {
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<int> n_dist(1, 30);
  std::uniform_int_distribution<int> c_dist(0, 1679);
  std::uniform_int_distribution<int> w_dist(5, 80);
  for (int trial = 0; trial < 25; ++trial) {
    Schedule s;
    int n = n_dist(rng);
    for (int i = 0; i < n; ++i)
      s.windows.push_back({"c" + std::to_string(i), c_dist(rng) * 0.1, w_dist(rng) * 0.1, ""});
    int limit = max_concurrency(s).count + static_cast<int>(rng() % 2);
    if (limit < 1) limit = 1;

    IntentParams intent;
    intent.count = 1 + static_cast<int>(rng() % 3);
    intent.min_spacing_hours = 4.0;
    intent.window_hours = 2.0;
    intent.overlap = 0.8;
    intent.concurrency_limit = limit;

    auto density = periodic_kde(s, std::max(silverman_bandwidth(s.centers(), 168.0), 1.0));
    auto result = greedy_sample(density, s, intent, trial);
    if (!sample_succeeded(result)) continue;

    Schedule merged = s;
    for (const auto& w : std::get<SamplingOutcome>(result).windows) merged.windows.push_back(w);
    int brute = 0;
    for (int j = 0; j < 10000; ++j)
      brute = std::max(brute, count_active(merged, 168.0 * j / 10000));
    for (const auto& w : merged.windows) {
      brute = std::max(brute, count_active(merged, w.start(merged.period)));
      brute = std::max(brute, count_active(merged, w.end(merged.period)));
    }
    CHECK(brute <= limit);
  }
}

TEST_CASE("recorded exclusions stay at zero through the whole session") {
  auto s = schedule_from_centers({20.0, 60.0, 110.0, 150.0});
  auto density = periodic_kde(s, 5.0);
  IntentParams intent = basic_intent(4, 15.0, 0.7);
  intent.self_affinity = 0.3;
  SamplingDistribution final_state;
  auto result =
      greedy_sample(density, s, intent, 77, SampleMode::Argmax, kDefaultGridSize, &final_state);
  REQUIRE(sample_succeeded(result));
  REQUIRE(final_state.exclusions.size() == 4);
  for (const auto& [lo, hi] : final_state.exclusions) {
    for (int j = 0; j < final_state.grid_size(); ++j) {
      double t = final_state.grid_time(j);
      bool inside = lo <= hi ? (t >= lo && t <= hi) : (t >= lo || t <= hi);
      if (inside) CHECK(final_state.values[j] == 0.0);
    }
  }
}

TEST_CASE("greedy_sample validates its inputs") {
  auto s = schedule_from_centers({10.0});
  auto density = periodic_kde(s, 2.0);
  CHECK_THROWS_AS(greedy_sample(std::nullopt, s, basic_intent(1, 4.0, 0.5), 0),
                  std::invalid_argument);  // density required once windows exist
  auto bad = basic_intent(1, 4.0, 1.5);
  CHECK_THROWS_AS(greedy_sample(density, s, bad, 0), std::invalid_argument);
}
