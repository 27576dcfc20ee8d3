#include <doctest.h>

#include <string>

#include "backsched/intent.hpp"

using namespace backsched;

namespace {

const char* kWeeklyPrompt =
    "Backup asset VM16as_v1 four times per week with minimal overlap with other backup jobs, "
    "and no more than twice on any day.";

const char* kQuietPrompt =
    "I need to backup VM16as_v1 3 times but try to schedule them when no other backups are "
    "happening, and not more frequently than once every 40 hours.";

const char* kModeratePrompt =
    "Incremental backup for asset VM16as_v1 4 times with moderate overlap with my existing "
    "schedules. Ensure that they are spread apart by at least 10 hours";

const char* kLullPrompt = "Backup VM16as_v1 during lull periods for normal jobs.";

bool has_warning(const IntentResult& r, const std::string& needle) {
  for (const auto& w : r.warnings)
    if (w.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("weekly prompt maps to k=4, P=168, alpha=0, cap 2/day, spacing hint 12") {
  for (const auto& table : {default_overlap_table(), paper_overlap_table()}) {
    auto r = parse_intent(kWeeklyPrompt, IntentParams{}, table);
    CHECK(r.params.count == 4);
    CHECK(r.params.period_hours == doctest::Approx(168.0));
    CHECK(r.params.overlap == doctest::Approx(0.0));
    REQUIRE(r.params.daily_cap.has_value());
    CHECK(*r.params.daily_cap == 2);
    CHECK(r.params.cap_bucket_hours == doctest::Approx(24.0));
    CHECK(r.params.min_spacing_hours == doctest::Approx(12.0));
    REQUIRE(r.params.asset.has_value());
    CHECK(*r.params.asset == "VM16as_v1");
    CHECK(has_warning(r, "spacing hint"));  // the dual reading is surfaced
  }
}

TEST_CASE("quiet prompt maps per table: alpha 0.2 (paper) or 0.0 (default)") {
  auto published = parse_intent(kQuietPrompt, IntentParams{}, paper_overlap_table());
  CHECK(published.params.count == 3);
  CHECK(published.params.min_spacing_hours == doctest::Approx(40.0));
  CHECK(published.params.overlap == doctest::Approx(0.2));
  CHECK(*published.params.asset == "VM16as_v1");

  auto def = parse_intent(kQuietPrompt, IntentParams{}, default_overlap_table());
  CHECK(def.params.overlap == doctest::Approx(0.0));
  CHECK(def.params.min_spacing_hours == doctest::Approx(40.0));
}

TEST_CASE("moderate prompt maps per table: alpha 0.8 (paper) or 0.5 (default)") {
  auto published = parse_intent(kModeratePrompt, IntentParams{}, paper_overlap_table());
  CHECK(published.params.count == 4);
  CHECK(published.params.min_spacing_hours == doctest::Approx(10.0));
  CHECK(published.params.overlap == doctest::Approx(0.8));
  CHECK(*published.params.asset == "VM16as_v1");

  auto def = parse_intent(kModeratePrompt, IntentParams{}, default_overlap_table());
  CHECK(def.params.overlap == doctest::Approx(0.5));
}

TEST_CASE("lull prompt sets alpha 0 and warns about the missing count") {
  auto r = parse_intent(kLullPrompt, IntentParams{});
  CHECK(r.params.overlap == doctest::Approx(0.0));
  CHECK(r.params.count == 1);  // default
  CHECK(*r.params.asset == "VM16as_v1");
  CHECK(has_warning(r, "count not specified"));
}

TEST_CASE("number words and digits both work") {
  CHECK(parse_intent("backup X9 twelve times", IntentParams{}).params.count == 12);
  CHECK(parse_intent("backup X9 7 times", IntentParams{}).params.count == 7);
  auto daily = parse_intent("backup X9 twice per day", IntentParams{});
  CHECK(daily.params.count == 2);
  CHECK(daily.params.period_hours == doctest::Approx(24.0));
}

TEST_CASE("contradictory counts are an error") {
  CHECK_THROWS_AS(parse_intent("backup X9 4 times and also 5 times", IntentParams{}),
                  IntentError);
  // Restating the same count is not a contradiction.
  CHECK(parse_intent("backup X9 4 times, yes 4 times", IntentParams{}).params.count == 4);
}

TEST_CASE("unintelligible text is an error, stray clauses only warn") {
  CHECK_THROWS_AS(parse_intent("what a lovely day outside", IntentParams{}), IntentError);
  CHECK_THROWS_AS(parse_intent("", IntentParams{}), IntentError);

  auto r = parse_intent("Backup asset db_7 3 times per week, place them near the solstice.",
                        IntentParams{});
  CHECK(r.params.count == 3);
  CHECK(has_warning(r, "unrecognized clause"));
  CHECK(has_warning(r, "solstice"));
}

TEST_CASE("explicit spacing clause overrides the cap-derived hint") {
  auto r = parse_intent(
      "backup asset A1 4 times per week, at least 20 hours apart, no more than twice on any day",
      IntentParams{});
  CHECK(r.params.min_spacing_hours == doctest::Approx(20.0));
  REQUIRE(r.params.daily_cap.has_value());
  CHECK(*r.params.daily_cap == 2);
}

TEST_CASE("spacing phrasings are equivalent") {
  CHECK(parse_intent("backup A1 twice, at least 18 hours apart", IntentParams{})
            .params.min_spacing_hours == doctest::Approx(18.0));
  CHECK(parse_intent("backup A1 twice, spread apart by at least 18 hours", IntentParams{})
            .params.min_spacing_hours == doctest::Approx(18.0));
  CHECK(parse_intent("backup A1 twice, not more frequently than once every 18 hours",
                     IntentParams{})
            .params.min_spacing_hours == doctest::Approx(18.0));
}

TEST_CASE("parsing is deterministic") {
  auto a = parse_intent(kWeeklyPrompt, IntentParams{});
  auto b = parse_intent(kWeeklyPrompt, IntentParams{});
  CHECK(a.params.count == b.params.count);
  CHECK(a.params.overlap == b.params.overlap);
  CHECK(a.warnings == b.warnings);
  REQUIRE(a.phrase.clauses.size() == b.phrase.clauses.size());
  for (std::size_t i = 0; i < a.phrase.clauses.size(); ++i) {
    CHECK(a.phrase.clauses[i].kind == b.phrase.clauses[i].kind);
    CHECK(a.phrase.clauses[i].begin == b.phrase.clauses[i].begin);
  }
}

TEST_CASE("render then parse is the identity over the grammar") {
  for (const auto& table : {default_overlap_table(), paper_overlap_table()}) {
    for (int k : {1, 3, 12}) {
      for (double alpha : {0.0, 0.25, 0.8, 1.0}) {
        bool representable = false;
        for (const auto& [key, v] : table) representable |= (v == alpha);
        if (!representable) continue;
        for (double eps : {0.0, 12.0, 41.5}) {
          for (int cap : {0, 2}) {
            IntentParams p;
            p.count = k;
            p.overlap = alpha;
            p.min_spacing_hours = eps;
            if (cap > 0) p.daily_cap = cap;
            p.asset = "VM16as_v1";
            auto rendered = render_intent(p, table);
            auto back = parse_intent(rendered, IntentParams{}, table);
            CHECK(back.params.count == p.count);
            CHECK(back.params.overlap == doctest::Approx(p.overlap));
            CHECK(back.params.min_spacing_hours == doctest::Approx(p.min_spacing_hours));
            CHECK(back.params.daily_cap == p.daily_cap);
            CHECK(back.params.asset == p.asset);
            CHECK(back.params.period_hours == doctest::Approx(p.period_hours));
          }
        }
      }
    }
  }
}

TEST_CASE("clause spans cover the matched text") {
  auto r = parse_intent(kWeeklyPrompt, IntentParams{});
  for (const auto& clause : r.phrase.clauses) {
    CHECK(clause.begin < clause.end);
    CHECK(clause.end <= r.phrase.raw.size());
  }
}
