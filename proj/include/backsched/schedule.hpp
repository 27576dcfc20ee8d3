#pragma once

// Periodic backup-window schedule model: windows on a circular timeline of
// period P hours, plus the request parameters and constraint validators used
// by the placement engine.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace backsched {

inline constexpr double kWeekHours = 168.0;
inline constexpr double kDayHours = 24.0;
inline constexpr int kDefaultGridSize = 2016;  // 5-minute cells for a weekly period

/// Malformed schedule files or time tokens.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- time tokens ------------------------------------------------------------
//
// A time token is either "Ddd HH:MM" (day abbreviation + 24h clock, e.g.
// "Mon 13:00", "Tu 08:30", "Su 23:00") or a bare decimal hour offset. Day
// abbreviations are case-insensitive unique prefixes of the English day
// names; "t" and "s" alone are rejected as ambiguous.

/// Hours since Mon 00:00 for a day token, or the raw value for a bare offset.
double parse_time_token(const std::string& token);

bool is_day_token(const std::string& token);

/// "Tue 13:05" for a position on the weekly clock (rounded to the minute).
std::string format_week_time(double week_hours);

/// Shortest separation between two instants on a circle of the given period.
double circular_distance(double a, double b, double period);

struct PeriodConfig {
  double period_hours = kWeekHours;
  std::string origin_label = "Mon 00:00";  // weekly-clock name for t = 0

  double wrap(double t) const;             // reduce into [0, period_hours)
  double origin_week_hours() const;
  double from_week_clock(double week_hours) const;
  double to_week_clock(double t) const;

  /// Day-labelled time for weekly periods, decimal hours otherwise.
  std::string format(double t) const;
};

struct JobWindow {
  std::string client;
  double center = 0.0;  // hours from the period origin, in [0, P)
  double width = 1.0;   // duration in hours, (0, P]
  std::string label;

  double start(const PeriodConfig& period) const { return period.wrap(center - width / 2.0); }
  double end(const PeriodConfig& period) const { return period.wrap(center + width / 2.0); }

  /// Open-interval membership: endpoints do not count as active.
  bool contains(double t, double period) const;
};

struct Schedule {
  PeriodConfig period;
  std::vector<JobWindow> windows;
  std::optional<int> concurrency_limit;

  std::vector<double> centers() const;
};

/// Number of windows active at time t (t is reduced mod P).
int count_active(const Schedule& schedule, double t);

struct ConcurrencyPeak {
  int count = 0;
  double witness = 0.0;  // one instant attaining the peak
};

/// Sweep over window endpoints; exact for open-interval semantics.
ConcurrencyPeak max_concurrency(const Schedule& schedule);

struct SpacingViolation {
  double first = 0.0;
  double second = 0.0;
  double gap = 0.0;
};

/// Checks consecutive circular gaps (including the wrap gap) >= spacing.
/// Violations are data, not errors; an empty result means all gaps pass.
std::vector<SpacingViolation> validate_spacing(std::span<const double> centers,
                                               double spacing,
                                               const PeriodConfig& period);

struct IntentParams {
  int count = 1;                  // number of new windows requested
  double min_spacing_hours = 0.0; // minimum gap between new window centers
  double overlap = 0.5;           // correlation with existing activity, [0, 1]
  double self_affinity = 1.0;     // 1 = no collar around placed windows, [0, 1]
  double window_hours = 1.0;      // width of each new window
  double period_hours = kWeekHours;
  std::optional<int> daily_cap;   // max new windows per bucket
  double cap_bucket_hours = kDayHours;
  std::optional<int> concurrency_limit;  // overrides the schedule's limit
  std::optional<std::string> asset;      // client name for the new windows

  /// Spacing actually enforced between picks: windows must not overlap even
  /// when the requested gap is smaller than the window width.
  double effective_spacing() const;
};

struct RequestCheck {
  bool ok = true;
  std::string detail;
};

/// Well-posedness: parameter ranges, period agreement, and the count/spacing
/// sanity bound count * effective_spacing < period.
RequestCheck validate_request(const Schedule& schedule, const IntentParams& intent);

/// Length of (center +/- width/2) covered by at least one existing window.
double covered_overlap_hours(const Schedule& schedule, double center, double width);

}  // namespace backsched
