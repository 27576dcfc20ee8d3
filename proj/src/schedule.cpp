#include "backsched/schedule.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace backsched {

namespace {

const std::array<std::string, 7> kDayNames = {"monday",   "tuesday", "wednesday", "thursday",
                                              "friday",   "saturday", "sunday"};
const std::array<const char*, 7> kDayLabels = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

int match_day(const std::string& abbrev) {
  std::string low = to_lower(abbrev);
  int found = -1;
  for (int d = 0; d < 7; ++d) {
    if (kDayNames[d].compare(0, low.size(), low) == 0) {
      if (found >= 0) throw ParseError("ambiguous day abbreviation '" + abbrev + "'");
      found = d;
    }
  }
  if (found < 0) throw ParseError("unknown day abbreviation '" + abbrev + "'");
  return found;
}

double parse_clock(const std::string& text) {
  int hh = 0, mm = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%d:%d%c", &hh, &mm, &extra) != 2)
    throw ParseError("malformed clock time '" + text + "'");
  if (hh < 0 || hh > 23 || mm < 0 || mm > 59)
    throw ParseError("clock time out of range '" + text + "'");
  return hh + mm / 60.0;
}

}  // namespace

bool is_day_token(const std::string& token) {
  for (unsigned char c : token)
    if (std::isalpha(c)) return true;
  return false;
}

double parse_time_token(const std::string& token) {
  std::string t = trim(token);
  if (t.empty()) throw ParseError("empty time token");
  if (is_day_token(t)) {
    auto sp = t.find_first_of(" \t");
    if (sp == std::string::npos)
      throw ParseError("expected '<day> HH:MM' in '" + t + "'");
    int day = match_day(trim(t.substr(0, sp)));
    double clock = parse_clock(trim(t.substr(sp + 1)));
    return day * 24.0 + clock;
  }
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw ParseError("malformed time token '" + t + "'");
  }
  if (pos != t.size()) throw ParseError("malformed time token '" + t + "'");
  return value;
}

std::string format_week_time(double week_hours) {
  double wrapped = std::fmod(week_hours, kWeekHours);
  if (wrapped < 0) wrapped += kWeekHours;
  long minutes = std::lround(wrapped * 60.0) % (7 * 24 * 60);
  long day = minutes / (24 * 60);
  long hh = (minutes / 60) % 24;
  long mm = minutes % 60;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%s %02ld:%02ld", kDayLabels[day], hh, mm);
  return buf;
}

double circular_distance(double a, double b, double period) {
  double d = std::fabs(std::fmod(a - b, period));
  return std::min(d, period - d);
}

double PeriodConfig::wrap(double t) const {
  double m = std::fmod(t, period_hours);
  if (m < 0) m += period_hours;
  if (m >= period_hours) m = 0.0;  // fmod may land exactly on the period
  return m;
}

double PeriodConfig::origin_week_hours() const { return parse_time_token(origin_label); }

double PeriodConfig::from_week_clock(double week_hours) const {
  return wrap(week_hours - origin_week_hours());
}

double PeriodConfig::to_week_clock(double t) const {
  double w = std::fmod(origin_week_hours() + t, kWeekHours);
  if (w < 0) w += kWeekHours;
  return w;
}

std::string PeriodConfig::format(double t) const {
  if (std::fabs(period_hours - kWeekHours) < 1e-9) return format_week_time(to_week_clock(t));
  std::ostringstream os;
  os << wrap(t) << "h";
  return os.str();
}

bool JobWindow::contains(double t, double period) const {
  return circular_distance(t, center, period) < width / 2.0;
}

std::vector<double> Schedule::centers() const {
  std::vector<double> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(w.center);
  return out;
}

int count_active(const Schedule& schedule, double t) {
  double tt = schedule.period.wrap(t);
  int n = 0;
  for (const auto& w : schedule.windows)
    if (w.contains(tt, schedule.period.period_hours)) ++n;
  return n;
}

ConcurrencyPeak max_concurrency(const Schedule& schedule) {
  if (schedule.windows.empty()) return {0, 0.0};
  const double period = schedule.period.period_hours;
  std::vector<double> bounds;
  bounds.reserve(schedule.windows.size() * 2);
  for (const auto& w : schedule.windows) {
    bounds.push_back(w.start(schedule.period));
    bounds.push_back(w.end(schedule.period));
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

  // Counts are constant on the open arcs between consecutive bounds and can
  // only dip at the bounds themselves, so arc midpoints see every maximum.
  ConcurrencyPeak peak{0, 0.0};
  const std::size_t m = bounds.size();
  for (std::size_t i = 0; i < m; ++i) {
    double lo = bounds[i];
    double hi = (i + 1 < m) ? bounds[i + 1] : bounds[0] + period;
    double mid = schedule.period.wrap((lo + hi) / 2.0);
    int c = count_active(schedule, mid);
    if (c > peak.count) peak = {c, mid};
  }
  return peak;
}

std::vector<SpacingViolation> validate_spacing(std::span<const double> centers,
                                               double spacing,
                                               const PeriodConfig& period) {
  std::vector<SpacingViolation> violations;
  if (centers.size() < 2) return violations;
  std::vector<double> sorted(centers.begin(), centers.end());
  for (auto& c : sorted) c = period.wrap(c);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    double gap = sorted[i + 1] - sorted[i];
    if (gap < spacing) violations.push_back({sorted[i], sorted[i + 1], gap});
  }
  double wrap_gap = sorted.front() + period.period_hours - sorted.back();
  if (wrap_gap < spacing) violations.push_back({sorted.back(), sorted.front(), wrap_gap});
  return violations;
}

double IntentParams::effective_spacing() const {
  return std::max(min_spacing_hours, window_hours);
}

RequestCheck validate_request(const Schedule& schedule, const IntentParams& intent) {
  std::ostringstream os;
  const double period = intent.period_hours;
  if (std::fabs(period - schedule.period.period_hours) > 1e-9) {
    os << "period mismatch: request uses " << period << " h but the schedule uses "
       << schedule.period.period_hours << " h";
    return {false, os.str()};
  }
  if (intent.count < 1) return {false, "count must be a positive integer"};
  if (intent.overlap < 0.0 || intent.overlap > 1.0)
    return {false, "alpha out of range: expected 0 <= alpha <= 1"};
  if (intent.self_affinity < 0.0 || intent.self_affinity > 1.0)
    return {false, "omega out of range: expected 0 <= omega <= 1"};
  if (!(intent.window_hours > 0.0) || intent.window_hours > period)
    return {false, "delta must satisfy 0 < delta <= period"};
  if (intent.min_spacing_hours < 0.0) return {false, "epsilon must be >= 0"};
  if (intent.daily_cap) {
    if (*intent.daily_cap < 1) return {false, "daily cap must be >= 1"};
    double buckets = period / intent.cap_bucket_hours;
    if (std::fabs(buckets - std::round(buckets)) > 1e-9)
      return {false, "cap bucket length must divide the period"};
  }
  if (intent.concurrency_limit && *intent.concurrency_limit < 1)
    return {false, "concurrency limit must be >= 1"};

  const double spacing = intent.effective_spacing();
  if (intent.count * spacing >= period) {
    os << "ill-posed: " << intent.count << " x " << spacing << " = " << intent.count * spacing
       << " >= " << period << " (count x spacing must stay below the period)";
    return {false, os.str()};
  }
  os << intent.count << " x " << spacing << " < " << period;
  return {true, os.str()};
}

double covered_overlap_hours(const Schedule& schedule, double center, double width) {
  const double period = schedule.period.period_hours;
  const double lo = center - width / 2.0;
  const double hi = center + width / 2.0;
  std::vector<std::pair<double, double>> segments;
  for (const auto& w : schedule.windows) {
    double s0 = w.center - w.width / 2.0;
    for (int m = -1; m <= 1; ++m) {
      double s = s0 + m * period;
      double e = s + w.width;
      double a = std::max(s, lo);
      double b = std::min(e, hi);
      if (b > a) segments.emplace_back(a, b);
    }
  }
  if (segments.empty()) return 0.0;
  std::sort(segments.begin(), segments.end());
  double total = 0.0;
  double cur_a = segments[0].first, cur_b = segments[0].second;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (segments[i].first > cur_b) {
      total += cur_b - cur_a;
      cur_a = segments[i].first;
      cur_b = segments[i].second;
    } else {
      cur_b = std::max(cur_b, segments[i].second);
    }
  }
  total += cur_b - cur_a;
  return total;
}

}  // namespace backsched
