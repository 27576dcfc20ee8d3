#include "backsched/intent.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <regex>
#include <sstream>

namespace backsched {

namespace {

const std::map<std::string, int> kNumberWords = {
    {"once", 1}, {"twice", 2},  {"thrice", 3}, {"one", 1},   {"two", 2},    {"three", 3},
    {"four", 4}, {"five", 5},   {"six", 6},    {"seven", 7}, {"eight", 8},  {"nine", 9},
    {"ten", 10}, {"eleven", 11}, {"twelve", 12}};

constexpr const char* kNumberPattern =
    "once|twice|thrice|one|two|three|four|five|six|seven|eight|nine|ten|eleven|twelve|"
    "[0-9]+(?:\\.[0-9]+)?";

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_number(const std::string& text) {
  auto it = kNumberWords.find(to_lower(text));
  if (it != kNumberWords.end()) return it->second;
  return std::stod(text);
}

std::string format_number(double v) {
  if (std::fabs(v - std::round(v)) < 1e-9) return std::to_string(static_cast<long long>(std::llround(v)));
  std::ostringstream os;
  os << v;
  return os.str();
}

bool identifier_like(const std::string& token) {
  bool digit = false, underscore = false, upper = false, lower = false;
  for (unsigned char c : token) {
    if (std::isdigit(c)) digit = true;
    if (c == '_' || c == '-') underscore = true;
    if (std::isupper(c)) upper = true;
    if (std::islower(c)) lower = true;
  }
  return digit || underscore || (upper && lower);
}

struct PatternSpec {
  const char* kind;
  std::regex re;
  int value_group;  // -1: no captured value
};

const std::vector<PatternSpec>& patterns() {
  static const auto icase = std::regex::icase | std::regex::optimize;
  static const std::string num = std::string("\\b(") + kNumberPattern + ")\\b";
  static const std::vector<PatternSpec> specs = [&] {
    std::vector<PatternSpec> v;
    v.push_back({"cap", std::regex("no\\s+more\\s+than\\s+" + num +
                                       "(?:\\s+times?)?(?:\\s+backups?)?\\s+"
                                       "(?:on\\s+any\\s+(?:single\\s+)?day|per\\s+day|a\\s+day)",
                                   icase),
                 1});
    v.push_back({"spacing", std::regex("(?:spread|spaced)\\s+(?:them\\s+)?apart\\s+by\\s+at\\s+"
                                       "least\\s+" + num + "\\s+hours?",
                                       icase),
                 1});
    v.push_back({"spacing", std::regex("at\\s+least\\s+" + num + "\\s+hours?\\s+apart", icase), 1});
    v.push_back({"spacing", std::regex("(?:not\\s+more\\s+frequently\\s+than\\s+)?once\\s+"
                                       "(?:in\\s+)?every\\s+" + num + "\\s+hours?",
                                       icase),
                 1});
    v.push_back({"overlap-phrase",
                 std::regex("when\\s+no\\s+other[^,.;]*?happening", icase), -1});
    v.push_back({"lull", std::regex("during\\s+(?:the\\s+)?lull\\s+periods?", icase), -1});
    v.push_back({"overlap",
                 std::regex("(minimal|no|low|moderate|high|maximal)\\s+overlap", icase), 1});
    v.push_back({"period-week",
                 std::regex("per\\s+week|weekly|a\\s+week|each\\s+week", icase), -1});
    v.push_back({"period-day", std::regex("per\\s+day|daily|each\\s+day", icase), -1});
    v.push_back({"count", std::regex(num + "\\s+times?\\b", icase), 1});
    v.push_back({"count", std::regex("\\b(once|twice|thrice)\\b", icase), 1});
    v.push_back({"asset", std::regex("asset\\s+([A-Za-z_][A-Za-z0-9_\\-]*)", icase), 1});
    v.push_back({"asset-guess",
                 std::regex("back(?:up|ing\\s+up)\\s+([A-Za-z_][A-Za-z0-9_\\-]*)", icase), 1});
    return v;
  }();
  return specs;
}

double table_lookup(const OverlapTable& table, const std::string& key) {
  for (const auto& [k, v] : table)
    if (k == key) return v;
  throw IntentError("overlap table has no entry for '" + key + "'");
}

}  // namespace

OverlapTable default_overlap_table() {
  return {{"minimal", 0.0}, {"no", 0.0},   {"when no other", 0.0}, {"low", 0.25},
          {"moderate", 0.5}, {"high", 0.75}, {"maximal", 1.0}};
}

OverlapTable paper_overlap_table() {
  return {{"minimal", 0.0}, {"no", 0.0},   {"when no other", 0.2}, {"low", 0.25},
          {"moderate", 0.8}, {"high", 0.75}, {"maximal", 1.0}};
}

IntentResult parse_intent(const std::string& text, const IntentParams& defaults,
                          const OverlapTable& table) {
  if (text.empty()) throw IntentError("intent text is empty");

  IntentResult result;
  result.params = defaults;
  result.phrase.raw = text;
  std::vector<char> consumed(text.size(), 0);

  auto overlaps_consumed = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end && i < consumed.size(); ++i)
      if (consumed[i]) return true;
    return false;
  };

  for (const auto& spec : patterns()) {
    auto begin = std::sregex_iterator(text.begin(), text.end(), spec.re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
      const std::smatch& m = *it;
      std::size_t pos = m.position(0);
      std::size_t end = pos + m.length(0);
      if (overlaps_consumed(pos, end)) continue;
      std::string value = spec.value_group >= 0 ? m.str(spec.value_group) : "";
      if (std::string(spec.kind) == "asset-guess" && !identifier_like(value)) continue;
      for (std::size_t i = pos; i < end; ++i) consumed[i] = 1;
      result.phrase.clauses.push_back({spec.kind, value, pos, end});
    }
  }

  if (result.phrase.clauses.empty())
    throw IntentError("intent text contains no recognizable scheduling clause");

  // Apply clauses to the parameter set. Counts must agree; for other kinds
  // the first occurrence wins and later disagreements only warn.
  bool have_count = false, have_period = false, have_overlap = false, have_spacing = false;
  bool have_cap = false, have_asset = false;
  for (const auto& clause : result.phrase.clauses) {
    const std::string& kind = clause.kind;
    if (kind == "count") {
      int k = static_cast<int>(std::lround(parse_number(clause.value)));
      if (have_count && k != result.params.count)
        throw IntentError("contradictory counts: " + std::to_string(result.params.count) +
                          " vs " + std::to_string(k));
      result.params.count = k;
      have_count = true;
    } else if (kind == "period-week" || kind == "period-day") {
      double p = kind == "period-week" ? kWeekHours : kDayHours;
      if (have_period && p != result.params.period_hours)
        result.warnings.push_back("conflicting period clauses; keeping the first");
      else
        result.params.period_hours = p;
      have_period = true;
    } else if (kind == "overlap" || kind == "overlap-phrase" || kind == "lull") {
      double alpha = kind == "overlap"    ? table_lookup(table, to_lower(clause.value))
                     : kind == "lull"     ? 0.0
                                          : table_lookup(table, "when no other");
      if (have_overlap && alpha != result.params.overlap)
        result.warnings.push_back("conflicting overlap clauses; keeping the first");
      else
        result.params.overlap = alpha;
      have_overlap = true;
    } else if (kind == "spacing") {
      double eps = parse_number(clause.value);
      if (have_spacing && eps != result.params.min_spacing_hours)
        result.warnings.push_back("conflicting spacing clauses; keeping the first");
      else
        result.params.min_spacing_hours = eps;
      have_spacing = true;
    } else if (kind == "cap") {
      int cap = static_cast<int>(std::lround(parse_number(clause.value)));
      if (cap < 1) throw IntentError("daily cap must be at least 1");
      if (have_cap && result.params.daily_cap && cap != *result.params.daily_cap) {
        result.warnings.push_back("conflicting cap clauses; keeping the first");
      } else {
        result.params.daily_cap = cap;
        result.params.cap_bucket_hours = kDayHours;
      }
      have_cap = true;
    } else if (kind == "asset" || kind == "asset-guess") {
      if (!have_asset) result.params.asset = clause.value;
      have_asset = true;
    }
  }

  // A per-day cap also implies spreading within the day, so emit the spacing
  // reading as a hint unless an explicit spacing clause was given.
  if (have_cap && !have_spacing) {
    double hint = result.params.cap_bucket_hours / *result.params.daily_cap;
    result.params.min_spacing_hours = std::max(result.params.min_spacing_hours, hint);
    std::ostringstream os;
    os << "'no more than " << *result.params.daily_cap
       << " on any day' read both as a daily cap and as a spacing hint (epsilon >= "
       << format_number(hint) << " h)";
    result.warnings.push_back(os.str());
  }

  if (!have_count)
    result.warnings.push_back("count not specified; using default " +
                              std::to_string(result.params.count));

  if (result.params.count < 1) throw IntentError("count must be a positive integer");
  if (result.params.overlap < 0.0 || result.params.overlap > 1.0)
    throw IntentError("overlap value out of range");
  if (result.params.min_spacing_hours < 0.0) throw IntentError("spacing must be >= 0");

  // Surface any clause-free stretch of the text instead of dropping it.
  static const std::regex splitter("[.,;]|\\b(?:and|but)\\b", std::regex::icase);
  std::size_t seg_start = 0;
  auto flush_segment = [&](std::size_t seg_end) {
    while (seg_start < seg_end && std::isspace(static_cast<unsigned char>(text[seg_start])))
      ++seg_start;
    std::size_t trimmed_end = seg_end;
    while (trimmed_end > seg_start &&
           std::isspace(static_cast<unsigned char>(text[trimmed_end - 1])))
      --trimmed_end;
    if (trimmed_end <= seg_start) return;
    bool has_word = false;
    for (std::size_t i = seg_start; i < trimmed_end; ++i)
      if (std::isalnum(static_cast<unsigned char>(text[i]))) has_word = true;
    if (!has_word) return;
    bool recognized = false;
    for (const auto& clause : result.phrase.clauses)
      if (clause.begin < trimmed_end && clause.end > seg_start) recognized = true;
    if (!recognized)
      result.warnings.push_back("unrecognized clause: '" +
                                text.substr(seg_start, trimmed_end - seg_start) + "'");
  };
  for (auto it = std::sregex_iterator(text.begin(), text.end(), splitter);
       it != std::sregex_iterator(); ++it) {
    flush_segment(it->position(0));
    seg_start = it->position(0) + it->length(0);
  }
  flush_segment(text.size());

  return result;
}

std::string render_intent(const IntentParams& params, const OverlapTable& table) {
  std::ostringstream os;
  os << "Backup";
  if (params.asset) os << " asset " << *params.asset;
  os << " " << params.count << " times";
  if (std::fabs(params.period_hours - kWeekHours) < 1e-9)
    os << " per week";
  else if (std::fabs(params.period_hours - kDayHours) < 1e-9)
    os << " per day";

  static const char* kAdjectiveOrder[] = {"minimal", "low", "moderate", "high", "maximal"};
  const char* adjective = nullptr;
  for (const char* adj : kAdjectiveOrder) {
    for (const auto& [k, v] : table)
      if (k == adj && v == params.overlap) adjective = adj;
    if (adjective) break;
  }
  if (adjective) {
    os << " with " << adjective << " overlap with other backup jobs";
  } else {
    for (const auto& [k, v] : table)
      if (k == "when no other" && v == params.overlap)
        os << ", scheduled when no other backups are happening";
  }

  if (params.min_spacing_hours > 0.0 || params.daily_cap)
    os << ", at least " << format_number(params.min_spacing_hours) << " hours apart";
  if (params.daily_cap && std::fabs(params.cap_bucket_hours - kDayHours) < 1e-9)
    os << ", and no more than " << *params.daily_cap << " on any day";
  os << ".";
  return os.str();
}

}  // namespace backsched
