#pragma once

// Deterministic constrained-grammar reader for restricted English scheduling
// requests ("Backup asset X four times per week with minimal overlap ...").
// Recognized clause kinds: count, period, overlap adjective, explicit
// spacing, daily cap, lull preference, asset name. Anything else is reported
// as a warning, never silently dropped.

#include <string>
#include <utility>
#include <vector>

#include "backsched/schedule.hpp"

namespace backsched {

class IntentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntentClause {
  std::string kind;   // "count", "period", "overlap", "spacing", "cap", "lull", "asset"
  std::string value;  // extracted value, rendered as text
  std::size_t begin = 0;  // source span within the raw string
  std::size_t end = 0;
};

struct IntentPhrase {
  std::string raw;
  std::vector<IntentClause> clauses;
};

struct IntentResult {
  IntentParams params;
  IntentPhrase phrase;
  std::vector<std::string> warnings;
};

/// Adjective/phrase -> overlap value table. Keys are lowercase; the special
/// key "when no other" matches the free-form "when no other ... happening"
/// pattern.
using OverlapTable = std::vector<std::pair<std::string, double>>;

/// Uniform ladder: minimal/no 0.0, low 0.25, moderate 0.5, high 0.75,
/// maximal 1.0.
OverlapTable default_overlap_table();

/// Same ladder with the two published deviations: moderate -> 0.8 and
/// "when no other ... happening" -> 0.2.
OverlapTable paper_overlap_table();

/// Parses `text` against the clause grammar. Unmatched fields keep the values
/// from `defaults`. Throws IntentError when nothing is recognized, when two
/// counts contradict, or when an extracted value is out of range.
IntentResult parse_intent(const std::string& text, const IntentParams& defaults,
                          const OverlapTable& table = default_overlap_table());

/// Canonical sentence for a parameter set; parse_intent(render_intent(p))
/// reproduces p for every p expressible in the grammar.
std::string render_intent(const IntentParams& params,
                          const OverlapTable& table = default_overlap_table());

}  // namespace backsched
