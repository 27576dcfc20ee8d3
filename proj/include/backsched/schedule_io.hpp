#pragma once

// Schedule file ingestion and serialization.
//
// JSON document:
//   {"period_hours": 168, "origin": "Mon 00:00", "concurrency_limit": 10,
//    "jobs": [{"client": "client 1", "start": "Mon 13:00", "end": "Mon 17:00",
//              "label": "w1"}, ...]}
// CSV alternative: header `client,start,end,label` (label optional).
//
// start/end accept "Ddd HH:MM" tokens or raw hour offsets; an end at or
// before its start wraps forward across t = 0.

#include <string>

#include "backsched/sampler.hpp"
#include "backsched/schedule.hpp"

namespace backsched {

enum class ScheduleFormat { Json, Csv };

Schedule parse_schedule(const std::string& document, ScheduleFormat format);

Schedule parse_schedule_json(const std::string& document);
Schedule parse_schedule_csv(const std::string& document, const PeriodConfig& period = {});

/// Inverse of parse_schedule_json; start/end are emitted as raw hour offsets
/// so a round trip preserves centers and widths exactly.
std::string schedule_to_json(const Schedule& schedule, int indent = 2);

/// Loads a schedule from disk, picking the format from the file extension
/// unless one is forced.
Schedule load_schedule_file(const std::string& path);

/// Extra run facts echoed alongside the effective parameters so an outcome
/// file fully describes how it was produced.
struct RunInfo {
  std::uint64_t seed = 0;
  int grid_size = kDefaultGridSize;
  double bandwidth = 0.0;  // 0 when no density was built
  std::string bandwidth_rule = "silverman";
  double expansion_fraction = 0.25;
  std::string mode = "argmax";
};

std::string sample_result_to_json(const SampleResult& result, const PeriodConfig& period,
                                  const IntentParams& effective, const RunInfo& info,
                                  int indent = 2);

/// Reads the windows back out of an outcome document.
std::vector<JobWindow> parse_outcome_windows(const std::string& document);

}  // namespace backsched
