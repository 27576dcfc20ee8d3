#include "backsched/schedule_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace backsched {

namespace {

using nlohmann::json;

double parse_endpoint(const json& value, const char* key) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return parse_time_token(value.get<std::string>());
  throw ParseError(std::string("job field '") + key + "' must be a time token or number");
}

JobWindow make_window(const PeriodConfig& period, const std::string& client, double start_week,
                      double end_week, const std::string& label) {
  const double period_h = period.period_hours;
  double start = period.from_week_clock(start_week);
  double end = period.from_week_clock(end_week);
  double raw = end_week - start_week;
  if (raw > period_h + 1e-12)
    throw ParseError("window duration exceeds the period for '" + client + "'");
  double duration;
  if (end == start) {
    // Only an explicit raw offset of one full period names a full-width window.
    if (std::fabs(raw - period_h) <= 1e-12) duration = period_h;
    else throw ParseError("window for '" + client + "' has zero duration");
  } else {
    duration = end > start ? end - start : end - start + period_h;
  }
  if (!(duration > 0.0) || duration > period_h)
    throw ParseError("window duration must lie in (0, period] for '" + client + "'");
  JobWindow w;
  w.client = client;
  w.center = period.wrap(start + duration / 2.0);
  w.width = duration;
  w.label = label;
  return w;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string trim_ws(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Schedule parse_schedule(const std::string& document, ScheduleFormat format) {
  return format == ScheduleFormat::Json ? parse_schedule_json(document)
                                        : parse_schedule_csv(document);
}

Schedule parse_schedule_json(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("schedule document must be a JSON object");

  Schedule schedule;
  schedule.period.period_hours = doc.value("period_hours", kWeekHours);
  if (!(schedule.period.period_hours > 0.0)) throw ParseError("period_hours must be positive");
  schedule.period.origin_label = doc.value("origin", std::string("Mon 00:00"));
  parse_time_token(schedule.period.origin_label);  // validate early
  if (doc.contains("concurrency_limit") && !doc["concurrency_limit"].is_null()) {
    int limit = doc["concurrency_limit"].get<int>();
    if (limit < 1) throw ParseError("concurrency_limit must be >= 1");
    schedule.concurrency_limit = limit;
  }
  if (!doc.contains("jobs") || !doc["jobs"].is_array())
    throw ParseError("schedule document requires a 'jobs' array");

  for (const auto& job : doc["jobs"]) {
    if (!job.is_object()) throw ParseError("each job must be an object");
    std::string client = job.value("client", std::string());
    if (client.empty()) throw ParseError("job is missing a 'client'");
    if (!job.contains("start") || !job.contains("end"))
      throw ParseError("job for '" + client + "' needs 'start' and 'end'");
    double start = parse_endpoint(job["start"], "start");
    double end = parse_endpoint(job["end"], "end");
    schedule.windows.push_back(
        make_window(schedule.period, client, start, end, job.value("label", std::string())));
  }
  return schedule;
}

Schedule parse_schedule_csv(const std::string& document, const PeriodConfig& period) {
  Schedule schedule;
  schedule.period = period;
  std::istringstream is(document);
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    line = trim_ws(line);
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    for (auto& f : fields) f = trim_ws(f);
    if (!header_seen) {
      if (fields.size() < 3 || fields[0] != "client" || fields[1] != "start" ||
          fields[2] != "end")
        throw ParseError("CSV header must be 'client,start,end[,label]'");
      header_seen = true;
      continue;
    }
    if (fields.size() < 3) throw ParseError("CSV row needs client,start,end: '" + line + "'");
    double start = parse_time_token(fields[1]);
    double end = parse_time_token(fields[2]);
    std::string label = fields.size() > 3 ? fields[3] : "";
    schedule.windows.push_back(make_window(schedule.period, fields[0], start, end, label));
  }
  if (!header_seen) throw ParseError("empty CSV document");
  return schedule;
}

std::string schedule_to_json(const Schedule& schedule, int indent) {
  json doc;
  doc["period_hours"] = schedule.period.period_hours;
  doc["origin"] = schedule.period.origin_label;
  if (schedule.concurrency_limit) doc["concurrency_limit"] = *schedule.concurrency_limit;
  json jobs = json::array();
  const double origin = schedule.period.origin_week_hours();
  for (const auto& w : schedule.windows) {
    json job;
    job["client"] = w.client;
    // Raw offsets on the weekly clock: lossless, still valid token inputs.
    job["start"] = origin + w.center - w.width / 2.0;
    job["end"] = origin + w.center + w.width / 2.0;
    if (!w.label.empty()) job["label"] = w.label;
    jobs.push_back(job);
  }
  doc["jobs"] = jobs;
  return doc.dump(indent);
}

Schedule load_schedule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open schedule file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  return parse_schedule(buffer.str(), csv ? ScheduleFormat::Csv : ScheduleFormat::Json);
}

namespace {

json params_to_json(const IntentParams& p) {
  json out;
  out["k"] = p.count;
  out["epsilon"] = p.min_spacing_hours;
  out["alpha"] = p.overlap;
  out["omega"] = p.self_affinity;
  out["delta"] = p.window_hours;
  out["period"] = p.period_hours;
  out["daily_cap"] = p.daily_cap ? json(*p.daily_cap) : json(nullptr);
  out["cap_bucket"] = p.cap_bucket_hours;
  out["limit"] = p.concurrency_limit ? json(*p.concurrency_limit) : json(nullptr);
  out["asset"] = p.asset ? json(*p.asset) : json(nullptr);
  return out;
}

json outcome_body(const SamplingOutcome& outcome, const PeriodConfig& period) {
  json out;
  out["centers"] = outcome.centers;
  json windows = json::array();
  for (const auto& w : outcome.windows) {
    json jw;
    jw["client"] = w.client;
    jw["label"] = w.label;
    jw["start"] = period.format(w.center - w.width / 2.0);
    jw["end"] = period.format(w.center + w.width / 2.0);
    jw["center_hours"] = w.center;
    jw["width_hours"] = w.width;
    windows.push_back(jw);
  }
  out["windows"] = windows;
  json trace = json::array();
  for (const auto& step : outcome.trace) {
    json js;
    js["grid_index"] = step.grid_index;
    js["tie_count"] = step.tie_count;
    js["support_mass"] = step.support_mass;
    trace.push_back(js);
  }
  out["trace"] = trace;
  out["rng"] = outcome.rng_algorithm;
  return out;
}

}  // namespace

std::string sample_result_to_json(const SampleResult& result, const PeriodConfig& period,
                                  const IntentParams& effective, const RunInfo& info,
                                  int indent) {
  json doc;
  if (const auto* ok = std::get_if<SamplingOutcome>(&result)) {
    doc = outcome_body(*ok, period);
    doc["status"] = "ok";
  } else {
    const auto& fail = std::get<SupportExhausted>(result);
    doc = outcome_body(fail.partial, period);
    doc["status"] = "support_exhausted";
    doc["failed_iteration"] = fail.failed_iteration;
  }
  doc["params"] = params_to_json(effective);
  doc["run"] = {{"seed", info.seed},
                {"grid_size", info.grid_size},
                {"bandwidth", info.bandwidth},
                {"bandwidth_rule", info.bandwidth_rule},
                {"expansion_fraction", info.expansion_fraction},
                {"mode", info.mode}};
  return doc.dump(indent);
}

std::vector<JobWindow> parse_outcome_windows(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid outcome JSON: ") + e.what());
  }
  if (!doc.contains("windows") || !doc["windows"].is_array())
    throw ParseError("outcome document has no 'windows' array");
  std::vector<JobWindow> windows;
  for (const auto& jw : doc["windows"]) {
    JobWindow w;
    w.client = jw.value("client", std::string("new-client"));
    w.label = jw.value("label", std::string());
    if (!jw.contains("center_hours") || !jw.contains("width_hours"))
      throw ParseError("outcome window needs center_hours and width_hours");
    w.center = jw["center_hours"].get<double>();
    w.width = jw["width_hours"].get<double>();
    windows.push_back(w);
  }
  return windows;
}

}  // namespace backsched

