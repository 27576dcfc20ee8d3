// backsched: place new periodic backup windows into an existing schedule.
//
// Subcommands: schedule | validate | parse-intent | plot.
// Exit codes: 0 success, 1 constraint/support failure, 2 ill-posed request,
// 3 I/O or format error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "backsched/density.hpp"
#include "backsched/intent.hpp"
#include "backsched/sampler.hpp"
#include "backsched/schedule.hpp"
#include "backsched/schedule_io.hpp"
#include "backsched/svg_plot.hpp"

namespace {

using namespace backsched;

constexpr int kExitOk = 0;
constexpr int kExitConstraint = 1;
constexpr int kExitIllPosed = 2;
constexpr int kExitIo = 3;

struct BandwidthRule {
  std::string name = "silverman";  // silverman | scott | fixed
  double fixed_hours = 0.0;
};

BandwidthRule parse_bandwidth_rule(const std::string& text) {
  if (text == "silverman" || text == "scott") return {text, 0.0};
  if (text.rfind("fixed:", 0) == 0) {
    double h = 0.0;
    try {
      h = std::stod(text.substr(6));
    } catch (const std::exception&) {
      throw ParseError("invalid --bandwidth value '" + text + "'");
    }
    if (!(h > 0.0)) throw ParseError("fixed bandwidth must be positive");
    return {"fixed", h};
  }
  throw ParseError("--bandwidth expects silverman, scott, or fixed:<hours>");
}

double choose_bandwidth(const BandwidthRule& rule, const Schedule& schedule) {
  if (rule.name == "fixed") return rule.fixed_hours;
  auto centers = schedule.centers();
  return rule.name == "scott" ? scott_bandwidth(centers, schedule.period.period_hours)
                              : silverman_bandwidth(centers, schedule.period.period_hours);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write to '" + path + "'");
  out << content;
}

struct ScheduleArgs {
  std::string input;
  std::string intent_text;
  std::string alpha_table = "default";
  int k = 0;
  double epsilon = -1.0;
  double alpha = -1.0;
  double omega = -1.0;
  double delta = -1.0;
  int cap = 0;
  double cap_bucket = kDayHours;
  int limit = 0;
  std::uint64_t seed = 0;
  int grid_size = kDefaultGridSize;
  std::string bandwidth = "silverman";
  double expansion = kDefaultExpansionFraction;
  std::string mode = "argmax";
  std::string out_path;
  std::string merged_path;
  std::string svg_path;
};

int run_schedule(const ScheduleArgs& args, const CLI::App& cmd) {
  Schedule schedule = load_schedule_file(args.input);

  IntentParams params;
  params.period_hours = schedule.period.period_hours;
  std::vector<std::string> warnings;
  if (!args.intent_text.empty()) {
    auto table = args.alpha_table == "paper" ? paper_overlap_table() : default_overlap_table();
    auto parsed = parse_intent(args.intent_text, params, table);
    params = parsed.params;
    warnings = parsed.warnings;
  }
  // Explicit flags override anything the intent text produced.
  if (cmd.count("--k")) params.count = args.k;
  if (cmd.count("--epsilon")) params.min_spacing_hours = args.epsilon;
  if (cmd.count("--alpha")) params.overlap = args.alpha;
  if (cmd.count("--omega")) params.self_affinity = args.omega;
  if (cmd.count("--delta")) params.window_hours = args.delta;
  if (cmd.count("--cap")) params.daily_cap = args.cap;
  if (cmd.count("--cap-bucket")) params.cap_bucket_hours = args.cap_bucket;
  if (cmd.count("--limit")) params.concurrency_limit = args.limit;

  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  auto check = validate_request(schedule, params);
  if (!check.ok) {
    std::cerr << "ill-posed request: " << check.detail << "\n";
    return kExitIllPosed;
  }

  BandwidthRule rule = parse_bandwidth_rule(args.bandwidth);
  std::optional<DensityEstimate> density;
  RunInfo info;
  info.seed = args.seed;
  info.grid_size = args.grid_size;
  info.bandwidth_rule = rule.name;
  info.expansion_fraction = args.expansion;
  info.mode = args.mode;
  if (!schedule.windows.empty()) {
    double h = choose_bandwidth(rule, schedule);
    density = periodic_kde(schedule, h, args.expansion, args.grid_size);
    info.bandwidth = h;
  }

  SampleMode mode = args.mode == "stochastic" ? SampleMode::Stochastic : SampleMode::Argmax;
  SamplingDistribution initial;
  if (density)
    initial = build_sampling_distribution(*density, params.overlap);
  else
    initial = uniform_sampling_distribution(schedule.period.period_hours, args.grid_size,
                                            params.overlap);
  SamplingDistribution final_state;
  SampleResult result =
      greedy_sample(density, schedule, params, args.seed, mode, args.grid_size, &final_state);

  std::string json_text = sample_result_to_json(result, schedule.period, params, info);
  if (!args.out_path.empty()) write_file(args.out_path, json_text);

  if (!args.svg_path.empty()) {
    PlotSpec plot;
    plot.period = schedule.period;
    plot.title = "density and placement preference (alpha = " + std::to_string(params.overlap) +
                 ", seed = " + std::to_string(args.seed) + ")";
    if (density) plot.series.push_back({density->values, "density F", "#1f77b4", false});
    plot.series.push_back({initial.values, "preference G (initial)", "#2ca02c", false});
    plot.series.push_back({final_state.values, "preference G (after exclusions)", "#ff7f0e", false});
    plot.bands = schedule.windows;
    const SamplingOutcome& partial = sample_succeeded(result)
                                         ? std::get<SamplingOutcome>(result)
                                         : std::get<SupportExhausted>(result).partial;
    plot.markers = partial.centers;
    write_file(args.svg_path, render_svg(plot));
  }

  if (!sample_succeeded(result)) {
    const auto& fail = std::get<SupportExhausted>(result);
    std::cerr << "Unable to proceed: preference support exhausted at placement "
              << fail.failed_iteration << " of " << params.count << " ("
              << fail.partial.centers.size() << " placed)\n";
    return kExitConstraint;
  }

  const auto& outcome = std::get<SamplingOutcome>(result);
  std::cout << "placed " << outcome.windows.size() << " new window(s) for "
            << params.asset.value_or("new-client") << ":\n";
  for (const auto& w : outcome.windows) {
    std::cout << "  " << w.label << "  " << schedule.period.format(w.center - w.width / 2.0)
              << " -> " << schedule.period.format(w.center + w.width / 2.0) << "  (center "
              << schedule.period.format(w.center) << ", width " << w.width << " h)\n";
  }
  std::cout << "effective: k=" << params.count << " epsilon=" << params.min_spacing_hours
            << " alpha=" << params.overlap << " omega=" << params.self_affinity
            << " delta=" << params.window_hours << " seed=" << args.seed
            << " grid=" << args.grid_size << " bandwidth=" << info.bandwidth << " ("
            << info.bandwidth_rule << ")\n";
  if (args.out_path.empty()) std::cout << json_text << "\n";

  if (!args.merged_path.empty()) {
    Schedule merged = schedule;
    for (const auto& w : outcome.windows) merged.windows.push_back(w);
    write_file(args.merged_path, schedule_to_json(merged));
  }
  return kExitOk;
}

int run_validate(const std::string& input, const std::string& new_path, int limit_flag,
                 double spacing, bool have_spacing) {
  Schedule schedule = load_schedule_file(input);
  std::vector<JobWindow> new_windows;
  if (!new_path.empty()) {
    std::ifstream in(new_path);
    if (!in) throw ParseError("cannot open outcome file '" + new_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    new_windows = parse_outcome_windows(buf.str());
    for (const auto& w : new_windows) schedule.windows.push_back(w);
  }

  auto peak = max_concurrency(schedule);
  std::cout << "max concurrency " << peak.count << " at " << schedule.period.format(peak.witness)
            << "\n";
  bool violated = false;
  int limit = limit_flag > 0 ? limit_flag : schedule.concurrency_limit.value_or(0);
  if (limit > 0 && peak.count > limit) {
    std::cout << "concurrency violation: " << peak.count << " > limit " << limit << "\n";
    violated = true;
  }

  std::vector<double> centers;
  if (!new_windows.empty())
    for (const auto& w : new_windows) centers.push_back(schedule.period.wrap(w.center));
  else
    centers = schedule.centers();
  if (have_spacing) {
    auto violations = validate_spacing(centers, spacing, schedule.period);
    for (const auto& v : violations) {
      std::cout << "spacing violation: centers " << schedule.period.format(v.first) << " and "
                << schedule.period.format(v.second) << " are " << v.gap << " h apart (< "
                << spacing << ")\n";
      violated = true;
    }
  }

  std::cout << "windows (normalized to [0, " << schedule.period.period_hours << ")):\n";
  for (const auto& w : schedule.windows) {
    std::cout << "  " << (w.label.empty() ? w.client : w.label) << "  "
              << schedule.period.format(w.center - w.width / 2.0) << " -> "
              << schedule.period.format(w.center + w.width / 2.0) << "  center="
              << schedule.period.wrap(w.center) << "h width=" << w.width << "h\n";
  }
  return violated ? kExitConstraint : kExitOk;
}

int run_parse_intent(const std::string& text, const std::string& table_name) {
  auto table = table_name == "paper" ? paper_overlap_table() : default_overlap_table();
  IntentParams defaults;
  auto parsed = parse_intent(text, defaults, table);
  nlohmann::json doc;
  doc["k"] = parsed.params.count;
  doc["epsilon"] = parsed.params.min_spacing_hours;
  doc["alpha"] = parsed.params.overlap;
  doc["omega"] = parsed.params.self_affinity;
  doc["delta"] = parsed.params.window_hours;
  doc["period"] = parsed.params.period_hours;
  doc["daily_cap"] =
      parsed.params.daily_cap ? nlohmann::json(*parsed.params.daily_cap) : nlohmann::json(nullptr);
  doc["cap_bucket"] = parsed.params.cap_bucket_hours;
  doc["asset"] =
      parsed.params.asset ? nlohmann::json(*parsed.params.asset) : nlohmann::json(nullptr);
  doc["warnings"] = parsed.warnings;
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

int run_plot(const std::string& input, const std::string& out_path, const std::string& bandwidth,
             double expansion, int grid_size, bool show_raw) {
  Schedule schedule = load_schedule_file(input);
  if (schedule.windows.empty()) {
    std::cerr << "cannot plot a density for an empty schedule (no windows)\n";
    return kExitIo;
  }
  BandwidthRule rule = parse_bandwidth_rule(bandwidth);
  double h = choose_bandwidth(rule, schedule);
  auto density = periodic_kde(schedule, h, expansion, grid_size);

  PlotSpec plot;
  plot.period = schedule.period;
  std::ostringstream title;
  title << "window-center density, bandwidth " << h << " h (" << rule.name << ")";
  plot.title = title.str();
  plot.series.push_back({density.values, "periodic density", "#1f77b4", false});
  if (show_raw)
    plot.series.push_back({raw_kde(schedule, h, grid_size), "raw density (edge-affected)",
                           "#000000", true});
  plot.bands = schedule.windows;
  write_file(out_path, render_svg(plot));
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"periodic backup-window scheduler"};
  app.require_subcommand(1);

  ScheduleArgs sargs;
  auto* sched = app.add_subcommand("schedule", "place new backup windows");
  sched->add_option("input", sargs.input, "schedule file (.json or .csv)")->required();
  sched->add_option("--intent", sargs.intent_text, "natural-language request");
  sched->add_option("--alpha-table", sargs.alpha_table, "overlap adjective table")
      ->check(CLI::IsMember({"default", "paper"}));
  sched->add_option("--k", sargs.k, "number of new windows");
  sched->add_option("--epsilon", sargs.epsilon, "minimum spacing between new centers (hours)");
  sched->add_option("--alpha", sargs.alpha, "expected overlap with existing jobs, 0..1");
  sched->add_option("--omega", sargs.omega, "self-affinity, 0..1 (1 = no collar)");
  sched->add_option("--delta", sargs.delta, "new window width (hours)");
  sched->add_option("--cap", sargs.cap, "max new windows per bucket");
  sched->add_option("--cap-bucket", sargs.cap_bucket, "cap bucket length (hours)");
  sched->add_option("--limit", sargs.limit, "server concurrency limit override");
  sched->add_option("--seed", sargs.seed, "random seed for tie-breaks");
  sched->add_option("--grid-size", sargs.grid_size, "time grid cells per period");
  sched->add_option("--bandwidth", sargs.bandwidth, "silverman | scott | fixed:<hours>");
  sched->add_option("--expansion", sargs.expansion, "wrap-around expansion fraction (0,1]");
  sched->add_option("--mode", sargs.mode, "argmax | stochastic")
      ->check(CLI::IsMember({"argmax", "stochastic"}));
  sched->add_option("--out", sargs.out_path, "write outcome JSON here");
  sched->add_option("--merged-out", sargs.merged_path, "write schedule + new windows here");
  sched->add_option("--svg", sargs.svg_path, "write an SVG of F, G and the placements");

  std::string v_input, v_new;
  int v_limit = 0;
  double v_spacing = 0.0;
  auto* val = app.add_subcommand("validate", "check concurrency and spacing constraints");
  val->add_option("input", v_input, "schedule file")->required();
  auto* v_new_opt = val->add_option("--new", v_new, "outcome JSON with windows to merge in");
  auto* v_spacing_opt = val->add_option("--spacing", v_spacing, "required center spacing (hours)");
  val->add_option("--limit", v_limit, "concurrency limit (overrides the file)");
  (void)v_new_opt;

  std::string i_text, i_table = "default";
  auto* intent = app.add_subcommand("parse-intent", "translate a request to parameters");
  intent->add_option("text", i_text, "intent sentence")->required();
  intent->add_option("--alpha-table", i_table, "overlap adjective table")
      ->check(CLI::IsMember({"default", "paper"}));

  std::string p_input, p_out, p_bandwidth = "silverman";
  double p_expansion = kDefaultExpansionFraction;
  int p_grid = kDefaultGridSize;
  bool p_show_raw = false;
  auto* plot = app.add_subcommand("plot", "render the density estimate as SVG");
  plot->add_option("input", p_input, "schedule file")->required();
  plot->add_option("--out", p_out, "output SVG path")->required();
  plot->add_option("--bandwidth", p_bandwidth, "silverman | scott | fixed:<hours>");
  plot->add_option("--expansion", p_expansion, "wrap-around expansion fraction (0,1]");
  plot->add_option("--grid-size", p_grid, "time grid cells per period");
  plot->add_flag("--show-raw", p_show_raw, "also draw the uncorrected estimate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sched->parsed()) return run_schedule(sargs, *sched);
    if (val->parsed())
      return run_validate(v_input, v_new, v_limit, v_spacing, v_spacing_opt->count() > 0);
    if (intent->parsed()) return run_parse_intent(i_text, i_table);
    if (plot->parsed())
      return run_plot(p_input, p_out, p_bandwidth, p_expansion, p_grid, p_show_raw);
  } catch (const IntentError& e) {
    std::cerr << "intent error: " << e.what() << "\n";
    return kExitIllPosed;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ill-posed request: " << e.what() << "\n";
    return kExitIllPosed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
