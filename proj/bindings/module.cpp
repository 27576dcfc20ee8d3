#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <variant>

#include "backsched/density.hpp"
#include "backsched/intent.hpp"
#include "backsched/sampler.hpp"
#include "backsched/schedule.hpp"
#include "backsched/schedule_io.hpp"
#include "backsched/svg_plot.hpp"

namespace py = pybind11;
using namespace backsched;

namespace {

// Flattens the C++ result variant: python callers branch on `.complete`.
struct PySampleResult {
  bool complete = false;
  SamplingOutcome outcome;
  int failed_iteration = -1;
};

PySampleResult run_greedy(const std::optional<DensityEstimate>& density, const Schedule& schedule,
                          const IntentParams& intent, std::uint64_t seed, const std::string& mode,
                          int grid_size) {
  SampleMode m = mode == "stochastic" ? SampleMode::Stochastic : SampleMode::Argmax;
  auto result = greedy_sample(density, schedule, intent, seed, m, grid_size);
  PySampleResult out;
  if (auto* ok = std::get_if<SamplingOutcome>(&result)) {
    out.complete = true;
    out.outcome = std::move(*ok);
  } else {
    auto& fail = std::get<SupportExhausted>(result);
    out.outcome = std::move(fail.partial);
    out.failed_iteration = fail.failed_iteration;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "periodic backup-window scheduling core";

  py::register_exception<ParseError>(m, "ScheduleParseError");
  py::register_exception<IntentError>(m, "IntentParseError");

  py::class_<PeriodConfig>(m, "PeriodConfig")
      .def(py::init<>())
      .def(py::init([](double period_hours, const std::string& origin) {
             return PeriodConfig{period_hours, origin};
           }),
           py::arg("period_hours") = kWeekHours, py::arg("origin") = "Mon 00:00")
      .def_readwrite("period_hours", &PeriodConfig::period_hours)
      .def_readwrite("origin_label", &PeriodConfig::origin_label)
      .def("wrap", &PeriodConfig::wrap)
      .def("format", &PeriodConfig::format);

  py::class_<JobWindow>(m, "JobWindow")
      .def(py::init([](const std::string& client, double center, double width,
                       const std::string& label) {
             return JobWindow{client, center, width, label};
           }),
           py::arg("client"), py::arg("center"), py::arg("width"), py::arg("label") = "")
      .def_readwrite("client", &JobWindow::client)
      .def_readwrite("center", &JobWindow::center)
      .def_readwrite("width", &JobWindow::width)
      .def_readwrite("label", &JobWindow::label)
      .def("__repr__", [](const JobWindow& w) {
        return "JobWindow(client='" + w.client + "', center=" + std::to_string(w.center) +
               ", width=" + std::to_string(w.width) + ")";
      });

  py::class_<Schedule>(m, "Schedule")
      .def(py::init<>())
      .def_readwrite("period", &Schedule::period)
      .def_readwrite("windows", &Schedule::windows)
      .def_readwrite("concurrency_limit", &Schedule::concurrency_limit)
      .def("centers", &Schedule::centers)
      .def("__len__", [](const Schedule& s) { return s.windows.size(); });

  py::class_<IntentParams>(m, "IntentParams")
      .def(py::init<>())
      .def_readwrite("count", &IntentParams::count)
      .def_readwrite("min_spacing_hours", &IntentParams::min_spacing_hours)
      .def_readwrite("overlap", &IntentParams::overlap)
      .def_readwrite("self_affinity", &IntentParams::self_affinity)
      .def_readwrite("window_hours", &IntentParams::window_hours)
      .def_readwrite("period_hours", &IntentParams::period_hours)
      .def_readwrite("daily_cap", &IntentParams::daily_cap)
      .def_readwrite("cap_bucket_hours", &IntentParams::cap_bucket_hours)
      .def_readwrite("concurrency_limit", &IntentParams::concurrency_limit)
      .def_readwrite("asset", &IntentParams::asset)
      .def("effective_spacing", &IntentParams::effective_spacing);

  py::class_<ConcurrencyPeak>(m, "ConcurrencyPeak")
      .def_readonly("count", &ConcurrencyPeak::count)
      .def_readonly("witness", &ConcurrencyPeak::witness);

  py::class_<SpacingViolation>(m, "SpacingViolation")
      .def_readonly("first", &SpacingViolation::first)
      .def_readonly("second", &SpacingViolation::second)
      .def_readonly("gap", &SpacingViolation::gap);

  py::class_<RequestCheck>(m, "RequestCheck")
      .def_readonly("ok", &RequestCheck::ok)
      .def_readonly("detail", &RequestCheck::detail);

  py::class_<DensityEstimate>(m, "DensityEstimate")
      .def_readonly("period_hours", &DensityEstimate::period_hours)
      .def_readonly("values", &DensityEstimate::values)
      .def_readonly("bandwidth", &DensityEstimate::bandwidth)
      .def_readonly("expansion", &DensityEstimate::expansion)
      .def("grid_size", &DensityEstimate::grid_size)
      .def("grid_time", &DensityEstimate::grid_time)
      .def("periodic_integral", &DensityEstimate::periodic_integral)
      .def("max_value", &DensityEstimate::max_value);

  py::class_<SamplingDistribution>(m, "SamplingDistribution")
      .def_readonly("period_hours", &SamplingDistribution::period_hours)
      .def_readonly("values", &SamplingDistribution::values)
      .def_readonly("overlap", &SamplingDistribution::overlap)
      .def_readonly("exclusions", &SamplingDistribution::exclusions)
      .def("grid_size", &SamplingDistribution::grid_size)
      .def("grid_time", &SamplingDistribution::grid_time);

  py::class_<SampleStep>(m, "SampleStep")
      .def_readonly("grid_index", &SampleStep::grid_index)
      .def_readonly("tie_count", &SampleStep::tie_count)
      .def_readonly("support_mass", &SampleStep::support_mass);

  py::class_<SamplingOutcome>(m, "SamplingOutcome")
      .def_readonly("centers", &SamplingOutcome::centers)
      .def_readonly("windows", &SamplingOutcome::windows)
      .def_readonly("trace", &SamplingOutcome::trace)
      .def_readonly("seed", &SamplingOutcome::seed)
      .def_property_readonly("rng_algorithm",
                             [](const SamplingOutcome& o) { return std::string(o.rng_algorithm); });

  py::class_<PySampleResult>(m, "SampleResult")
      .def_readonly("complete", &PySampleResult::complete)
      .def_readonly("outcome", &PySampleResult::outcome)
      .def_readonly("failed_iteration", &PySampleResult::failed_iteration);

  py::class_<IntentClause>(m, "IntentClause")
      .def_readonly("kind", &IntentClause::kind)
      .def_readonly("value", &IntentClause::value)
      .def_readonly("begin", &IntentClause::begin)
      .def_readonly("end", &IntentClause::end);

  py::class_<IntentPhrase>(m, "IntentPhrase")
      .def_readonly("raw", &IntentPhrase::raw)
      .def_readonly("clauses", &IntentPhrase::clauses);

  py::class_<IntentResult>(m, "IntentResult")
      .def_readonly("params", &IntentResult::params)
      .def_readonly("phrase", &IntentResult::phrase)
      .def_readonly("warnings", &IntentResult::warnings);

  m.def("parse_time_token", &parse_time_token, py::arg("token"));
  m.def("format_week_time", &format_week_time, py::arg("week_hours"));
  m.def("circular_distance", &circular_distance, py::arg("a"), py::arg("b"), py::arg("period"));

  m.def("parse_schedule_json", &parse_schedule_json, py::arg("document"));
  m.def("parse_schedule_csv", &parse_schedule_csv, py::arg("document"),
        py::arg("period") = PeriodConfig{});
  m.def("schedule_to_json", &schedule_to_json, py::arg("schedule"), py::arg("indent") = 2);
  m.def("load_schedule_file", &load_schedule_file, py::arg("path"));

  m.def("count_active", &count_active, py::arg("schedule"), py::arg("t"));
  m.def("max_concurrency", &max_concurrency, py::arg("schedule"));
  m.def(
      "validate_spacing",
      [](const std::vector<double>& centers, double spacing, const PeriodConfig& period) {
        return validate_spacing(centers, spacing, period);
      },
      py::arg("centers"), py::arg("spacing"), py::arg("period") = PeriodConfig{});
  m.def("validate_request", &validate_request, py::arg("schedule"), py::arg("intent"));
  m.def("covered_overlap_hours", &covered_overlap_hours, py::arg("schedule"), py::arg("center"),
        py::arg("width"));

  m.def(
      "silverman_bandwidth",
      [](const std::vector<double>& points, double period) {
        return silverman_bandwidth(points, period);
      },
      py::arg("points"), py::arg("period_hours") = kWeekHours);
  m.def(
      "scott_bandwidth",
      [](const std::vector<double>& points, double period) {
        return scott_bandwidth(points, period);
      },
      py::arg("points"), py::arg("period_hours") = kWeekHours);
  m.def("periodic_kde", &periodic_kde, py::arg("schedule"), py::arg("bandwidth"),
        py::arg("expansion_fraction") = kDefaultExpansionFraction,
        py::arg("grid_size") = kDefaultGridSize);
  m.def("raw_kde", &raw_kde, py::arg("schedule"), py::arg("bandwidth"),
        py::arg("grid_size") = kDefaultGridSize);

  m.def("build_sampling_distribution", &build_sampling_distribution, py::arg("density"),
        py::arg("overlap"));
  m.def("uniform_sampling_distribution", &uniform_sampling_distribution, py::arg("period_hours"),
        py::arg("grid_size"), py::arg("overlap"));
  m.def("apply_exclusion", &apply_exclusion, py::arg("dist"), py::arg("tau"), py::arg("spacing"),
        py::arg("self_affinity"));
  m.def("mask_concurrency", &mask_concurrency, py::arg("dist"), py::arg("schedule"),
        py::arg("window_hours"), py::arg("limit"));
  m.def(
      "mask_day_cap",
      [](SamplingDistribution& dist, const std::vector<double>& chosen, int cap,
         double bucket_hours) { mask_day_cap(dist, chosen, cap, bucket_hours); },
      py::arg("dist"), py::arg("chosen"), py::arg("cap"), py::arg("bucket_hours") = kDayHours);
  m.def("greedy_sample", &run_greedy, py::arg("density"), py::arg("schedule"), py::arg("intent"),
        py::arg("seed") = 0, py::arg("mode") = "argmax",
        py::arg("grid_size") = kDefaultGridSize);

  m.def("default_overlap_table", &default_overlap_table);
  m.def("paper_overlap_table", &paper_overlap_table);
  m.def("parse_intent", &parse_intent, py::arg("text"), py::arg("defaults") = IntentParams{},
        py::arg("table") = default_overlap_table());
  m.def("render_intent", &render_intent, py::arg("params"),
        py::arg("table") = default_overlap_table());

  m.attr("DEFAULT_GRID_SIZE") = kDefaultGridSize;
  m.attr("WEEK_HOURS") = kWeekHours;
  m.attr("__version__") = "0.1.0";
}
