"""Periodic backup-window scheduling: density-guided placement with spacing,
concurrency, affinity and per-day-cap constraints."""

from backsched._core import (  # noqa: F401
    DEFAULT_GRID_SIZE,
    WEEK_HOURS,
    ConcurrencyPeak,
    DensityEstimate,
    IntentClause,
    IntentParams,
    IntentParseError,
    IntentPhrase,
    IntentResult,
    JobWindow,
    PeriodConfig,
    RequestCheck,
    SampleResult,
    SampleStep,
    SamplingDistribution,
    SamplingOutcome,
    Schedule,
    ScheduleParseError,
    SpacingViolation,
    __version__,
    apply_exclusion,
    build_sampling_distribution,
    circular_distance,
    count_active,
    covered_overlap_hours,
    default_overlap_table,
    format_week_time,
    greedy_sample,
    load_schedule_file,
    mask_concurrency,
    mask_day_cap,
    max_concurrency,
    paper_overlap_table,
    parse_intent,
    parse_schedule_csv,
    parse_schedule_json,
    parse_time_token,
    periodic_kde,
    raw_kde,
    render_intent,
    schedule_to_json,
    scott_bandwidth,
    silverman_bandwidth,
    uniform_sampling_distribution,
    validate_request,
    validate_spacing,
)
