#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "offload/agent/agent.hpp"
#include "offload/workload/catalog.hpp"

namespace offload::scenario {

/// Malformed scenario text.
struct ConfigParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Well-formed but invalid scenario; `path` names the offending field.
struct ValidationError : std::runtime_error {
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), path(std::move(field)) {}
  std::string path;
};

enum class Mode { Train, Evaluate, Compare };
std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct SiteConfig {
  std::string id;
  double capacity = 0.0;
  std::int64_t report_delay_ms = 0;
  std::map<std::string, double> profile;
};

struct ArrivalConfig {
  /// "mmpp" or "periodic".
  std::string kind = "mmpp";
  double high_lo_per_s = 0.48;
  double high_hi_per_s = 0.6;
  double low_lo_per_s = 0.0;
  double low_hi_per_s = 0.12;
  double p_high = 0.6;
  double p_low = 0.6;
  std::int64_t epoch_ms = 1000;
  /// Multiplies both rate intervals.
  double rate_scale = 1.0;
  /// Periodic arrivals: period per service type.
  std::map<std::string, std::int64_t> period_ms;
};

struct OperatorConfig {
  std::int64_t cadence_ms = 10;
  double sigma_delay_ms = 5.0;
  double sigma_util = 0.02;
  double sigma_work = 0.05;
  double gamma_price = 2.0;
  double estimate_rate = 0.1;
  /// Admission horizon in time units (see ops::SiteBelief::horizon).
  double admission_horizon = 2.0;
};

struct AgentDefaults {
  bool active = true;
  double budget_high = 100.0;
  double budget_low = 30.0;
  double high_fraction = 0.5;
  double valuation_slope = 1.0;
  double valuation_intercept = 0.0;
  double lost_bid_cost = 1.0;
  double backoff_cost = 0.1;
  double utilization_weight = 1.0;
  double backoff_threshold = 0.5;
  std::int64_t max_backoff_ms = 100;
  /// Utility added when an admitted request is dropped or a request
  /// expires before admission (0 disables).
  double failure_penalty = 1.0;
};

struct TrainingConfig {
  /// Decision steps summed over all agents.
  std::int64_t decisions = 200000;
  /// Simulated-time cap for a training run.
  std::int64_t max_duration_ms = 3600000;
};

/// Evaluation runs last ScenarioConfig::duration_ms.
struct EvaluationConfig {
  /// Seed offset for fresh evaluation workloads.
  std::uint64_t seed_offset = 1000;
  int seeds = 5;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  std::int64_t duration_ms = 60000;
  Mode mode = Mode::Compare;
  int vehicle_count = 10;
  std::optional<std::filesystem::path> mobility_trace;
  std::string catalog_name = "synthetic";
  workload::Catalog catalog;
  std::vector<SiteConfig> sites;
  double time_unit_ms = 1.0;
  int max_rebids = 1;
  double data_bits_lo = 2400.0;
  double data_bits_hi = 9600.0;
  /// Uplink and downlink latency are zero (infinite rate) unless a mobility
  /// trace supplies distances.
  bool zero_latency = true;
  ArrivalConfig arrivals;
  OperatorConfig op;
  AgentDefaults agents;
  agent::LearningConfig learning;
  TrainingConfig training;
  EvaluationConfig evaluation;
  /// Trace rows written to trace.csv; "all" or "summary" (request and
  /// utilization rows only).
  std::string trace_detail = "all";

  void validate() const;
};

ScenarioConfig parse_scenario(const std::filesystem::path& path);
/// `base_dir` resolves relative file references.
ScenarioConfig parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir = ".");
/// Fully expanded config, defaults included, as JSON text.
std::string scenario_to_json(const ScenarioConfig& c);

}  // namespace offload::scenario
