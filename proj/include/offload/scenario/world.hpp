#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "offload/agent/agent.hpp"
#include "offload/scenario/config.hpp"
#include "offload/sim/trace.hpp"

namespace offload::scenario {

struct RunOptions {
  /// Agents update their models during the run.
  bool learn = false;
  std::int64_t duration_ms = 60000;
  /// Stop once this many decisions were taken (negative: no limit).
  std::int64_t decision_budget = -1;
  int max_rebids = 1;
  /// Seed of every workload and operator stream.
  std::uint64_t workload_seed = 1;
  /// Seed for the agents' action sampling in this run.
  std::uint64_t policy_seed = 1;
  std::ostream* trace_sink = nullptr;
  std::ostream* diagnostics = nullptr;
  /// Keep engine event rows in the trace (otherwise only the effect rows:
  /// vehicle, request, util, clear).
  bool event_rows = true;
  /// Return the effect rows in RunResult::rows.
  bool retain_rows = true;
};

struct RunResult {
  std::int64_t end_ms = 0;
  std::int64_t decisions = 0;
  std::uint64_t digest = 0;
  std::size_t trace_rows = 0;
  /// The effect rows, which are all that the metrics need.
  std::vector<sim::TraceRow> rows;
};

/// Number of vehicles the scenario simulates (fleet size or distinct ids
/// in the mobility trace).
int fleet_size(const ScenarioConfig& cfg);

/// One agent per vehicle. Budgets are drawn from `seed` so a vehicle keeps
/// its budget level across training and evaluation.
std::vector<agent::Agent> make_agents(const ScenarioConfig& cfg, bool active, std::uint64_t seed);

/// Runs one simulation. Agents are used in place (and trained when
/// options.learn is set); their episode state is reset first.
RunResult run_world(const ScenarioConfig& cfg, std::vector<agent::Agent>& agents, const RunOptions& options);

/// Header of the diagnostics CSV.
std::string_view diagnostics_header();

}  // namespace offload::scenario
