#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "offload/scenario/config.hpp"
#include "offload/scenario/metrics.hpp"
#include "offload/scenario/world.hpp"

namespace offload::scenario {

struct TrainStats {
  std::int64_t decisions = 0;
  int episodes = 0;
  std::int64_t simulated_ms = 0;
};

/// Trains the agents until the fleet has taken cfg.training.decisions
/// decisions. Each episode lasts at most cfg.training.max_duration_ms;
/// episode e uses workload seed splitmix64(seed + e).
TrainStats train_agents(const ScenarioConfig& cfg, std::vector<agent::Agent>& agents, std::uint64_t seed,
                        std::ostream* diagnostics = nullptr);

struct EvalOptions {
  std::uint64_t workload_seed = 1;
  /// Overrides cfg.max_rebids when set.
  std::optional<int> max_rebids;
  std::ostream* trace_sink = nullptr;
  bool event_rows = true;
  std::ostream* diagnostics = nullptr;
};

struct EvalRun {
  RunResult result;
  RunSummary summary;
};

/// Frozen-policy run of cfg.duration_ms.
EvalRun evaluate_agents(const ScenarioConfig& cfg, std::vector<agent::Agent>& agents, const EvalOptions& options);

/// Evaluates `active` and a passive fleet on the same workload seed.
PairedSummary compare_on_seed(const ScenarioConfig& cfg, std::vector<agent::Agent>& active,
                              std::uint64_t agent_seed, const EvalOptions& options);

struct CliOptions {
  std::filesystem::path scenario;
  std::optional<std::uint64_t> seed;
  std::optional<Mode> mode;
  std::filesystem::path out_dir = "out";
  bool diagnostics = false;
  std::optional<std::filesystem::path> model;
};

/// Runs one scenario as the command line does and writes its outputs into
/// options.out_dir: trace.csv, summary.json, metrics/*.csv and, when
/// training, model.txt. Returns the summary JSON text.
std::string run_scenario(const CliOptions& options, std::ostream& log);

}  // namespace offload::scenario
