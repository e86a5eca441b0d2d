#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "offload/scenario/runner.hpp"
#include "offload/workload/mobility.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Offloading auction simulator"};
  app.require_subcommand(1);

  offload::scenario::CliOptions opt;
  std::string mode;
  std::uint64_t seed = 0;
  std::string model;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", opt.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--mode", mode, "train, evaluate or compare")
      ->check(CLI::IsMember({"train", "evaluate", "compare"}));
  run->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
  run->add_flag("--diagnostics", opt.diagnostics, "Write learning diagnostics (diagnostics.csv)");
  run->add_option("--model", model, "Load a model file instead of training")->check(CLI::ExistingFile);

  offload::workload::JunctionParams jp;
  std::uint64_t trace_seed = 1;
  std::string trace_out;
  auto* mob = app.add_subcommand("mobility", "Generate a four-way junction mobility trace");
  mob->add_option("out", trace_out, "CSV file to write")->required();
  mob->add_option("--seed", trace_seed, "Generator seed")->capture_default_str();
  mob->add_option("--duration-ms", jp.duration_ms, "Trace length")->capture_default_str();
  mob->add_option("--spawn-ms", jp.spawn_interval_ms, "Time between arriving vehicles")->capture_default_str();
  mob->add_option("--green-ms", jp.green_ms, "Green phase per approach")->capture_default_str();
  mob->add_option("--speed-kmh", jp.speed_kmh, "Driving speed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*mob) {
    offload::sim::RngStream rng(trace_seed, "mobility/junction");
    std::ofstream out(trace_out);
    if (!out) {
      std::cerr << "cannot write " << trace_out << '\n';
      return 1;
    }
    offload::workload::write_mobility_trace(out, offload::workload::generate_junction_trace(jp, rng));
    return 0;
  }

  try {
    if (*seed_opt) opt.seed = seed;
    if (!mode.empty()) opt.mode = offload::scenario::parse_mode(mode);
    if (!model.empty()) opt.model = model;
    offload::scenario::run_scenario(opt, std::cerr);
    std::cerr << "wrote " << opt.out_dir.string() << '\n';
  } catch (const offload::scenario::ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return 2;
  } catch (const offload::scenario::ConfigParseError& e) {
    std::cerr << "cannot parse scenario: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
