#include "offload/scenario/runner.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

#include "offload/scenario/model.hpp"
#include "offload/sim/rng.hpp"

namespace offload::scenario {

using nlohmann::json;

TrainStats train_agents(const ScenarioConfig& cfg, std::vector<agent::Agent>& agents, std::uint64_t seed,
                        std::ostream* diagnostics) {
  TrainStats st;
  bool any_active = false;
  for (const auto& a : agents) any_active = any_active || a.config().active;
  if (!any_active) return st;
  while (st.decisions < cfg.training.decisions) {
    RunOptions o;
    o.learn = true;
    o.duration_ms = cfg.training.max_duration_ms;
    o.decision_budget = cfg.training.decisions - st.decisions;
    o.max_rebids = cfg.max_rebids;
    o.workload_seed = sim::splitmix64(seed + static_cast<std::uint64_t>(st.episodes));
    o.policy_seed = o.workload_seed;
    o.event_rows = false;
    o.retain_rows = false;
    o.diagnostics = diagnostics;
    const auto r = run_world(cfg, agents, o);
    ++st.episodes;
    st.simulated_ms += r.end_ms;
    st.decisions += r.decisions;
    if (r.decisions == 0) break;  // nothing to learn from in this workload
  }
  return st;
}

EvalRun evaluate_agents(const ScenarioConfig& cfg, std::vector<agent::Agent>& agents, const EvalOptions& options) {
  RunOptions o;
  o.learn = false;
  o.duration_ms = cfg.duration_ms;
  o.max_rebids = options.max_rebids.value_or(cfg.max_rebids);
  o.workload_seed = options.workload_seed;
  o.policy_seed = options.workload_seed;
  o.trace_sink = options.trace_sink;
  o.event_rows = options.event_rows;
  o.diagnostics = options.diagnostics;
  EvalRun e;
  e.result = run_world(cfg, agents, o);
  e.summary = summarize(e.result.rows);
  return e;
}

PairedSummary compare_on_seed(const ScenarioConfig& cfg, std::vector<agent::Agent>& active,
                              std::uint64_t agent_seed, const EvalOptions& options) {
  auto a = evaluate_agents(cfg, active, options);
  auto passive = make_agents(cfg, false, agent_seed);
  EvalOptions po = options;
  po.trace_sink = nullptr;
  po.diagnostics = nullptr;
  auto p = evaluate_agents(cfg, passive, po);
  return pair_summaries(std::move(a.summary), std::move(p.summary));
}

namespace {

json box_json(const BoxStats& b) {
  return {{"count", b.count},   {"min", b.min}, {"whisker_lo", b.whisker_lo}, {"q1", b.q1},
          {"median", b.median}, {"mean", b.mean}, {"q3", b.q3}, {"whisker_hi", b.whisker_hi}, {"max", b.max}};
}

json summary_json(const RunSummary& s) {
  json sites = json::array();
  for (const auto& u : s.sites) sites.push_back({{"site", u.site}, {"samples", u.samples}, {"mean", u.mean}, {"std", u.std}});
  json vehicles = json::array();
  for (const auto& v : s.vehicles)
    vehicles.push_back({{"vehicle", v.vehicle},
                        {"level", v.level},
                        {"requests", v.requests},
                        {"failures", v.failures},
                        {"ofr", v.ofr},
                        {"mean_rebids", v.mean_rebids},
                        {"mean_price", v.mean_price},
                        {"mean_backoff_ms", v.mean_backoff_ms}});
  return {{"requests", s.requests},
          {"completed", s.completed},
          {"rejected", s.rejected},
          {"dropped", s.dropped},
          {"expired", s.expired},
          {"ofr", s.ofr},
          {"reliability", s.reliability},
          {"mean_rebids", s.mean_rebids},
          {"rebids", box_json(s.rebids)},
          {"utilization", sites},
          {"vehicles", vehicles}};
}

json paired_json(const PairedSummary& p) {
  json du = json::array();
  for (std::size_t i = 0; i < p.active.sites.size(); ++i)
    du.push_back({{"site", p.active.sites[i].site},
                  {"delta_mean", p.delta_util_mean[i]},
                  {"delta_std", p.delta_util_std[i]}});
  return {{"active", summary_json(p.active)},
          {"passive", summary_json(p.passive)},
          {"delta", {{"ofr", p.delta_ofr},
                     {"reliability", p.delta_reliability},
                     {"mean_rebids", p.delta_mean_rebids},
                     {"utilization", du}}}};
}

json config_echo(const ScenarioConfig& cfg) {
  json j;
  j["config"] = json::parse(scenario_to_json(cfg));
  json probs = json::object();
  for (std::size_t i = 0; i < cfg.catalog.size(); ++i) probs[cfg.catalog[i].type_id] = cfg.catalog[i].probability;
  j["catalog_probabilities"] = probs;
  j["catalog_raw_probability_total"] = cfg.catalog.raw_probability_total();
  j["price_rule"] = "budget * clamp(raw, 0, 1)";
  return j;
}

void write_metrics(const std::filesystem::path& dir, const RunSummary& s, std::span<const sim::TraceRow> rows) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "vehicles.csv");
    write_vehicle_csv(f, s);
  }
  {
    std::ofstream f(dir / "utilization.csv");
    write_utilization_csv(f, s);
  }
  {
    std::ofstream f(dir / "rebids.csv");
    write_rebids_csv(f, s);
  }
  {
    std::ofstream f(dir / "ofr_cdf.csv");
    write_cdf_csv(f, compute_individual_ofr_cdf(rows));
  }
  {
    std::ofstream f(dir / "backoff_price.csv");
    write_backoff_csv(f, backoff_price_analysis(rows));
  }
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

}  // namespace

std::string run_scenario(const CliOptions& opt, std::ostream& log) {
  ScenarioConfig cfg = parse_scenario(opt.scenario);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.mode) cfg.mode = *opt.mode;
  const std::uint64_t seed = cfg.seed;
  std::filesystem::create_directories(opt.out_dir);

  auto agents = make_agents(cfg, cfg.agents.active, seed);
  std::optional<std::ofstream> diag;
  if (opt.diagnostics && cfg.agents.active) {
    diag.emplace(open_out(opt.out_dir / "diagnostics.csv"));
    *diag << diagnostics_header() << '\n';
  }
  std::ostream* diag_ptr = diag ? &*diag : nullptr;
  const bool event_rows = cfg.trace_detail == "all";

  json summary = config_echo(cfg);
  summary["mode"] = to_string(cfg.mode);
  summary["seed"] = seed;

  if (opt.model) {
    load_models(*opt.model, agents);
    log << "loaded " << opt.model->string() << '\n';
  } else if (cfg.mode == Mode::Evaluate && cfg.agents.active) {
    throw std::runtime_error("evaluate mode needs --model");
  } else if (cfg.agents.active) {
    const auto st = train_agents(cfg, agents, seed, diag_ptr);
    save_models(opt.out_dir / "model.txt", agents);
    summary["training"] = {{"decisions", st.decisions}, {"episodes", st.episodes}, {"simulated_ms", st.simulated_ms}};
    log << "trained " << st.decisions << " decisions over " << st.episodes << " episode(s)\n";
  }

  if (cfg.mode == Mode::Train) {
    // The trace of a train run is a frozen evaluation on the training seed.
    auto trace = open_out(opt.out_dir / "trace.csv");
    EvalOptions eo;
    eo.workload_seed = seed;
    eo.trace_sink = &trace;
    eo.event_rows = event_rows;
    auto e = evaluate_agents(cfg, agents, eo);
    summary["run"] = summary_json(e.summary);
    summary["trace_digest"] = e.result.digest;
    write_metrics(opt.out_dir / "metrics", e.summary, e.result.rows);
  } else if (cfg.mode == Mode::Evaluate) {
    auto trace = open_out(opt.out_dir / "trace.csv");
    EvalOptions eo;
    eo.workload_seed = seed + cfg.evaluation.seed_offset;
    eo.trace_sink = &trace;
    eo.event_rows = event_rows;
    eo.diagnostics = diag_ptr;
    auto e = evaluate_agents(cfg, agents, eo);
    summary["run"] = summary_json(e.summary);
    summary["trace_digest"] = e.result.digest;
    write_metrics(opt.out_dir / "metrics", e.summary, e.result.rows);
  } else {
    json runs = json::array();
    double d_ofr = 0.0, d_rebids = 0.0;
    for (int k = 0; k < cfg.evaluation.seeds; ++k) {
      EvalOptions eo;
      eo.workload_seed = seed + cfg.evaluation.seed_offset + static_cast<std::uint64_t>(k);
      eo.event_rows = event_rows;
      std::optional<std::ofstream> trace;
      if (k == 0) {
        trace.emplace(open_out(opt.out_dir / "trace.csv"));
        eo.trace_sink = &*trace;
      }
      auto a = evaluate_agents(cfg, agents, eo);
      auto passive = make_agents(cfg, false, seed);
      EvalOptions po = eo;
      std::optional<std::ofstream> ptrace;
      if (k == 0) {
        ptrace.emplace(open_out(opt.out_dir / "trace_passive.csv"));
        po.trace_sink = &*ptrace;
      }
      auto p = evaluate_agents(cfg, passive, po);
      if (k == 0) {
        write_metrics(opt.out_dir / "metrics" / "active", a.summary, a.result.rows);
        write_metrics(opt.out_dir / "metrics" / "passive", p.summary, p.result.rows);
        summary["trace_digest"] = a.result.digest;
      }
      auto paired = pair_summaries(a.summary, p.summary);
      d_ofr += paired.delta_ofr;
      d_rebids += paired.delta_mean_rebids;
      json j = paired_json(paired);
      j["workload_seed"] = eo.workload_seed;
      runs.push_back(std::move(j));
      log << "seed " << eo.workload_seed << ": OFR active " << paired.active.ofr << " passive "
          << paired.passive.ofr << '\n';
    }
    summary["runs"] = runs;
    const double n = std::max(1, cfg.evaluation.seeds);
    summary["mean_delta"] = {{"ofr", d_ofr / n}, {"mean_rebids", d_rebids / n}};
  }

  const std::string text = summary.dump(2);
  open_out(opt.out_dir / "summary.json") << text << '\n';
  return text;
}

}  // namespace offload::scenario
