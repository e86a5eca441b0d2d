#include "offload/scenario/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace offload::scenario {

using nlohmann::json;

namespace {

// Reads fields of one JSON object and rejects any key it was not asked for.
class Section {
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  template <class T>
  void get(const std::string& key, T& out) {
    const json* v = find(key);
    if (!v) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v->is_boolean()) throw ValidationError(field(key), "expected true or false");
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!v->is_number()) throw ValidationError(field(key), "expected a number");
        if constexpr (std::is_integral_v<T>) {
          if (!v->is_number_integer() && !v->is_number_unsigned())
            throw ValidationError(field(key), "expected an integer");
        }
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v->is_string()) throw ValidationError(field(key), "expected a string");
      }
      out = v->get<T>();
    } catch (const json::exception& e) {
      throw ValidationError(field(key), e.what());
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ValidationError(field(it.key()), "unknown key");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

workload::Catalog parse_catalog(const json& j, const std::string& path, std::string& name) {
  if (j.is_string()) {
    name = j.get<std::string>();
    if (name == "synthetic") return workload::synthetic_catalog();
    if (name == "junction") return workload::junction_catalog();
    throw ValidationError(path, "unknown catalog '" + name + "'");
  }
  if (!j.is_array()) throw ValidationError(path, "expected a catalog name or a list of service types");
  name = "custom";
  std::vector<workload::ServiceTypeSpec> types;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    Section s(j[i], p);
    workload::ServiceTypeSpec t;
    s.get("type_id", t.type_id);
    s.get("deadline_ms", t.deadline_ms);
    s.get("probability", t.probability);
    s.get("uplink_bits", t.uplink_bits);
    s.get("downlink_bits", t.downlink_bits);
    const json* tasks = s.find("tasks");
    if (!tasks || !tasks->is_array()) throw ValidationError(p + ".tasks", "expected a list of tasks");
    for (std::size_t k = 0; k < tasks->size(); ++k) {
      Section ts((*tasks)[k], p + ".tasks[" + std::to_string(k) + "]");
      workload::TaskSpec task;
      ts.get("id", task.task_id);
      ts.get("units", task.resource_units);
      ts.finish();
      t.task_chain.push_back(task);
    }
    s.finish();
    types.push_back(std::move(t));
  }
  try {
    return workload::Catalog(std::move(types));
  } catch (const std::invalid_argument& e) {
    throw ValidationError(path, e.what());
  }
}

json catalog_json(const ScenarioConfig& c) {
  if (c.catalog_name != "custom") return c.catalog_name;
  json arr = json::array();
  for (std::size_t i = 0; i < c.catalog.size(); ++i) {
    const auto& t = c.catalog[i];
    json tasks = json::array();
    for (const auto& task : t.task_chain) tasks.push_back({{"id", task.task_id}, {"units", task.resource_units}});
    arr.push_back({{"type_id", t.type_id},
                   {"tasks", tasks},
                   {"deadline_ms", t.deadline_ms},
                   {"probability", c.catalog.raw_probabilities()[i]},
                   {"uplink_bits", t.uplink_bits},
                   {"downlink_bits", t.downlink_bits}});
  }
  return arr;
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Train: return "train";
    case Mode::Evaluate: return "evaluate";
    case Mode::Compare: return "compare";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "train") return Mode::Train;
  if (s == "evaluate") return Mode::Evaluate;
  if (s == "compare") return Mode::Compare;
  throw ValidationError("mode", "expected train, evaluate or compare, got '" + s + "'");
}

void ScenarioConfig::validate() const {
  if (duration_ms <= 0) throw ValidationError("duration_ms", "must be positive");
  if (max_rebids < 1) throw ValidationError("max_rebids", "must be at least 1");
  if (!mobility_trace && vehicle_count < 1) throw ValidationError("vehicles.count", "must be at least 1");
  if (mobility_trace && !std::filesystem::exists(*mobility_trace))
    throw ValidationError("vehicles.mobility_trace", "file not found: " + mobility_trace->string());
  if (catalog.empty()) throw ValidationError("catalog", "must list at least one service type");
  if (sites.empty()) throw ValidationError("sites", "need at least one computing site");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const std::string p = "sites[" + std::to_string(i) + "]";
    if (sites[i].id.empty()) throw ValidationError(p + ".id", "must not be empty");
    if (!ids.insert(sites[i].id).second) throw ValidationError(p + ".id", "duplicate site id");
    if (!(sites[i].capacity > 0.0)) throw ValidationError(p + ".capacity", "must be positive");
    if (sites[i].report_delay_ms < 0) throw ValidationError(p + ".report_delay_ms", "must be non-negative");
    for (const auto& [type, mult] : sites[i].profile)
      if (!(mult > 0.0)) throw ValidationError(p + ".profile." + type, "must be positive");
  }
  if (!(time_unit_ms > 0.0)) throw ValidationError("time_unit_ms", "must be positive");
  if (!(data_bits_lo >= 0.0 && data_bits_hi >= data_bits_lo)) throw ValidationError("data_bits", "need 0 <= lo <= hi");
  if (arrivals.kind != "mmpp" && arrivals.kind != "periodic")
    throw ValidationError("arrivals.kind", "expected mmpp or periodic");
  if (arrivals.kind == "periodic") {
    for (const auto& [type, period] : arrivals.period_ms) {
      try {
        catalog.index_of(type);
      } catch (const std::exception&) {
        throw ValidationError("arrivals.period_ms." + type, "not a catalog type");
      }
      if (period <= 0) throw ValidationError("arrivals.period_ms." + type, "must be positive");
    }
    if (arrivals.period_ms.empty()) throw ValidationError("arrivals.period_ms", "periodic arrivals need periods");
  } else {
    if (!(arrivals.rate_scale > 0.0)) throw ValidationError("arrivals.rate_scale", "must be positive");
    if (arrivals.epoch_ms <= 0) throw ValidationError("arrivals.epoch_ms", "must be positive");
    if (arrivals.p_high < 0 || arrivals.p_high > 1) throw ValidationError("arrivals.p_high", "must be a probability");
    if (arrivals.p_low < 0 || arrivals.p_low > 1) throw ValidationError("arrivals.p_low", "must be a probability");
    if (arrivals.high_lo_per_s < 0 || arrivals.high_hi_per_s < arrivals.high_lo_per_s)
      throw ValidationError("arrivals.high_per_s", "need 0 <= lo <= hi");
    if (arrivals.low_lo_per_s < 0 || arrivals.low_hi_per_s < arrivals.low_lo_per_s)
      throw ValidationError("arrivals.low_per_s", "need 0 <= lo <= hi");
  }
  if (op.cadence_ms <= 0) throw ValidationError("operator.cadence_ms", "must be positive");
  if (op.sigma_delay_ms < 0) throw ValidationError("operator.sigma_delay_ms", "must be non-negative");
  if (op.sigma_util < 0) throw ValidationError("operator.sigma_util", "must be non-negative");
  if (op.sigma_work < 0) throw ValidationError("operator.sigma_work", "must be non-negative");
  if (!(op.gamma_price > 0)) throw ValidationError("operator.gamma_price", "must be positive");
  if (!(op.estimate_rate > 0 && op.estimate_rate <= 1)) throw ValidationError("operator.estimate_rate", "must be in (0, 1]");
  if (!(op.admission_horizon > 0)) throw ValidationError("operator.admission_horizon", "must be positive");
  if (!(agents.budget_high > 0) || !(agents.budget_low > 0)) throw ValidationError("agents.budget", "must be positive");
  if (agents.high_fraction < 0 || agents.high_fraction > 1) throw ValidationError("agents.high_fraction", "must be a probability");
  if (agents.lost_bid_cost < 0) throw ValidationError("agents.lost_bid_cost", "must be non-negative");
  if (agents.utilization_weight < 0) throw ValidationError("agents.utilization_weight", "must be non-negative");
  if (!(agents.backoff_threshold > 0 && agents.backoff_threshold < 1))
    throw ValidationError("agents.backoff_threshold", "must be in (0, 1)");
  if (agents.max_backoff_ms <= 0) throw ValidationError("agents.max_backoff_ms", "must be positive");
  if (learning.window < 1) throw ValidationError("learning.window", "must be at least 1");
  if (learning.hidden < 1) throw ValidationError("learning.hidden", "must be at least 1");
  if (!(learning.reward_scale > 0)) throw ValidationError("learning.reward_scale", "must be positive");
  if (!(learning.avg_reward_retention >= 0 && learning.avg_reward_retention < 1))
    throw ValidationError("learning.avg_reward_retention", "must be in [0, 1)");
  if (learning.sl_batch < 1) throw ValidationError("learning.sl_batch", "must be at least 1");
  if (learning.eta_floor < 0 || learning.eta_floor > 1) throw ValidationError("learning.eta_floor", "must be in [0, 1]");
  if (training.decisions < 0) throw ValidationError("training.decisions", "must be non-negative");
  if (training.max_duration_ms <= 0) throw ValidationError("training.max_duration_ms", "must be positive");
  if (evaluation.seeds < 1) throw ValidationError("evaluation.seeds", "must be at least 1");
  if (trace_detail != "all" && trace_detail != "summary") throw ValidationError("trace_detail", "expected all or summary");
}

ScenarioConfig parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigParseError(e.what());
  }
  ScenarioConfig c;
  c.catalog = workload::synthetic_catalog();
  c.sites = {{"edge", 50.0, 0, {}}, {"remote", 50.0, 50, {}}};
  Section r(root, "");
  r.get("seed", c.seed);
  r.get("duration_ms", c.duration_ms);
  std::string mode = to_string(c.mode);
  r.get("mode", mode);
  c.mode = parse_mode(mode);
  r.get("time_unit_ms", c.time_unit_ms);
  r.get("max_rebids", c.max_rebids);
  r.get("trace_detail", c.trace_detail);
  r.get("zero_latency", c.zero_latency);

  if (const json* v = r.find("vehicles")) {
    Section s(*v, "vehicles");
    s.get("count", c.vehicle_count);
    std::string trace;
    s.get("mobility_trace", trace);
    if (!trace.empty()) {
      std::filesystem::path p(trace);
      c.mobility_trace = p.is_absolute() ? p : base_dir / p;
    }
    s.finish();
  }
  if (const json* v = r.find("catalog")) c.catalog = parse_catalog(*v, "catalog", c.catalog_name);
  if (const json* v = r.find("data_bits")) {
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
      throw ValidationError("data_bits", "expected [lo, hi]");
    c.data_bits_lo = (*v)[0].get<double>();
    c.data_bits_hi = (*v)[1].get<double>();
  }
  if (const json* v = r.find("sites")) {
    if (!v->is_array()) throw ValidationError("sites", "expected a list");
    c.sites.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string p = "sites[" + std::to_string(i) + "]";
      Section s((*v)[i], p);
      SiteConfig sc;
      s.get("id", sc.id);
      s.get("capacity", sc.capacity);
      s.get("report_delay_ms", sc.report_delay_ms);
      if (const json* prof = s.find("profile")) {
        Section ps(*prof, p + ".profile");
        for (auto it = prof->begin(); it != prof->end(); ++it) {
          double m = 1.0;
          ps.get(it.key(), m);
          sc.profile[it.key()] = m;
        }
        ps.finish();
      }
      s.finish();
      c.sites.push_back(std::move(sc));
    }
  }
  if (const json* v = r.find("arrivals")) {
    Section s(*v, "arrivals");
    auto& a = c.arrivals;
    s.get("kind", a.kind);
    auto pair = [&](const char* key, double& lo, double& hi) {
      if (const json* pv = s.find(key)) {
        if (!pv->is_array() || pv->size() != 2 || !(*pv)[0].is_number() || !(*pv)[1].is_number())
          throw ValidationError(s.field(key), "expected [lo, hi]");
        lo = (*pv)[0].get<double>();
        hi = (*pv)[1].get<double>();
      }
    };
    pair("high_per_s", a.high_lo_per_s, a.high_hi_per_s);
    pair("low_per_s", a.low_lo_per_s, a.low_hi_per_s);
    s.get("p_high", a.p_high);
    s.get("p_low", a.p_low);
    s.get("epoch_ms", a.epoch_ms);
    s.get("rate_scale", a.rate_scale);
    if (const json* pm = s.find("period_ms")) {
      Section ps(*pm, "arrivals.period_ms");
      for (auto it = pm->begin(); it != pm->end(); ++it) {
        std::int64_t period = 0;
        ps.get(it.key(), period);
        a.period_ms[it.key()] = period;
      }
      ps.finish();
    }
    s.finish();
  }
  if (const json* v = r.find("operator")) {
    Section s(*v, "operator");
    s.get("cadence_ms", c.op.cadence_ms);
    s.get("sigma_delay_ms", c.op.sigma_delay_ms);
    s.get("sigma_util", c.op.sigma_util);
    s.get("sigma_work", c.op.sigma_work);
    s.get("gamma_price", c.op.gamma_price);
    s.get("estimate_rate", c.op.estimate_rate);
    s.get("admission_horizon", c.op.admission_horizon);
    s.finish();
  }
  if (const json* v = r.find("agents")) {
    Section s(*v, "agents");
    auto& a = c.agents;
    s.get("active", a.active);
    s.get("budget_high", a.budget_high);
    s.get("budget_low", a.budget_low);
    s.get("high_fraction", a.high_fraction);
    s.get("valuation_slope", a.valuation_slope);
    s.get("valuation_intercept", a.valuation_intercept);
    s.get("lost_bid_cost", a.lost_bid_cost);
    s.get("backoff_cost", a.backoff_cost);
    s.get("utilization_weight", a.utilization_weight);
    s.get("backoff_threshold", a.backoff_threshold);
    s.get("max_backoff_ms", a.max_backoff_ms);
    s.get("failure_penalty", a.failure_penalty);
    s.finish();
  }
  if (const json* v = r.find("learning")) {
    Section s(*v, "learning");
    auto& l = c.learning;
    s.get("window", l.window);
    s.get("hidden", l.hidden);
    s.get("actor_rate", l.actor_rate);
    s.get("critic_rate", l.critic_rate);
    s.get("avg_reward_retention", l.avg_reward_retention);
    s.get("grad_clip", l.grad_clip);
    s.get("initial_sigma", l.initial_sigma);
    s.get("initial_backoff_raw", l.initial_backoff_raw);
    s.get("sl_rate", l.sl_rate);
    s.get("sl_batch", l.sl_batch);
    s.get("sl_memory", l.sl_memory);
    s.get("sl_train_every", l.sl_train_every);
    s.get("eta_floor", l.eta_floor);
    s.get("eta_floor_after", l.eta_floor_after);
    s.get("reward_scale", l.reward_scale);
    s.finish();
  }
  if (const json* v = r.find("training")) {
    Section s(*v, "training");
    s.get("decisions", c.training.decisions);
    s.get("max_duration_ms", c.training.max_duration_ms);
    s.finish();
  }
  if (const json* v = r.find("evaluation")) {
    Section s(*v, "evaluation");
    s.get("seed_offset", c.evaluation.seed_offset);
    s.get("seeds", c.evaluation.seeds);
    s.finish();
  }
  r.finish();
  c.validate();
  return c;
}

ScenarioConfig parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot read scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), path.parent_path());
}

std::string scenario_to_json(const ScenarioConfig& c) {
  json sites = json::array();
  for (const auto& s : c.sites)
    sites.push_back({{"id", s.id}, {"capacity", s.capacity}, {"report_delay_ms", s.report_delay_ms}, {"profile", s.profile}});
  const auto& a = c.arrivals;
  const auto& l = c.learning;
  json j = {
      {"seed", c.seed},
      {"duration_ms", c.duration_ms},
      {"mode", to_string(c.mode)},
      {"time_unit_ms", c.time_unit_ms},
      {"max_rebids", c.max_rebids},
      {"trace_detail", c.trace_detail},
      {"zero_latency", c.zero_latency},
      {"vehicles", {{"count", c.vehicle_count}, {"mobility_trace", c.mobility_trace ? c.mobility_trace->string() : ""}}},
      {"catalog", catalog_json(c)},
      {"data_bits", {c.data_bits_lo, c.data_bits_hi}},
      {"sites", sites},
      {"arrivals",
       {{"kind", a.kind},
        {"high_per_s", {a.high_lo_per_s, a.high_hi_per_s}},
        {"low_per_s", {a.low_lo_per_s, a.low_hi_per_s}},
        {"p_high", a.p_high},
        {"p_low", a.p_low},
        {"epoch_ms", a.epoch_ms},
        {"rate_scale", a.rate_scale},
        {"period_ms", a.period_ms}}},
      {"operator",
       {{"cadence_ms", c.op.cadence_ms},
        {"sigma_delay_ms", c.op.sigma_delay_ms},
        {"sigma_util", c.op.sigma_util},
        {"sigma_work", c.op.sigma_work},
        {"gamma_price", c.op.gamma_price},
        {"estimate_rate", c.op.estimate_rate},
        {"admission_horizon", c.op.admission_horizon}}},
      {"agents",
       {{"active", c.agents.active},
        {"budget_high", c.agents.budget_high},
        {"budget_low", c.agents.budget_low},
        {"high_fraction", c.agents.high_fraction},
        {"valuation_slope", c.agents.valuation_slope},
        {"valuation_intercept", c.agents.valuation_intercept},
        {"lost_bid_cost", c.agents.lost_bid_cost},
        {"backoff_cost", c.agents.backoff_cost},
        {"utilization_weight", c.agents.utilization_weight},
        {"backoff_threshold", c.agents.backoff_threshold},
        {"max_backoff_ms", c.agents.max_backoff_ms},
        {"failure_penalty", c.agents.failure_penalty}}},
      {"learning",
       {{"window", l.window},
        {"hidden", l.hidden},
        {"actor_rate", l.actor_rate},
        {"critic_rate", l.critic_rate},
        {"avg_reward_retention", l.avg_reward_retention},
        {"grad_clip", l.grad_clip},
        {"initial_sigma", l.initial_sigma},
        {"initial_backoff_raw", l.initial_backoff_raw},
        {"sl_rate", l.sl_rate},
        {"sl_batch", l.sl_batch},
        {"sl_memory", l.sl_memory},
        {"sl_train_every", l.sl_train_every},
        {"eta_floor", l.eta_floor},
        {"eta_floor_after", l.eta_floor_after},
        {"reward_scale", l.reward_scale}}},
      {"training", {{"decisions", c.training.decisions}, {"max_duration_ms", c.training.max_duration_ms}}},
      {"evaluation",
       {{"seed_offset", c.evaluation.seed_offset},
        {"seeds", c.evaluation.seeds}}},
  };
  return j.dump(2);
}

}  // namespace offload::scenario
