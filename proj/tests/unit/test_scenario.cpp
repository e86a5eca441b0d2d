#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "offload/scenario/config.hpp"
#include "offload/scenario/metrics.hpp"
#include "offload/scenario/model.hpp"
#include "offload/scenario/runner.hpp"
#include "offload/scenario/world.hpp"

using namespace offload::scenario;
using offload::sim::TraceRow;

namespace {

TraceRow request(const std::string& vehicle, const std::string& outcome, int rebids = 0, double price = 1.0,
                 double backoff_ms = 0.0, std::int64_t deadline = 50) {
  TraceRow r;
  r.kind = "request";
  r.entity = vehicle;
  r.add("deadline", deadline)
      .add("outcome", outcome)
      .add("submissions", 1 + rebids)
      .add("rebids", rebids)
      .add("backoff_ms", backoff_ms)
      .add("price_sum", price * (1 + rebids))
      .add("budget", std::string("high"));
  return r;
}

TraceRow vehicle(const std::string& id, const std::string& level) {
  TraceRow r;
  r.kind = "vehicle";
  r.entity = id;
  r.add("level", level);
  return r;
}

const char* kMinimal = R"({"sites": [{"id": "edge", "capacity": 20}]})";

// Hand-rolled linear-interpolation quantile on sorted data.
double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

ScenarioConfig tiny_config() {
  auto cfg = parse_scenario_text(R"({
    "duration_ms": 3000, "time_unit_ms": 10, "vehicles": {"count": 3},
    "sites": [{"id": "edge", "capacity": 20}, {"id": "remote", "capacity": 20, "report_delay_ms": 50}],
    "arrivals": {"rate_scale": 60}, "training": {"decisions": 300}})");
  cfg.learning.window = 2;
  cfg.learning.hidden = 8;
  return cfg;
}

}  // namespace

TEST_CASE("minimal scenario gets the documented defaults") {
  const auto c = parse_scenario_text(kMinimal);
  CHECK(c.vehicle_count == 10);
  CHECK(c.max_rebids == 1);
  CHECK(c.mode == Mode::Compare);
  CHECK(c.catalog.size() == 8);
  CHECK(c.agents.budget_high == 100.0);
  CHECK(c.agents.budget_low == 30.0);
  CHECK(c.learning.window == 8);
}

TEST_CASE("invalid scenarios name the offending field") {
  try {
    parse_scenario_text(R"({"max_rebids": 0, "sites": [{"id": "edge", "capacity": 20}]})");
    FAIL("accepted max_rebids 0");
  } catch (const ValidationError& e) {
    CHECK(e.path == "max_rebids");
  }
  try {
    parse_scenario_text(R"({"sedd": 1, "sites": [{"id": "edge", "capacity": 20}]})");
    FAIL("accepted an unknown key");
  } catch (const ValidationError& e) {
    CHECK(e.path == "sedd");
  }
  CHECK_THROWS_AS(parse_scenario_text("{"), ConfigParseError);
}

TEST_CASE("config echo parses back to the same config") {
  const auto c = parse_scenario_text(kMinimal);
  CHECK(scenario_to_json(parse_scenario_text(scenario_to_json(c))) == scenario_to_json(c));
}

TEST_CASE("failure ratio counts final outcomes") {
  std::vector<TraceRow> rows;
  for (int i = 0; i < 7; ++i) rows.push_back(request("v", "completed"));
  rows.push_back(request("v", "rejected"));
  rows.push_back(request("v", "rejected"));
  rows.push_back(request("v", "dropped"));
  CHECK(compute_ofr(rows) == doctest::Approx(0.3));
  const auto s = summarize(rows);
  CHECK(s.ofr + double(s.completed) / s.requests == 1.0);
  CHECK(compute_reliability(rows) == doctest::Approx(7.0 / 8.0));

  std::vector<TraceRow> ok{request("v", "completed"), request("v", "completed", 1)};
  CHECK(compute_ofr(ok) == 0.0);
  CHECK(compute_rebidding_stats(ok).max == 0.5);
}

TEST_CASE("rebidding statistics") {
  std::vector<TraceRow> none{request("a", "completed"), request("b", "rejected")};
  const auto z = compute_rebidding_stats(none);
  CHECK(z.mean == 0.0);
  CHECK(z.max == 0.0);

  std::vector<TraceRow> one{request("a", "completed", 1)};
  CHECK(compute_vehicle_stats(one)[0].mean_rebids == 1.0);

  // Known per-vehicle means; quartiles recounted here.
  std::vector<TraceRow> rows;
  const int counts[] = {0, 1, 1, 2, 4, 9};
  std::vector<double> means;
  for (int i = 0; i < 6; ++i) {
    rows.push_back(request("v" + std::to_string(i), "completed", counts[i]));
    rows.push_back(request("v" + std::to_string(i), "completed", 0));
    means.push_back(counts[i] / 2.0);
  }
  const auto b = compute_rebidding_stats(rows);
  CHECK(b.q1 == doctest::Approx(quantile(means, 0.25)));
  CHECK(b.median == doctest::Approx(quantile(means, 0.5)));
  CHECK(b.q3 == doctest::Approx(quantile(means, 0.75)));
  const double iqr = b.q3 - b.q1;
  double hi = 0.0;
  for (double m : means)
    if (m <= b.q3 + 1.5 * iqr) hi = std::max(hi, m);
  CHECK(b.whisker_hi == hi);
}

TEST_CASE("individual failure ratio distribution") {
  std::vector<TraceRow> same{vehicle("a", "high"), vehicle("b", "high"), request("a", "rejected"),
                             request("a", "completed"), request("b", "completed"), request("b", "dropped")};
  auto cdf = compute_individual_ofr_cdf(same);
  REQUIRE(cdf.size() == 1);
  CHECK(cdf[0].ofr == 0.5);
  CHECK(cdf[0].cumulative == 1.0);

  std::vector<TraceRow> two{vehicle("a", "low"), vehicle("b", "low")};
  for (int i = 0; i < 10; ++i) {
    two.push_back(request("a", i == 0 ? "rejected" : "completed"));
    two.push_back(request("b", i < 3 ? "rejected" : "completed"));
  }
  cdf = compute_individual_ofr_cdf(two);
  REQUIRE(cdf.size() == 2);
  CHECK(cdf[0].level == "low");
  CHECK(cdf[0].ofr == doctest::Approx(0.1));
  CHECK(cdf[0].cumulative == 0.5);
  CHECK(cdf[1].ofr == doctest::Approx(0.3));
  CHECK(cdf[1].cumulative == 1.0);
}

TEST_CASE("backoff by price group") {
  std::vector<TraceRow> flat{request("a", "completed", 0, 2.0, 10), request("b", "completed", 0, 2.0, 30)};
  auto g = backoff_price_analysis(flat);
  REQUIRE(g.size() == 1);
  CHECK(g[0].group == "high");
  CHECK(g[0].vehicles == 2);

  // a bids 4 and 2 (mean 3), b bids 1: overall mean of means is 2.
  std::vector<TraceRow> rows{request("a", "completed", 0, 4.0, 10, 50), request("a", "completed", 0, 2.0, 20, 300),
                             request("b", "completed", 0, 1.0, 40, 50), request("b", "completed", 0, 1.0, 60, 50)};
  g = backoff_price_analysis(rows);
  REQUIRE(g.size() == 3);
  CHECK(g[0].group == "high");
  CHECK(g[0].deadline_ms == 50);
  CHECK(g[0].mean_backoff_ms == 10.0);
  CHECK(g[1].deadline_ms == 300);
  CHECK(g[1].mean_backoff_ms == 20.0);
  CHECK(g[2].group == "low");
  CHECK(g[2].mean_backoff_ms == 50.0);
}

TEST_CASE("site utilization statistics") {
  std::vector<TraceRow> rows;
  const double xs[] = {0.2, 0.4, 0.9};
  for (double x : xs) {
    TraceRow r;
    r.kind = "util";
    r.entity = "site/edge";
    r.add("util", x);
    rows.push_back(r);
  }
  const auto s = compute_site_utilization(rows);
  REQUIRE(s.size() == 1);
  CHECK(s[0].site == "edge");
  const double mean = 0.5;
  CHECK(s[0].mean == doctest::Approx(mean));
  CHECK(s[0].std == doctest::Approx(std::sqrt(((0.3 * 0.3) + (0.1 * 0.1) + (0.4 * 0.4)) / 3)));
}

TEST_CASE("paired deltas are differences") {
  RunSummary a, p;
  a.ofr = 0.3;
  p.ofr = 0.5;
  a.mean_rebids = 1.0;
  p.mean_rebids = 1.25;
  const auto d = pair_summaries(a, p);
  CHECK(d.delta_ofr == 0.3 - 0.5);
  CHECK(d.delta_mean_rebids == 1.0 - 1.25);
}

TEST_CASE("metrics recomputed from the saved trace match") {
  auto cfg = tiny_config();
  auto agents = make_agents(cfg, false, 1);
  std::ostringstream csv;
  EvalOptions eo;
  eo.trace_sink = &csv;
  const auto run = evaluate_agents(cfg, agents, eo);
  std::istringstream in(csv.str());
  const auto rows = offload::sim::RunTrace::parse_csv(in);
  const auto again = summarize(rows);
  CHECK(again.ofr == run.summary.ofr);
  CHECK(again.requests == run.summary.requests);
  CHECK(again.requests > 0);
  REQUIRE(again.sites.size() == run.summary.sites.size());
  for (std::size_t i = 0; i < again.sites.size(); ++i) CHECK(again.sites[i].std == run.summary.sites[i].std);
  CHECK(again.vehicles.size() == 3);
}

TEST_CASE("passive against passive is bit identical") {
  auto cfg = tiny_config();
  auto a = make_agents(cfg, false, 4);
  auto b = make_agents(cfg, false, 4);
  EvalOptions eo;
  eo.workload_seed = 9;
  const auto ra = evaluate_agents(cfg, a, eo);
  const auto rb = evaluate_agents(cfg, b, eo);
  CHECK(ra.result.digest == rb.result.digest);
  CHECK(ra.summary.ofr == rb.summary.ofr);
}

TEST_CASE("only active fleets write learning diagnostics") {
  auto cfg = tiny_config();
  auto active = make_agents(cfg, true, 2);
  auto passive = make_agents(cfg, false, 2);
  std::ostringstream da, dp;
  train_agents(cfg, active, 3, &da);
  train_agents(cfg, passive, 3, &dp);
  const auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  CHECK(lines(da.str()) > 1);
  CHECK(lines(dp.str()) <= 1);
}

TEST_CASE("models round-trip exactly") {
  auto cfg = tiny_config();
  auto agents = make_agents(cfg, true, 2);
  train_agents(cfg, agents, 3);
  std::stringstream io;
  save_models(io, agents);
  auto loaded = make_agents(cfg, true, 2);
  load_models(io, loaded);
  REQUIRE(loaded.size() == agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    CHECK(loaded[i].rl().actor().params() == agents[i].rl().actor().params());
    CHECK(loaded[i].rl().critic().params() == agents[i].rl().critic().params());
    CHECK(loaded[i].sl().net().params() == agents[i].sl().net().params());
    CHECK(loaded[i].step() == agents[i].step());
  }
  std::istringstream bad("offload-model 2\n");
  CHECK_THROWS_AS(load_models(bad, loaded), ModelFormatError);
}

TEST_CASE("every admitted request ends exactly once") {
  auto cfg = tiny_config();
  auto agents = make_agents(cfg, true, 5);
  RunOptions ro;
  ro.duration_ms = 3000;
  const auto r = run_world(cfg, agents, ro);
  std::map<std::string, int> seen;
  for (const auto& row : r.rows)
    if (row.kind == "request") ++seen[row.entity + "/" + row.at("id")];
  CHECK(!seen.empty());
  for (const auto& [id, n] : seen) CHECK(n == 1);
}
