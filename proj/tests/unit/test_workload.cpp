#include <algorithm>
#include <cmath>
#include <tuple>
#include <sstream>

#include "doctest.h"
#include "offload/workload/catalog.hpp"
#include "offload/workload/latency.hpp"
#include "offload/workload/mmpp.hpp"
#include "offload/workload/mobility.hpp"

using namespace offload::workload;
using offload::sim::RngStream;

TEST_CASE("synthetic catalog sizes and renormalized weights") {
  const auto cat = synthetic_catalog();
  CHECK(cat.raw_probability_total() == doctest::Approx(1.125));
  double total = 0.0;
  for (const auto& t : cat.types()) total += t.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& t : cat.types())
    for (const auto& task : t.task_chain) {
      if (task.task_id == "F1") CHECK(task.resource_units == 3.0);
      if (task.task_id == "F2") CHECK(task.resource_units == 30.0);
    }
}

TEST_CASE("catalog sampling matches the weights (chi-square)") {
  const auto cat = synthetic_catalog();
  RngStream rng(11, "catalog");
  std::vector<int> counts(cat.size());
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[sample_service_index(cat.types(), rng)];
  double chi2 = 0.0;
  for (std::size_t k = 0; k < cat.size(); ++k) {
    const double e = n * cat[k].probability;
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
  }
  // 0.999 quantile of chi-square with 7 degrees of freedom.
  CHECK(chi2 < 24.32);
  const auto f1_300 = cat.index_of("F1/300");
  CHECK(std::abs(counts[f1_300] / double(n) - 0.1875 / 1.125) <= 0.01);
}

TEST_CASE("single entry catalog always returns it") {
  Catalog cat({ServiceTypeSpec{"only", {{"F1", 3.0}}, 50, 1.0, 0.0, 0.0}});
  RngStream rng(1, "c");
  for (int i = 0; i < 100; ++i) CHECK(sample_service_request(cat.types(), rng).type_id == "only");
  CHECK_THROWS_AS(Catalog(std::vector<ServiceTypeSpec>{}), EmptyCatalog);
}

TEST_CASE("high regime interarrival mean") {
  MmppState s;
  s.lambda_high = 0.54 / 1000.0;
  s.lambda_low = 0.06 / 1000.0;
  RngStream rng(3, "mmpp");
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    auto d = mmpp_next_arrival(s, rng, 1e12);
    s = d.state;
    sum += d.interarrival_ms;
  }
  CHECK(std::abs(sum / n - 1000.0 / 0.54) <= 0.02 * 1000.0 / 0.54);
}

TEST_CASE("zero rate is capped at the horizon") {
  MmppState s;
  s.regime = Regime::Low;
  s.lambda_high = 1e-3;
  s.lambda_low = 0.0;
  RngStream rng(3, "mmpp");
  auto d = mmpp_next_arrival(s, rng, 5000.0);
  CHECK(d.capped);
  CHECK(d.interarrival_ms == 5000.0);
}

TEST_CASE("throughput formula") {
  CHECK(throughput_at(0, 1) == 1690.0);
  CHECK(throughput_at(65, 1) == 0.0);
  CHECK(throughput_at(25, 4) == (1690.0 - 26.0 * 25) / 4);
  CHECK_THROWS_AS(throughput_at(66, 1), OutOfRange);
  for (double d = 0; d < 65; d += 5) {
    CHECK(throughput_at(d + 5, 1) <= throughput_at(d, 1));
    CHECK(throughput_at(d, 2) <= throughput_at(d, 1));
  }
}

TEST_CASE("transmission delay rounds up") {
  CHECK(transmission_delay(4e6, 400) == 10);
  CHECK(transmission_delay(0, 1) == 0);
  CHECK(transmission_delay(4e6, 1690) == static_cast<std::int64_t>(std::ceil(4e6 / 1690e3)));
  CHECK_THROWS_AS(transmission_delay(1.0, 0.0), ZeroRate);
}

TEST_CASE("mobility trace parsing") {
  std::istringstream ok("time_ms,vehicle_id,distance_m,present\n0,a,10,1\n100,a,12,1\n0,b,30,1\n");
  const auto s = parse_mobility_trace(ok);
  REQUIRE(s.size() == 3);
  CHECK(s[0].vehicle_id == "a");
  CHECK(s[1].vehicle_id == "b");
  std::istringstream far("time_ms,vehicle_id,distance_m,present\n0,a,80,1\n");
  CHECK_THROWS_AS(parse_mobility_trace(far), SchemaError);
  std::istringstream empty("");
  CHECK(parse_mobility_trace(empty).empty());
  std::istringstream missing("time_ms,vehicle_id\n0,a\n");
  CHECK_THROWS_AS(parse_mobility_trace(missing), SchemaError);
  std::istringstream bad("time_ms,vehicle_id,distance_m,present\n0,a,x,1\n");
  CHECK_THROWS_AS(parse_mobility_trace(bad), ParseError);
}

TEST_CASE("junction trace stays in range and round-trips") {
  JunctionParams p;
  p.duration_ms = 30000;
  RngStream rng(5, "junction");
  const auto trace = generate_junction_trace(p, rng);
  REQUIRE(!trace.empty());
  for (const auto& s : trace) {
    CHECK(s.distance_m >= 0.0);
    CHECK(s.distance_m <= kCoverageRadiusM);
  }
  std::stringstream io;
  write_mobility_trace(io, trace);
  // The parser orders samples by (time, vehicle id) as strings.
  auto sorted = trace;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::tie(a.time_ms, a.vehicle_id) < std::tie(b.time_ms, b.vehicle_id);
  });
  CHECK(parse_mobility_trace(io) == sorted);
}
