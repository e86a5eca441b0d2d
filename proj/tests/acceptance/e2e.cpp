// Scaled end-to-end comparison of learning and passive fleets.
#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>
#include <vector>

#include "criteria.hpp"
#include "offload/scenario/runner.hpp"

namespace acceptance {

namespace sc = offload::scenario;

namespace {

constexpr int kSeeds = 5;
constexpr double kCapacities[] = {20.0, 35.0, 50.0};
constexpr std::size_t kHigh = 0;  // index of the high-contention capacity
constexpr std::size_t kLow = 2;

struct SeedResult {
  double ofr_active = 0.0;
  double ofr_passive = 0.0;
  double rebids_active_mp5 = 0.0;
  double rebids_passive_mp5 = 0.0;
  double remote_std_active = 0.0;
  double remote_std_passive = 0.0;
  // generalization run (low-contention models only)
  double gen_ofr_active = 0.0;
  double gen_ofr_passive = 0.0;
};

struct Study {
  std::vector<std::vector<SeedResult>> by_capacity;
  double seconds = 0.0;
};

double remote_std(const sc::RunSummary& s) {
  for (const auto& u : s.sites)
    if (u.site == "remote") return u.std;
  return 0.0;
}

sc::ScenarioConfig with_capacity(sc::ScenarioConfig cfg, double capacity) {
  for (auto& site : cfg.sites) site.capacity = capacity;
  return cfg;
}

const Study& study(const std::filesystem::path& dir) {
  static std::optional<Study> cached;
  if (cached) return *cached;
  const auto t0 = std::chrono::steady_clock::now();
  const sc::ScenarioConfig base = sc::parse_scenario(dir / "e2e_synthetic.json");
  Study st;
  for (std::size_t ci = 0; ci < std::size(kCapacities); ++ci) {
    const auto cfg = with_capacity(base, kCapacities[ci]);
    std::vector<SeedResult> rows;
    for (int s = 1; s <= kSeeds; ++s) {
      const auto seed = static_cast<std::uint64_t>(s);
      auto agents = sc::make_agents(cfg, true, seed);
      auto passive = sc::make_agents(cfg, false, seed);
      sc::train_agents(cfg, agents, seed);

      SeedResult r;
      sc::EvalOptions eo;
      eo.workload_seed = seed + cfg.evaluation.seed_offset;
      eo.event_rows = false;
      eo.max_rebids = 1;
      const auto a1 = sc::evaluate_agents(cfg, agents, eo);
      const auto p1 = sc::evaluate_agents(cfg, passive, eo);
      r.ofr_active = a1.summary.ofr;
      r.ofr_passive = p1.summary.ofr;
      r.remote_std_active = remote_std(a1.summary);
      r.remote_std_passive = remote_std(p1.summary);
      eo.max_rebids = 5;
      r.rebids_active_mp5 = sc::evaluate_agents(cfg, agents, eo).summary.mean_rebids;
      r.rebids_passive_mp5 = sc::evaluate_agents(cfg, passive, eo).summary.mean_rebids;

      if (ci == kLow) {
        // Same models, no retraining: half the capacity, twice the arrivals.
        auto hard = with_capacity(cfg, kCapacities[ci] / 2.0);
        hard.arrivals.rate_scale *= 2.0;
        eo.max_rebids = 1;
        r.gen_ofr_active = sc::evaluate_agents(hard, agents, eo).summary.ofr;
        r.gen_ofr_passive = sc::evaluate_agents(hard, passive, eo).summary.ofr;
      }
      std::fprintf(stderr,
                   "  capacity %g seed %d: OFR %.4f vs %.4f, MP5 rebids %.4f vs %.4f, remote std %.4f vs %.4f\n",
                   kCapacities[ci], s, r.ofr_active, r.ofr_passive, r.rebids_active_mp5, r.rebids_passive_mp5,
                   r.remote_std_active, r.remote_std_passive);
      rows.push_back(r);
    }
    st.by_capacity.push_back(std::move(rows));
  }
  st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  cached = std::move(st);
  return *cached;
}

}  // namespace

Verdict end_to_end(const std::filesystem::path& dir) {
  const auto& st = study(dir);
  std::ostringstream os;
  bool pass = true;
  os << "(a) OFR active<=passive seeds per capacity:";
  for (std::size_t ci = 0; ci < st.by_capacity.size(); ++ci) {
    int ok = 0;
    for (const auto& r : st.by_capacity[ci]) ok += r.ofr_active <= r.ofr_passive ? 1 : 0;
    os << ' ' << kCapacities[ci] << "->" << ok << "/" << kSeeds;
    pass = pass && ok >= 4;
  }
  int rebid_ok = 0;
  int std_ok = 0;
  for (const auto& r : st.by_capacity[kHigh]) {
    rebid_ok += r.rebids_active_mp5 < r.rebids_passive_mp5 ? 1 : 0;
    std_ok += r.remote_std_active < r.remote_std_passive ? 1 : 0;
  }
  os << "; (b) MP=5 rebids lower " << rebid_ok << "/" << kSeeds << "; (c) remote util std lower " << std_ok << "/"
     << kSeeds << "; " << st.seconds << " s";
  pass = pass && rebid_ok >= 4 && std_ok >= 4 && st.seconds < 1800.0;
  return {pass, os.str()};
}

Verdict generalization(const std::filesystem::path& dir) {
  const auto& st = study(dir);
  int ok = 0;
  for (const auto& r : st.by_capacity[kLow]) ok += r.gen_ofr_active <= r.gen_ofr_passive ? 1 : 0;
  std::ostringstream os;
  os << "OFR active<=passive under halved capacity and doubled arrivals: " << ok << "/" << kSeeds;
  return {ok >= 3, os.str()};
}

}  // namespace acceptance
