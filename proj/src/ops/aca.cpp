#include "offload/ops/aca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace offload::ops {

double SiteBelief::committed_units() const {
  double s = 0.0;
  for (const auto& c : commitments) s += c.units;
  return s;
}

double SiteBelief::believed_free() const {
  double util = report ? report->utilization : 0.0;
  double queued = report ? report->queued_units : 0.0;
  return capacity * horizon * (1.0 - util) - queued - committed_units();
}

double SiteBelief::believed_utilization() const {
  if (capacity <= 0.0) return 1.0;
  return std::clamp(1.0 - believed_free() / (capacity * horizon), 0.0, 1.0);
}

SiteBelief make_belief(const SiteState& site, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("admission horizon must be positive");
  SiteBelief b;
  b.site_id = site.site_id;
  b.capacity = site.capacity;
  b.horizon = horizon;
  return b;
}

void absorb_report(SiteBelief& belief, const UtilizationReport& rep) {
  if (belief.report && belief.report->measured_at > rep.measured_at) return;
  belief.report = rep;
  std::erase_if(belief.commitments, [&](const SiteBelief::Commitment& c) {
    return c.arrived_at && *c.arrived_at <= rep.measured_at;
  });
}

void note_arrival(SiteBelief& belief, std::uint64_t request_id, std::int64_t at) {
  for (auto& c : belief.commitments) {
    if (c.request_id == request_id && !c.arrived_at) {
      c.arrived_at = at;
      return;
    }
  }
}

std::map<std::string, int> compute_slots(std::span<const SiteBelief> sites,
                                         const std::map<std::string, double>& estimates) {
  double free = 0.0;
  for (const auto& s : sites) free += std::max(0.0, s.believed_free());
  std::map<std::string, int> slots;
  for (const auto& [type, est] : estimates) {
    if (!(est > 0.0)) throw std::invalid_argument("demand estimate for " + type + " must be positive");
    double n = std::floor(free / est + 1e-9);
    slots[type] = static_cast<int>(std::clamp(n, 0.0, static_cast<double>(std::numeric_limits<int>::max())));
  }
  return slots;
}

double rial_price(double utilization, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("price exponent must be positive");
  return std::pow(std::clamp(utilization, 0.0, 1.0), gamma);
}

void rial_update_prices(std::span<SiteBelief> sites, double gamma) {
  for (auto& s : sites) s.price = rial_price(s.believed_utilization(), gamma);
}

std::size_t rial_assign(double estimate, std::span<const SiteBelief> sites) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& s = sites[i];
    if (s.believed_free() + 1e-9 < estimate) continue;
    if (!best || s.price < sites[*best].price ||
        (s.price == sites[*best].price && s.site_id < sites[*best].site_id)) {
      best = i;
    }
  }
  if (!best) throw NoFeasibleSite();
  return *best;
}

std::string to_string(AdmissionReason r) {
  switch (r) {
    case AdmissionReason::Won: return "won";
    case AdmissionReason::NoSlot: return "no_slot";
    case AdmissionReason::Rejected: return "rejected";
  }
  return "?";
}

std::vector<AdmissionDecision> admit(std::span<const auction::Bid> bids, const auction::AuctionOutcome& outcome,
                                     std::vector<SiteBelief>& sites,
                                     const std::map<std::string, double>& estimates, double gamma_price) {
  std::vector<AdmissionDecision> out(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) {
    out[i].bid_index = i;
    out[i].request_id = bids[i].request_id;
  }
  // Winners in global order: price first, then arrival, then rank within type.
  struct Placed {
    std::size_t bid;
    std::size_t rank;
  };
  std::vector<Placed> winners;
  for (const auto& [type, ranked] : outcome.ranking) {
    auto slot_it = outcome.slots_offered.find(type);
    std::size_t n = slot_it == outcome.slots_offered.end() ? 0 : static_cast<std::size_t>(std::max(0, slot_it->second));
    for (std::size_t r = 0; r < ranked.size() && r < n; ++r) winners.push_back({ranked[r], r});
  }
  std::stable_sort(winners.begin(), winners.end(), [&](const Placed& a, const Placed& b) {
    const auto& x = bids[a.bid];
    const auto& y = bids[b.bid];
    if (x.price != y.price) return x.price > y.price;
    if (x.submitted_at != y.submitted_at) return x.submitted_at < y.submitted_at;
    return a.rank < b.rank;
  });
  rial_update_prices(sites, gamma_price);
  for (const auto& w : winners) {
    const auto& bid = bids[w.bid];
    auto est_it = estimates.find(bid.service_type);
    double est = est_it != estimates.end() ? est_it->second : bid.total_estimate();
    auto& d = out[w.bid];
    try {
      std::size_t s = rial_assign(est, sites);
      sites[s].commitments.push_back({bid.request_id, est, std::nullopt});
      d.admitted = true;
      d.assigned_site = sites[s].site_id;
      d.reason = AdmissionReason::Won;
      rial_update_prices(sites, gamma_price);
    } catch (const NoFeasibleSite&) {
      d.reason = AdmissionReason::Rejected;
    }
  }
  return out;
}

std::map<std::string, double> demand_estimates(std::span<const SiteState> sites,
                                               std::span<const auction::Bid> bids) {
  std::map<std::string, double> sum;
  std::map<std::string, int> count;
  for (const auto& s : sites) {
    for (const auto& [type, est] : s.estimates) {
      sum[type] += est;
      ++count[type];
    }
  }
  std::map<std::string, double> out;
  for (const auto& [type, total] : sum) out[type] = total / count[type];
  std::map<std::string, double> offered;
  for (const auto& b : bids) {
    if (out.count(b.service_type)) continue;
    double& v = offered[b.service_type];
    v = std::max(v, b.total_estimate());
  }
  for (const auto& [type, v] : offered) out[type] = v;
  return out;
}

double system_utilization(std::span<const SiteBelief> sites) {
  double cap = 0.0;
  double used = 0.0;
  for (const auto& s : sites) {
    cap += s.capacity;
    if (s.report) used += s.capacity * s.report->utilization;
  }
  return cap > 0.0 ? used / cap : 0.0;
}

}  // namespace offload::ops
