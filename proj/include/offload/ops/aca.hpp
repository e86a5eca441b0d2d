#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "offload/auction/auction.hpp"
#include "offload/ops/site.hpp"

namespace offload::ops {

struct NoFeasibleSite : std::runtime_error {
  NoFeasibleSite() : std::runtime_error("no site can host the request") {}
};

/// What the admission controller believes about one site.
struct SiteBelief {
  std::string site_id;
  double capacity = 0.0;
  /// Latest report that has arrived; absent until the first one does.
  std::optional<UtilizationReport> report;
  /// Admitted requests the latest report cannot have seen yet.
  struct Commitment {
    std::uint64_t request_id = 0;
    double units = 0.0;
    /// When the request reached the site; unset while in transit.
    std::optional<std::int64_t> arrived_at;
  };
  std::vector<Commitment> commitments;
  double price = 0.0;
  /// Time units of site throughput the controller may hand out ahead:
  /// the site is believed able to absorb capacity * horizon * (1 - util)
  /// units beyond its queue and outstanding commitments.
  double horizon = 1.0;

  double committed_units() const;
  double believed_utilization() const;
  double believed_free() const;
};

SiteBelief make_belief(const SiteState& site, double horizon = 1.0);

/// Keeps the newest report (by measurement time) and forgets commitments
/// that reached the site before it was measured.
void absorb_report(SiteBelief& belief, const UtilizationReport& rep);

/// Records that a committed request reached the site.
void note_arrival(SiteBelief& belief, std::uint64_t request_id, std::int64_t at);

/// n_k = floor(sum of believed free units / estimate_k) for each type.
std::map<std::string, int> compute_slots(std::span<const SiteBelief> sites,
                                         const std::map<std::string, double>& estimates);

/// Price rule for the load balancer: utilization^gamma.
double rial_price(double utilization, double gamma);
void rial_update_prices(std::span<SiteBelief> sites, double gamma);

/// Index of the cheapest site whose believed free capacity covers the
/// estimate; ties go to the lowest site_id. Throws NoFeasibleSite.
std::size_t rial_assign(double estimate, std::span<const SiteBelief> sites);

enum class AdmissionReason { Won, NoSlot, Rejected };
std::string to_string(AdmissionReason r);

struct AdmissionDecision {
  std::size_t bid_index = 0;
  std::uint64_t request_id = 0;
  bool admitted = false;
  std::optional<std::string> assigned_site;
  AdmissionReason reason = AdmissionReason::NoSlot;
};

/// Turns an auction outcome into admission decisions. Winners are placed in
/// price order (across types) on the cheapest feasible site, each one
/// committing its estimate against that site's belief and updating prices;
/// a winner that fits nowhere is Rejected. Losers get NoSlot.
std::vector<AdmissionDecision> admit(std::span<const auction::Bid> bids, const auction::AuctionOutcome& outcome,
                                     std::vector<SiteBelief>& sites,
                                     const std::map<std::string, double>& estimates, double gamma_price);

/// Per-type demand estimate: the mean of the sites' learned estimates, or
/// the largest bidder-provided estimate for a type no site has seen yet.
std::map<std::string, double> demand_estimates(std::span<const SiteState> sites,
                                               std::span<const auction::Bid> bids);

/// Capacity-weighted mean of the latest arrived utilizations; sites without
/// a report count as idle.
double system_utilization(std::span<const SiteBelief> sites);

}  // namespace offload::ops
