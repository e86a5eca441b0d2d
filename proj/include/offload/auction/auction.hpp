#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "offload/sim/rng.hpp"

namespace offload::auction {

class DuplicateBid : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class UnknownBidder : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// A sealed offer for one service slot.
struct Bid {
  std::string bidder_id;
  std::string service_type;
  double price = 0.0;
  /// Estimated need per resource type, in time-resource units.
  std::vector<double> resource_estimate;
  std::int64_t deadline_ms = 0;
  int rebid_count = 0;
  /// Arrival at the auctioneer; equal prices are ordered by this first.
  std::int64_t submitted_at = 0;
  /// Caller's handle for the request behind the bid.
  std::uint64_t request_id = 0;

  double total_estimate() const;
};

/// Result of one simultaneous round: every service type is cleared as an
/// independent second-price auction.
struct AuctionOutcome {
  std::int64_t round_time = 0;
  /// Winners per type, best rank first.
  std::map<std::string, std::vector<std::string>> winners;
  /// Price every winner of the type pays: the (n_k+1)-th highest bid, or 0
  /// with n_k or fewer bids.
  std::map<std::string, double> payment_vector;
  std::map<std::string, int> slots_offered;
  /// Indices into the submitted bids per type, best rank first.
  std::map<std::string, std::vector<std::size_t>> ranking;
  /// Every bidder registered for the round, including those that did not bid.
  std::set<std::string> roster;

  bool is_winner(const std::string& type, const std::string& bidder) const;
};

/// Clears every type present in `bids`. Types missing from `slots` get zero
/// slots. Bids are ranked by price (descending), then submission time
/// (ascending); remaining ties are ordered uniformly at random from `rng`.
AuctionOutcome clear_auction(std::span<const Bid> bids, const std::map<std::string, int>& slots,
                             sim::RngStream& rng, std::int64_t round_time = 0,
                             std::span<const std::string> roster = {});

/// (n+1)-th highest of `prices`, or 0 when there are at most n of them.
double clearing_price(std::vector<double> prices, int slots);

/// Probability that each bid wins under uniform tie-breaking at the boundary.
std::vector<double> win_probabilities(std::span<const double> prices, int slots);

struct TypeFeedback {
  int x = 0;            // 1 if the bid won a slot
  double price = 0.0;   // payment_vector entry for the type
};

/// What one bidder learns from a round: its own outcome per bid type, the
/// payment for those types, and the system utilization. Nothing else about
/// other bidders crosses this boundary.
struct FeedbackSignal {
  std::map<std::string, TypeFeedback> per_type;
  double utilization = 0.0;
};

FeedbackSignal feedback_for(const AuctionOutcome& outcome, std::span<const Bid> bids,
                            const std::string& bidder_id, double utilization_report);

}  // namespace offload::auction
