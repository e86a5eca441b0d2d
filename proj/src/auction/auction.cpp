#include "offload/auction/auction.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace offload::auction {

double Bid::total_estimate() const {
  return std::accumulate(resource_estimate.begin(), resource_estimate.end(), 0.0);
}

bool AuctionOutcome::is_winner(const std::string& type, const std::string& bidder) const {
  auto it = winners.find(type);
  if (it == winners.end()) return false;
  return std::find(it->second.begin(), it->second.end(), bidder) != it->second.end();
}

double clearing_price(std::vector<double> prices, int slots) {
  if (slots < 0) throw std::invalid_argument("negative slot count");
  const auto n = static_cast<std::size_t>(slots);
  if (prices.size() <= n) return 0.0;
  std::nth_element(prices.begin(), prices.begin() + static_cast<std::ptrdiff_t>(n), prices.end(),
                   std::greater<>());
  return prices[n];
}

std::vector<double> win_probabilities(std::span<const double> prices, int slots) {
  if (slots < 0) throw std::invalid_argument("negative slot count");
  std::vector<double> p(prices.size(), 0.0);
  const auto n = static_cast<std::size_t>(slots);
  if (prices.size() <= n) {
    std::fill(p.begin(), p.end(), 1.0);
    return p;
  }
  if (n == 0) return p;
  std::vector<double> sorted(prices.begin(), prices.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double boundary = sorted[n - 1];
  std::size_t above = 0, tied = 0;
  for (double x : prices) {
    if (x > boundary) ++above;
    else if (x == boundary) ++tied;
  }
  const double share = static_cast<double>(n - above) / static_cast<double>(tied);
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (prices[i] > boundary) p[i] = 1.0;
    else if (prices[i] == boundary) p[i] = share;
  }
  return p;
}

AuctionOutcome clear_auction(std::span<const Bid> bids, const std::map<std::string, int>& slots,
                             sim::RngStream& rng, std::int64_t round_time,
                             std::span<const std::string> roster) {
  AuctionOutcome out;
  out.round_time = round_time;
  out.roster.insert(roster.begin(), roster.end());

  std::map<std::string, std::vector<std::size_t>> by_type;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    const Bid& b = bids[i];
    if (!(b.price >= 0.0)) throw std::invalid_argument("bid price must be non-negative");
    if (!seen.emplace(b.bidder_id, b.service_type).second) {
      throw DuplicateBid("bidder " + b.bidder_id + " bid twice for " + b.service_type);
    }
    by_type[b.service_type].push_back(i);
    out.roster.insert(b.bidder_id);
  }

  for (auto& [type, idx] : by_type) {
    int n = 0;
    if (auto it = slots.find(type); it != slots.end()) n = it->second;
    if (n < 0) throw std::invalid_argument("negative slot count for " + type);

    // uniform permutation first, so the stable sort leaves exact ties in random order
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (bids[a].price != bids[b].price) return bids[a].price > bids[b].price;
      return bids[a].submitted_at < bids[b].submitted_at;
    });

    const auto n_win = std::min(idx.size(), static_cast<std::size_t>(n));
    auto& w = out.winners[type];
    for (std::size_t r = 0; r < n_win; ++r) w.push_back(bids[idx[r]].bidder_id);
    out.payment_vector[type] = idx.size() > n_win ? bids[idx[n_win]].price : 0.0;
    out.slots_offered[type] = n;
    out.ranking[type] = idx;
  }
  for (const auto& [type, n] : slots) {
    out.slots_offered.emplace(type, n);
  }
  return out;
}

FeedbackSignal feedback_for(const AuctionOutcome& outcome, std::span<const Bid> bids,
                            const std::string& bidder_id, double utilization_report) {
  if (!outcome.roster.contains(bidder_id)) throw UnknownBidder("bidder " + bidder_id + " is not in this round");
  FeedbackSignal fb;
  fb.utilization = utilization_report;
  for (const auto& [type, order] : outcome.ranking) {
    for (std::size_t i : order) {
      if (bids[i].bidder_id != bidder_id) continue;
      TypeFeedback t;
      t.x = outcome.is_winner(type, bidder_id) ? 1 : 0;
      t.price = outcome.payment_vector.at(type);
      fb.per_type.emplace(type, t);
    }
  }
  return fb;
}

}  // namespace offload::auction
