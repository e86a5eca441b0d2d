#include <algorithm>

#include "doctest.h"
#include "offload/auction/auction.hpp"

using namespace offload::auction;
using offload::sim::RngStream;

namespace {

std::vector<Bid> bids_for(const std::string& type, std::initializer_list<std::pair<const char*, double>> prices) {
  std::vector<Bid> out;
  for (const auto& [who, p] : prices) {
    Bid b;
    b.bidder_id = who;
    b.service_type = type;
    b.price = p;
    b.request_id = out.size();
    out.push_back(b);
  }
  return out;
}

}  // namespace

TEST_CASE("single slot pays the second price") {
  RngStream rng(1, "a");
  const auto bids = bids_for("k", {{"A", 5}, {"B", 3}, {"C", 2}});
  const auto out = clear_auction(bids, {{"k", 1}}, rng);
  CHECK(out.winners.at("k") == std::vector<std::string>{"A"});
  CHECK(out.payment_vector.at("k") == 3.0);
}

TEST_CASE("two slots pay the third price") {
  RngStream rng(1, "a");
  const auto out = clear_auction(bids_for("k", {{"A", 5}, {"B", 3}, {"C", 2}}), {{"k", 2}}, rng);
  CHECK(out.winners.at("k") == std::vector<std::string>{"A", "B"});
  CHECK(out.payment_vector.at("k") == 2.0);
}

TEST_CASE("spare slots mean a zero price") {
  RngStream rng(1, "a");
  const auto out = clear_auction(bids_for("k", {{"A", 5}, {"B", 3}}), {{"k", 3}}, rng);
  CHECK(out.winners.at("k").size() == 2);
  CHECK(out.payment_vector.at("k") == 0.0);
}

TEST_CASE("equal prices split wins evenly") {
  RngStream rng(9, "ties");
  int a_wins = 0;
  const int n = 10000;
  const auto bids = bids_for("k", {{"A", 4}, {"B", 4}});
  for (int i = 0; i < n; ++i) {
    const auto out = clear_auction(bids, {{"k", 1}}, rng);
    a_wins += out.winners.at("k").front() == "A" ? 1 : 0;
    CHECK(out.payment_vector.at("k") == 4.0);
  }
  CHECK(std::abs(a_wins / double(n) - 0.5) <= 0.03);
}

TEST_CASE("duplicate bids are refused") {
  RngStream rng(1, "a");
  CHECK_THROWS_AS(clear_auction(bids_for("k", {{"A", 5}, {"A", 3}}), {{"k", 1}}, rng), DuplicateBid);
}

TEST_CASE("raising a price never turns a winner into a loser") {
  RngStream rng(2, "mono");
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Bid> bids = bids_for("k", {{"A", 0}, {"B", 0}, {"C", 0}, {"D", 0}});
    for (auto& b : bids) b.price = static_cast<double>(rng.index(5));
    bids[1].submitted_at = 1;
    bids[3].submitted_at = 1;
    const int slots = static_cast<int>(rng.index(4));
    const auto before = clear_auction(bids, {{"k", slots}}, rng);
    for (std::size_t i = 0; i < bids.size(); ++i) {
      if (!before.is_winner("k", bids[i].bidder_id)) continue;
      // Unique prices and times above the old ones keep the winner strictly
      // ahead of everyone it beat.
      auto raised = bids;
      raised[i].price += 1.0 + rng.uniform();
      const auto after = clear_auction(raised, {{"k", slots}}, rng);
      CHECK(after.is_winner("k", bids[i].bidder_id));
    }
  }
}

TEST_CASE("clearing price helper") {
  CHECK(clearing_price({5, 3, 2}, 1) == 3.0);
  CHECK(clearing_price({5, 3}, 2) == 0.0);
  CHECK(clearing_price({}, 0) == 0.0);
  CHECK(clearing_price({1, 7}, 0) == 7.0);
}

TEST_CASE("win probabilities share the boundary") {
  const double prices[] = {5, 4, 4, 1};
  const auto p = win_probabilities(prices, 2);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(p[2] == doctest::Approx(0.5));
  CHECK(p[3] == 0.0);
}

TEST_CASE("feedback exposes only own outcomes and the price") {
  RngStream rng(1, "a");
  auto bids = bids_for("k", {{"A", 5}, {"B", 3}});
  auto other = bids_for("j", {{"B", 1}});
  other[0].request_id = 2;
  bids.push_back(other[0]);
  const std::string roster[] = {"A", "B", "C"};
  const auto out = clear_auction(bids, {{"k", 1}, {"j", 1}}, rng, 0, roster);
  const auto a = feedback_for(out, bids, "A", 0.4);
  REQUIRE(a.per_type.size() == 1);
  CHECK(a.per_type.at("k").x == 1);
  CHECK(a.per_type.at("k").price == 3.0);
  CHECK(a.utilization == 0.4);
  const auto b = feedback_for(out, bids, "B", 0.4);
  CHECK(b.per_type.at("k").x == 0);
  CHECK(b.per_type.at("k").price == 3.0);
  CHECK(b.per_type.at("j").x == 1);
  const auto c = feedback_for(out, bids, "C", 0.4);
  CHECK(c.per_type.empty());
  CHECK_THROWS_AS(feedback_for(out, bids, "Z", 0.4), UnknownBidder);
}
