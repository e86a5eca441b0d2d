#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "offload/game/best_response.hpp"
#include "offload/game/pareto.hpp"
#include "offload/game/static_game.hpp"

using namespace offload::game;

namespace {

// Two players, one type: q = 1, omega = 2, W = 1, C = 10.
StaticGame small_game() {
  StaticGame g;
  for (int i = 0; i < 2; ++i) {
    StaticPlayer p;
    p.q = {1.0};
    p.omega = {2.0};
    p.v = {2.0};
    p.c = 1.0;
    p.budget = 10.0;
    g.players.push_back(p);
  }
  g.capacity = 10.0;
  g.W = 1.0;
  g.slots = {2};
  return g;
}

}  // namespace

TEST_CASE("potential values") {
  const auto g = small_game();
  CHECK(potential_value(g, {{0.0}, {0.0}}) == doctest::Approx(2.0 + 1.0));
  CHECK(potential_value(g, {{1.0}, {1.0}}) == doctest::Approx(2 - 2 + 1 - 0.4));
  CHECK(potential_value(g, {{0.0}, {1.0}}) == doctest::Approx(2 - 1 + 1 - 0.2));
}

TEST_CASE("potential identity on the small game") {
  const auto g = small_game();
  const auto c = check_potential_identity(g, {{1.0}, {1.0}}, 0, {0.0});
  CHECK(c.delta_u == doctest::Approx(0.6 - 1.8));
  CHECK(c.delta_phi == doctest::Approx(0.6 - 1.8));
  CHECK(c.holds);
  const auto same = check_potential_identity(g, {{1.0}, {0.0}}, 1, {0.0});
  CHECK(same.delta_u == 0.0);
  CHECK(same.holds);
}

TEST_CASE("the potential maximiser is an equilibrium") {
  auto g = small_game();
  for (auto& p : g.players) p.price_grid = {0.0, 1.0, 2.0};
  const auto ne = enumerate_pure_ne(g);
  REQUIRE(!ne.empty());
  AlphaProfile best;
  double best_phi = -1e300;
  for (double a : {0.0, 1.0})
    for (double b : {0.0, 1.0}) {
      const double phi = potential_value(g, {{a}, {b}});
      if (phi > best_phi) {
        best_phi = phi;
        best = {{a}, {b}};
      }
    }
  bool found = false;
  for (const auto& prof : ne) found = found || (prof[0].alpha == best[0] && prof[1].alpha == best[1]);
  CHECK(found);
  // Symmetric game: the set is closed under swapping the players.
  for (const auto& prof : ne) {
    const Profile swapped{prof[1], prof[0]};
    CHECK(std::find(ne.begin(), ne.end(), swapped) != ne.end());
  }
}

TEST_CASE("equilibria survive a direct re-check and nothing else does") {
  auto g = small_game();
  g.slots = {1};
  g.players[1].v = {3.0};
  for (auto& p : g.players) p.price_grid = {0.0, 1.5, 3.0};
  const auto ne = enumerate_pure_ne(g);
  for (const auto& prof : ne) CHECK(!has_profitable_deviation(g, prof));
  const auto a0 = player_actions(g, 0);
  const auto a1 = player_actions(g, 1);
  std::size_t stable = 0;
  for (const auto& x : a0)
    for (const auto& y : a1) stable += has_profitable_deviation(g, {x, y}) ? 0 : 1;
  CHECK(stable == ne.size());
}

TEST_CASE("single player equilibrium is its own best action") {
  StaticGame g = small_game();
  g.players.resize(1);
  g.slots = {1};
  g.players[0].price_grid = {0.0, 1.0};
  const auto ne = enumerate_pure_ne(g);
  const auto acts = player_actions(g, 0);
  double best = -1e300;
  for (const auto& a : acts) best = std::max(best, expected_utility(g, {a}, 0));
  REQUIRE(!ne.empty());
  for (const auto& p : ne) CHECK(expected_utility(g, p, 0) == doctest::Approx(best));
}

TEST_CASE("too many profiles are refused") {
  StaticGame g = small_game();
  for (auto& p : g.players) p.price_grid = offload::game::linspace(0, 2, 2000);
  CHECK_THROWS_AS(enumerate_pure_ne(g, 1e-12, 1000), TooLarge);
}

TEST_CASE("best response with a loss cost bids at least the valuation and is monotone") {
  LinearOpponent opp{0.0, 2.0, 0.0, 2.0};
  BestResponseParams params;
  params.c = 0.5;
  const auto vgrid = linspace(0.0, 2.0, 50);
  const auto pgrid = linspace(0.0, 2.0, 100);
  const auto curve = best_response_curve(opp, params, vgrid, pgrid);
  const double step = pgrid[1] - pgrid[0];
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].bid > opp.a1 + step && curve[i].bid < opp.b1 - step) CHECK(curve[i].bid >= curve[i].v2 - step);
    if (i > 0) CHECK(curve[i].bid >= curve[i - 1].bid);
  }
}

TEST_CASE("expected utility against a uniform opponent") {
  // Opponent bids v1 ~ U[0,1]; bidding b wins with probability b and pays
  // the opponent's bid, mean b/2 given a win.
  LinearOpponent opp{0.0, 1.0, 0.0, 1.0};
  BestResponseParams params;
  params.c = 0.3;
  const double v = 0.8, b = 0.6;
  const double expected = b * v - b * b / 2 - (1 - b) * params.c;
  CHECK(expected_bid_utility(opp, params, v, b) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("symmetric fairness rule allocates to the larger resource") {
  const auto rule = rule_for_threshold(1.0, 1.0, 1.0, 0.0, 1.0, 0.0);
  std::vector<ResourceSample> samples{{3, 1}, {1, 3}, {2, 5}, {6, 4}};
  const auto alloc = apply_rule(rule, samples);
  for (std::size_t i = 0; i < samples.size(); ++i) CHECK(alloc[i] == (samples[i].omega1 >= samples[i].omega2 ? 1 : 2));
  const auto rep = pareto_fairness_check(rule_for_threshold(1.0, fairness_ratio(samples, alloc), 1, 0, 1, 0), samples);
  CHECK(rep.pass);
  CHECK(rep.rule_welfare == doctest::Approx(rep.best_welfare));
}

TEST_CASE("single sample fairness") {
  std::vector<ResourceSample> one{{2, 1}};
  const auto rule = rule_for_threshold(1.0, 1.0, 1, 0, 1, 0);
  CHECK(apply_rule(rule, one) == std::vector<int>{1});
  CHECK_THROWS_AS(pareto_fairness_check(rule, one), InfeasibleFairness);
}

TEST_CASE("welfare of a cleared round") {
  offload::sim::RngStream rng(1, "w");
  std::vector<offload::auction::Bid> bids(2);
  bids[0].bidder_id = "A";
  bids[0].service_type = "k";
  bids[0].price = 10;
  bids[1].bidder_id = "B";
  bids[1].service_type = "k";
  bids[1].price = 3;
  bids[1].request_id = 1;
  const auto out = offload::auction::clear_auction(bids, {{"k", 1}}, rng);
  const WelfareParticipant parts[] = {{"A", "k", 10, 1, 0.1, true}, {"B", "k", 3, 1, 0.1, true}};
  CHECK(welfare(out, parts) == doctest::Approx(7 - 1));
  const WelfareParticipant off[] = {{"A", "k", 10, 1, 0.1, false}, {"B", "k", 3, 1, 0.2, false}};
  CHECK(welfare(offload::auction::AuctionOutcome{}, off) == doctest::Approx(0.3));
  CHECK(welfare(offload::auction::AuctionOutcome{}, std::span<const WelfareParticipant>{}) == 0.0);
}
