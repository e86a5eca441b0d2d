#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "offload/auction/auction.hpp"

namespace offload::game {

struct TooLarge : std::length_error {
  using std::length_error::length_error;
};

struct StaticPlayer {
  /// Per service type.
  std::vector<double> q;
  std::vector<double> omega;
  std::vector<double> v;
  double c = 0.0;
  double budget = 0.0;
  std::vector<double> alpha_grid{0.0, 1.0};
  std::vector<double> price_grid{0.0};
};

/// One-shot game: every player picks a backoff level and a price per type;
/// each type is cleared as a second-price auction with `slots[k]` winners.
struct StaticGame {
  std::vector<StaticPlayer> players;
  double capacity = 1.0;
  double W = 0.0;
  /// Winners per type; low contention means at least one per player.
  std::vector<int> slots;
  /// alpha above this submits the bid.
  double threshold = 0.5;

  std::size_t types() const { return players.empty() ? 0 : players.front().q.size(); }
  void validate() const;
  /// Q_i: sum of backoff utilities over types.
  double Q(std::size_t i) const;
};

/// alpha[player][type], each 0 or 1.
using AlphaProfile = std::vector<std::vector<double>>;

/// phi = sum q - sum alpha q + W (1 - sum alpha omega / C).
double potential_value(const StaticGame& game, const AlphaProfile& alpha);

/// Player i's utility when every bid is accepted at price 0, evaluated with
/// the bidder's own utility functions (x = 1, p = 0, beta = sum alpha omega / C).
double low_contention_utility(const StaticGame& game, const AlphaProfile& alpha, std::size_t player);

struct IdentityCheck {
  double delta_u = 0.0;
  double delta_phi = 0.0;
  bool holds = false;
};

/// Compares player i's utility change with the potential change when i
/// switches to `new_alpha`.
IdentityCheck check_potential_identity(const StaticGame& game, const AlphaProfile& alpha, std::size_t player,
                                       const std::vector<double>& new_alpha, double tol = 1e-9);

struct PlayerAction {
  std::vector<double> alpha;
  std::vector<double> price;
  bool operator==(const PlayerAction&) const = default;
};
using Profile = std::vector<PlayerAction>;

/// Expected utility of player i: each type cleared by second-price rules,
/// boundary ties shared uniformly, beta = expected admitted load / C.
double expected_utility(const StaticGame& game, const Profile& profile, std::size_t player);

/// Every grid action of one player.
std::vector<PlayerAction> player_actions(const StaticGame& game, std::size_t player);

/// All pure profiles where no player gains (beyond `tol`) by a unilateral
/// move on its grid. Throws TooLarge above `max_profiles` joint profiles.
std::vector<Profile> enumerate_pure_ne(const StaticGame& game, double tol = 1e-12,
                                       std::uint64_t max_profiles = 1000000);

/// True when some unilateral grid deviation improves a player's utility.
bool has_profitable_deviation(const StaticGame& game, const Profile& profile, double tol = 1e-12);

struct WelfareParticipant {
  std::string bidder_id;
  std::string service_type;
  double valuation = 0.0;
  double lost_cost = 0.0;
  double backoff_utility = 0.0;
  bool submitted = true;
};

/// Sum of realised per-type utilities of all participants in a cleared round.
double welfare(const auction::AuctionOutcome& outcome, std::span<const WelfareParticipant> participants);

}  // namespace offload::game
