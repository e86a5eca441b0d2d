#include "offload/game/static_game.hpp"

#include <cmath>

#include "offload/agent/utility.hpp"

namespace offload::game {

void StaticGame::validate() const {
  if (!(capacity > 0.0)) throw std::invalid_argument("capacity must be positive");
  const std::size_t k = types();
  if (slots.size() != k) throw std::invalid_argument("slots must list every type");
  for (const auto& p : players) {
    if (p.q.size() != k || p.omega.size() != k || p.v.size() != k)
      throw std::invalid_argument("player vectors must cover every type");
    if (p.alpha_grid.empty() || p.price_grid.empty()) throw std::invalid_argument("action grids must not be empty");
    for (double v : p.v)
      if (v > p.budget) throw std::invalid_argument("valuation above budget");
  }
}

double StaticGame::Q(std::size_t i) const {
  double s = 0.0;
  for (double q : players.at(i).q) s += q;
  return s;
}

double potential_value(const StaticGame& game, const AlphaProfile& alpha) {
  double sum_q = 0.0;
  double sum_aq = 0.0;
  double load = 0.0;
  for (std::size_t j = 0; j < game.players.size(); ++j) {
    const auto& p = game.players[j];
    for (std::size_t k = 0; k < p.q.size(); ++k) {
      sum_q += p.q[k];
      sum_aq += alpha[j][k] * p.q[k];
      load += alpha[j][k] * p.omega[k];
    }
  }
  return sum_q - sum_aq + game.W * (1.0 - load / game.capacity);
}

double low_contention_utility(const StaticGame& game, const AlphaProfile& alpha, std::size_t player) {
  double load = 0.0;
  for (std::size_t j = 0; j < game.players.size(); ++j)
    for (std::size_t k = 0; k < game.types(); ++k) load += alpha[j][k] * game.players[j].omega[k];
  const auto& p = game.players.at(player);
  std::vector<double> per_type;
  for (std::size_t k = 0; k < game.types(); ++k) {
    bool submitted = alpha[player][k] > game.threshold;
    per_type.push_back(agent::utility_per_type(1, p.v[k], 0.0, p.c, p.q[k], submitted));
  }
  return agent::utility_total(per_type, load / game.capacity, game.W);
}

IdentityCheck check_potential_identity(const StaticGame& game, const AlphaProfile& alpha, std::size_t player,
                                       const std::vector<double>& new_alpha, double tol) {
  AlphaProfile moved = alpha;
  moved.at(player) = new_alpha;
  IdentityCheck r;
  r.delta_u = low_contention_utility(game, alpha, player) - low_contention_utility(game, moved, player);
  r.delta_phi = potential_value(game, alpha) - potential_value(game, moved);
  r.holds = std::abs(r.delta_u - r.delta_phi) <= tol;
  return r;
}

double expected_utility(const StaticGame& game, const Profile& profile, std::size_t player) {
  const std::size_t types = game.types();
  double total = 0.0;
  double admitted_load = 0.0;
  for (std::size_t k = 0; k < types; ++k) {
    std::vector<std::size_t> who;
    std::vector<double> prices;
    for (std::size_t j = 0; j < profile.size(); ++j) {
      if (profile[j].alpha[k] > game.threshold) {
        who.push_back(j);
        prices.push_back(profile[j].price[k]);
      }
    }
    auto win = auction::win_probabilities(prices, game.slots[k]);
    double pay = auction::clearing_price(prices, game.slots[k]);
    const auto& me = game.players[player];
    bool submitted = false;
    for (std::size_t n = 0; n < who.size(); ++n) {
      admitted_load += win[n] * game.players[who[n]].omega[k];
      if (who[n] == player) {
        submitted = true;
        // Expectation over the tie draw of the per-type utility.
        double u_win = agent::utility_per_type(1, me.v[k], pay, me.c, me.q[k], true);
        double u_lose = agent::utility_per_type(0, me.v[k], pay, me.c, me.q[k], true);
        total += win[n] * u_win + (1.0 - win[n]) * u_lose;
      }
    }
    if (!submitted) total += me.q[k];
  }
  return total + game.W * (1.0 - admitted_load / game.capacity);
}

std::vector<PlayerAction> player_actions(const StaticGame& game, std::size_t player) {
  const auto& p = game.players.at(player);
  const std::size_t types = game.types();
  const std::size_t per_type = p.alpha_grid.size() * p.price_grid.size();
  std::size_t count = 1;
  for (std::size_t k = 0; k < types; ++k) count *= per_type;
  std::vector<PlayerAction> out;
  out.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    PlayerAction a;
    std::size_t rest = idx;
    for (std::size_t k = 0; k < types; ++k) {
      std::size_t c = rest % per_type;
      rest /= per_type;
      a.alpha.push_back(p.alpha_grid[c / p.price_grid.size()]);
      a.price.push_back(p.price_grid[c % p.price_grid.size()]);
    }
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

bool deviates(const StaticGame& game, Profile& profile, const std::vector<std::vector<PlayerAction>>& actions,
              double tol) {
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double base = expected_utility(game, profile, i);
    PlayerAction keep = profile[i];
    for (const auto& a : actions[i]) {
      profile[i] = a;
      if (expected_utility(game, profile, i) > base + tol) {
        profile[i] = keep;
        return true;
      }
    }
    profile[i] = keep;
  }
  return false;
}

}  // namespace

bool has_profitable_deviation(const StaticGame& game, const Profile& profile, double tol) {
  std::vector<std::vector<PlayerAction>> actions;
  for (std::size_t i = 0; i < game.players.size(); ++i) actions.push_back(player_actions(game, i));
  Profile p = profile;
  return deviates(game, p, actions, tol);
}

std::vector<Profile> enumerate_pure_ne(const StaticGame& game, double tol, std::uint64_t max_profiles) {
  game.validate();
  std::vector<std::vector<PlayerAction>> actions;
  double joint = 1.0;
  for (std::size_t i = 0; i < game.players.size(); ++i) {
    actions.push_back(player_actions(game, i));
    joint *= static_cast<double>(actions.back().size());
  }
  if (joint > static_cast<double>(max_profiles)) throw TooLarge("joint action space too large to enumerate");
  std::vector<Profile> out;
  if (game.players.empty()) return out;
  std::vector<std::size_t> idx(game.players.size(), 0);
  Profile profile(game.players.size());
  for (;;) {
    for (std::size_t i = 0; i < idx.size(); ++i) profile[i] = actions[i][idx[i]];
    if (!deviates(game, profile, actions, tol)) out.push_back(profile);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == actions[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

double welfare(const auction::AuctionOutcome& outcome, std::span<const WelfareParticipant> participants) {
  double w = 0.0;
  for (const auto& p : participants) {
    if (!p.submitted) {
      w += p.backoff_utility;
      continue;
    }
    auto it = outcome.payment_vector.find(p.service_type);
    double pay = it == outcome.payment_vector.end() ? 0.0 : it->second;
    int x = outcome.is_winner(p.service_type, p.bidder_id) ? 1 : 0;
    w += agent::utility_per_type(x, p.valuation, pay, p.lost_cost, p.backoff_utility, true);
  }
  return w;
}

}  // namespace offload::game
