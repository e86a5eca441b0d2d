#include <cmath>

#include "doctest.h"
#include "offload/agent/actor_critic.hpp"
#include "offload/agent/agent.hpp"
#include "offload/agent/gaussian.hpp"
#include "offload/agent/state.hpp"
#include "offload/agent/supervised.hpp"
#include "offload/agent/utility.hpp"

using namespace offload::agent;
using offload::sim::RngStream;

TEST_CASE("valuation is linear and capped by the budget") {
  AgentConfig c;
  c.budget = 100;
  CHECK(valuation(3, c) == 3.0);
  c.budget = 10;
  CHECK(valuation(30, c) == 10.0);
  AgentConfig high, low;
  high.budget = 100;
  low.budget = 30;
  CHECK(valuation(33, high) >= valuation(33, low));
}

TEST_CASE("per-type utility") {
  CHECK(utility_per_type(1, 10, 4, 1, 0.1, true) == 6.0);
  CHECK(utility_per_type(0, 10, 3, 1, 0.1, true) == -1.0);
  CHECK(utility_per_type(0, 10, 3, 1, 0.5, false) == 0.5);
  CHECK(utility_per_type(1, 10, 0, 1, 0.1, true) == 0.0);
}

TEST_CASE("total utility adds the utilization term") {
  const double two[] = {2.0};
  CHECK(utility_total(two, 0.25, 1.0) == 2.75);
  CHECK(utility_total(two, 0.25, 0.0) == 2.0);
  CHECK(utility_total(two, 1.0, 1.0) == 2.0);
}

TEST_CASE("mixing probability") {
  CHECK(fsp_eta(1) == 1.0);
  CHECK(fsp_eta(4) == 0.25);
  CHECK(fsp_eta(100000) < 1e-4);
  CHECK(fsp_eta(1000, 0.01, 100) == 0.01);
  CHECK(fsp_eta(50, 0.01, 100) == 0.02);
}

TEST_CASE("raw outputs map to a valid factor") {
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(gaussian_output_size(2));
  raw[3] = -2.5;  // strictly lower entry
  const auto g = gaussian_from_raw(raw, 2);
  CHECK(g.L(0, 0) == doctest::Approx(std::log(2.0)));
  CHECK(g.L(1, 1) == doctest::Approx(std::log(2.0)));
  CHECK(g.L(1, 0) == -2.5);
  CHECK(g.L(0, 1) == 0.0);

  RngStream rng(3, "factor");
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd r(gaussian_output_size(3));
    for (auto& x : r) x = rng.uniform(-5, 5);
    Eigen::LLT<Eigen::MatrixXd> llt(gaussian_from_raw(r, 3).covariance());
    CHECK(llt.info() == Eigen::Success);
  }
}

TEST_CASE("sampling with zero noise returns the mean") {
  GaussianPolicy g{Eigen::Vector2d(0.3, -1.0), Eigen::Matrix2d::Identity()};
  CHECK(sample_gaussian(g, Eigen::VectorXd::Zero(2)) == g.mu);
}

TEST_CASE("identity factor gives independent unit draws") {
  GaussianPolicy g{Eigen::Vector2d(1.0, -1.0), Eigen::Matrix2d::Identity()};
  RngStream rng(5, "unit");
  const int n = 100000;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d m2 = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = sample_gaussian(g, rng);
    mean += x;
    m2 += x * x.transpose();
  }
  mean /= n;
  const Eigen::Matrix2d cov = (m2 - n * mean * mean.transpose()) / (n - 1);
  CHECK((cov - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("scalar score matches the hand formula") {
  GaussianPolicy g{Eigen::VectorXd::Constant(1, 0.5), Eigen::MatrixXd::Constant(1, 1, 2.0)};
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 1.7);
  CHECK(score_mu(g, x)[0] == doctest::Approx((1.7 - 0.5) / 4.0));
  const double expected = -0.5 * std::log(2 * M_PI * 4.0) - (1.2 * 1.2) / 8.0;
  CHECK(log_density(g, x) == doctest::Approx(expected));
}

TEST_CASE("temporal difference") {
  CHECK(td_error(1.0, 1.0, 2.0, 2.0) == 0.0);
  CHECK(td_error(1.0, 0.0, 2.0, 2.0) == 1.0);
}

TEST_CASE("average reward settles on a constant reward") {
  ActorCriticConfig cfg;
  cfg.state_dim = 2;
  cfg.action_dim = 1;
  cfg.hidden = 4;
  cfg.hidden_layers = 1;
  cfg.actor_rate = 0.0;
  cfg.critic_rate = 0.0;
  RngStream init(1, "ac");
  ActorCritic ac(cfg, init);
  const Eigen::VectorXd s = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd a = Eigen::VectorXd::Zero(1);
  for (int n = 1; n <= 500; ++n) {
    ac.update(s, a, 3.0, s);
    CHECK(std::abs(ac.avg_reward() - 3.0) <= 3.0 * std::pow(0.99, n) + 1e-12);
  }
}

TEST_CASE("a zero temporal difference leaves the parameters alone") {
  ActorCriticConfig cfg;
  cfg.state_dim = 2;
  cfg.action_dim = 1;
  cfg.hidden = 4;
  cfg.hidden_layers = 1;
  RngStream init(1, "ac");
  ActorCritic ac(cfg, init);
  ac.critic().params().setZero();
  const Eigen::VectorXd s = Eigen::VectorXd::Ones(2);
  const Eigen::VectorXd before = ac.actor().params();
  CHECK(ac.value(s) == 0.0);
  ac.update(s, Eigen::VectorXd::Zero(1), 0.0, s);
  CHECK(ac.actor().params() == before);
}

TEST_CASE("behaviour model fits a constant and two clusters") {
  SlConfig cfg;
  cfg.state_dim = 2;
  cfg.action_dim = 1;
  cfg.hidden = 8;
  cfg.learning_rate = 1e-2;
  cfg.batch_size = 16;
  RngStream init(2, "sl");
  RngStream rng(3, "sl/train");
  BehaviorModel constant(cfg, init);
  SlMemory same;
  for (int i = 0; i < 64; ++i) same.add({Eigen::Vector2d(0.2, 0.4), Eigen::VectorXd::Constant(1, 0.7)});
  constant.train(same, 300, rng);
  CHECK(std::abs(constant.predict(Eigen::Vector2d(0.2, 0.4))[0] - 0.7) <= 1e-3);

  BehaviorModel two(cfg, init);
  SlMemory clusters;
  // Cluster means by direct averaging; noise is symmetric around them.
  double sum_a = 0.0, sum_b = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double na = rng.uniform(-0.1, 0.1);
    const double nb = rng.uniform(-0.1, 0.1);
    clusters.add({Eigen::Vector2d(0.0, 1.0), Eigen::VectorXd::Constant(1, 0.2 + na)});
    clusters.add({Eigen::Vector2d(1.0, 0.0), Eigen::VectorXd::Constant(1, 0.8 + nb)});
    sum_a += 0.2 + na;
    sum_b += 0.8 + nb;
  }
  const auto losses = two.train(clusters, 100, rng);
  CHECK(std::abs(two.predict(Eigen::Vector2d(0.0, 1.0))[0] - sum_a / 200) <= 0.05);
  CHECK(std::abs(two.predict(Eigen::Vector2d(1.0, 0.0))[0] - sum_b / 200) <= 0.05);
  CHECK(losses.back() <= losses.front());

  BehaviorModel empty(cfg, init);
  CHECK_THROWS_AS(empty.train_step(SlMemory{}, rng), InsufficientData);
}

TEST_CASE("observation window pads and shifts") {
  RlWindow w(8, 3);
  w.push(Eigen::Vector3d(1, 2, 3));
  const Eigen::VectorXd flat = w.flatten();
  REQUIRE(flat.size() == 24);
  CHECK(flat.head(21).isZero());
  CHECK(flat.tail(3) == Eigen::Vector3d(1, 2, 3));
  for (int i = 0; i < 8; ++i) w.push(Eigen::Vector3d::Constant(10 + i));
  CHECK(w.step(0)[0] == 10.0);
  w.push(Eigen::Vector3d::Constant(99));
  CHECK(w.step(0)[0] == 11.0);
  CHECK(w.step(7)[0] == 99.0);
}

TEST_CASE("unrequested types encode an absent previous price") {
  StepInput in;
  in.types = {TypeObservation{1, 3, 50, 0, 0}, TypeObservation{}};
  in.prev_price = {2.0, std::nullopt};
  FeatureScales s;
  s.price_scale = 4.0;
  const Eigen::VectorXd v = encode_rl_step(in, s);
  REQUIRE(v.size() == rl_step_size(2));
  // Per type: awaiting, omega, slack, attempts, outstanding, price, flag.
  CHECK(v[5] == 0.5);
  CHECK(v[6] == 1.0);
  CHECK(v[7 + 5] == 0.0);
  CHECK(v[7 + 6] == 0.0);
}

TEST_CASE("prices never exceed the budget") {
  RngStream rng(6, "squash");
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd raw(4);
    for (auto& x : raw) x = rng.uniform(-10, 10);
    const auto a = squash_action(raw, 30.0);
    for (double p : a.price) {
      CHECK(p >= 0.0);
      CHECK(p <= 30.0);
    }
    for (double b : a.backoff) {
      CHECK(b >= 0.0);
      CHECK(b <= 1.0);
    }
  }
}

TEST_CASE("passive agents bid their valuation") {
  AgentConfig c;
  c.bidder_id = "vehicle/0";
  c.active = false;
  c.budget = 30;
  FeatureScales fs;
  Agent agent(c, LearningConfig{}, {3.0, 33.0}, fs, 1, "vehicle/0");
  StepInput in;
  in.types = {TypeObservation{1, 3, 50, 0, 0}, TypeObservation{1, 33, 300, 0, 0}};
  in.prev_price = {std::nullopt, std::nullopt};
  for (int i = 0; i < 5; ++i) {
    const auto d = agent.decide(in, 0.0, true);
    CHECK(d.action.price == std::vector<double>{3.0, 30.0});
    for (double b : d.action.backoff) CHECK(b > c.backoff_threshold);
  }
}

TEST_CASE("the first decision of an active agent is a best response") {
  AgentConfig c;
  c.bidder_id = "vehicle/0";
  FeatureScales fs;
  LearningConfig lc;
  lc.window = 2;
  lc.hidden = 4;
  Agent agent(c, lc, {3.0}, fs, 1, "vehicle/0");
  StepInput in;
  in.types = {TypeObservation{1, 3, 50, 0, 0}};
  in.prev_price = {std::nullopt};
  const auto d = agent.decide(in, 0.0, false);
  CHECK(d.eta == 1.0);
  CHECK(d.best_response);
}

namespace {

// One agent, one type, a fixed clearing price. Returns mean utility over the
// first and last tenth of the run.
std::pair<double, double> bandit_run(std::uint64_t seed, int steps) {
  AgentConfig c;
  c.bidder_id = "vehicle/0";
  c.budget = 30;
  LearningConfig lc;
  lc.window = 2;
  lc.hidden = 16;
  lc.actor_rate = 1e-3;
  FeatureScales fs;
  fs.price_scale = 30;
  Agent agent(c, lc, {3.0}, fs, seed, "vehicle/0");
  const double clearing = 5.0;  // above the valuation of 3: bidding never pays
  StepInput in;
  in.types = {TypeObservation{1, 3, 50, 0, 0}};
  in.prev_price = {clearing};
  double reward = 0.0;
  double first = 0.0, last = 0.0;
  const int tenth = steps / 10;
  for (int t = 0; t < steps; ++t) {
    const auto d = agent.decide(in, reward, true);
    const bool submit = d.action.backoff[0] > c.backoff_threshold;
    const double v = agent.valuations()[0];
    const double p = d.action.price[0];
    const int x = submit && p >= clearing ? 1 : 0;
    reward = utility_per_type(x, v, clearing, c.lost_bid_cost, c.backoff_cost, submit);
    if (t < tenth) first += reward;
    if (t >= steps - tenth) last += reward;
  }
  return {first / tenth, last / tenth};
}

}  // namespace

TEST_CASE("learning improves utility in a stationary bandit") {
  int improved = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto [first, last] = bandit_run(seed, 100000);
    MESSAGE("seed " << seed << ": first " << first << ", last " << last);
    improved += last > first ? 1 : 0;
  }
  CHECK(improved >= 4);
}

TEST_CASE("a collapsed diagonal keeps the score finite") {
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(gaussian_output_size(2));
  raw[2] = -800.0;
  raw[4] = -40.0;
  const Eigen::VectorXd score = score_raw(raw, 2, Eigen::Vector2d(0.3, -0.2));
  CHECK(score.allFinite());
  CHECK(score[2] == 0.0);
  CHECK(gaussian_from_raw(raw, 2).L(0, 0) == doctest::Approx(softplus(-5.0)));
}
