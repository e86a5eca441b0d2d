#include "offload/scenario/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <unordered_map>

#include "offload/auction/auction.hpp"
#include "offload/ops/aca.hpp"
#include "offload/ops/site.hpp"
#include "offload/sim/engine.hpp"
#include "offload/workload/latency.hpp"
#include "offload/workload/mmpp.hpp"
#include "offload/workload/mobility.hpp"

namespace offload::scenario {

namespace {

using sim::EventKind;
using sim::SimTime;

std::vector<std::string> trace_vehicle_ids(const std::vector<workload::MobilitySample>& samples) {
  std::vector<std::string> ids;
  for (const auto& s : samples) ids.push_back(s.vehicle_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

enum class ReqState { Awaiting, Backoff, Pending, Transit, AtSite, Done };

struct Request {
  std::uint64_t id = 0;
  std::uint32_t vehicle = 0;
  std::size_t type = 0;
  std::int64_t created = 0;
  std::int64_t deadline_at = 0;
  ReqState state = ReqState::Awaiting;
  int submissions = 0;
  int backoffs = 0;
  std::int64_t backoff_ms = 0;
  double price = 0.0;
  double price_sum = 0.0;
  std::int64_t submitted_at = 0;
  double up_bits = 0.0;
  double down_bits = 0.0;
  std::vector<double> work_scales;
  std::optional<std::size_t> site;
  std::int64_t down_delay = 0;
};

struct Vehicle {
  Vehicle(std::string l, agent::Agent* a, std::uint64_t seed)
      : label(std::move(l)), agent(a), arrivals(seed, label + "/arrivals"), requests(seed, label + "/requests") {}

  std::string label;
  agent::Agent* agent = nullptr;
  sim::RngStream arrivals;
  sim::RngStream requests;
  workload::MmppState mmpp;
  double clock_ms = 0.0;
  std::vector<std::int64_t> next_periodic;
  bool present = true;
  double distance_m = 0.0;
  std::vector<workload::MobilitySample> track;
  std::size_t track_pos = 0;
  /// Requests waiting for the next decision, in creation order.
  std::vector<std::uint64_t> awaiting;
  /// Submitted bids not yet taken into a round, FIFO.
  std::vector<std::uint64_t> queued;
  std::vector<std::uint64_t> live;
  double pending_reward = 0.0;
  std::vector<std::optional<double>> prev_price;
  double beta = 0.0;
  std::int64_t last_decision = -1;
  bool feedback_scheduled = false;
};

class World {
public:
  World(const ScenarioConfig& cfg, std::vector<agent::Agent>& agents, const RunOptions& opt)
      : cfg_(cfg),
        opt_(opt),
        trace_(opt.trace_sink ? sim::RunTrace(*opt.trace_sink) : sim::RunTrace()),
        engine_(trace_),
        auction_rng_(opt.workload_seed, "aca/auction") {
    if (!opt.event_rows) {
      trace_.set_accept_filter([](std::string_view kind) {
        return kind == "vehicle" || kind == "request" || kind == "util" || kind == "clear";
      });
    }
    if (opt.retain_rows) {
      trace_.set_retain_filter([](std::string_view kind) {
        return kind == "vehicle" || kind == "request" || kind == "util" || kind == "clear";
      });
    } else {
      trace_.retain_none();
    }
    if (opt.max_rebids < 1) throw std::invalid_argument("max_rebids must be at least 1");

    std::vector<workload::MobilitySample> samples;
    std::vector<std::string> trace_ids;
    if (cfg.mobility_trace) {
      samples = workload::load_mobility_trace(*cfg.mobility_trace);
      trace_ids = trace_vehicle_ids(samples);
    }
    const int n = fleet_size(cfg);
    if (static_cast<int>(agents.size()) != n)
      throw std::invalid_argument("agent count does not match the fleet size");

    for (const auto& t : cfg.catalog.types()) type_ids_.push_back(t.type_id);

    for (int i = 0; i < n; ++i) {
      const std::string label = "vehicle/" + std::to_string(i);
      Vehicle v(label, &agents[static_cast<std::size_t>(i)], opt.workload_seed);
      v.prev_price.assign(cfg.catalog.size(), std::nullopt);
      v.agent->reset_episode(sim::splitmix64(opt.policy_seed ^ sim::fnv1a64(label)));
      if (!trace_ids.empty()) {
        for (const auto& s : samples)
          if (s.vehicle_id == trace_ids[static_cast<std::size_t>(i)]) v.track.push_back(s);
        v.present = false;
      }
      vehicles_.push_back(std::move(v));
    }

    for (const auto& sc : cfg.sites) {
      auto site = ops::make_site(sc.id, sc.capacity, sc.report_delay_ms, cfg.time_unit_ms);
      site.resource_profile = sc.profile;
      beliefs_.push_back(ops::make_belief(site, cfg.op.admission_horizon));
      report_rngs_.emplace_back(opt.workload_seed, "site/" + sc.id + "/reports");
      sites_.push_back(std::move(site));
    }
    noise_ = {cfg.op.sigma_delay_ms, cfg.op.sigma_util};

    engine_.set_filter([this](const sim::Event& e) { return live_event(e); });
    engine_.set_handler([this](const sim::Event& e) { handle(e); });
  }

  RunResult run() {
    const std::int64_t end = opt_.duration_ms;
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
      auto& v = vehicles_[i];
      sim::TraceRow row{0, "vehicle", v.label, {}};
      row.add("budget", v.agent->config().budget);
      row.add("level", std::string(is_high_budget(v) ? "high" : "low"));
      row.add("active", std::string(v.agent->config().active ? "1" : "0"));
      trace_.append(std::move(row));
      update_mobility(v, 0);
      start_arrivals(static_cast<std::uint32_t>(i));
    }
    schedule(0, EventKind::AuctionClear, "aca", sim::RoundPayload{0});

    // Run in slices so that a decision budget can end the run early.
    const std::int64_t slice = 1000;
    std::int64_t t = 0;
    while (t < end) {
      t = std::min(end, t + slice);
      engine_.run_until(SimTime(t));
      if (opt_.decision_budget >= 0 && decisions_ >= opt_.decision_budget) break;
    }
    RunResult r;
    r.end_ms = t;
    r.decisions = decisions_;
    r.digest = trace_.digest();
    r.trace_rows = trace_.size();
    r.rows = trace_.rows();
    return r;
  }

private:
  bool is_high_budget(const Vehicle& v) const {
    return v.agent->config().budget >= cfg_.agents.budget_high;
  }

  void schedule(std::int64_t t, EventKind kind, std::string entity, sim::EventPayload payload) {
    if (t > opt_.duration_ms) return;
    engine_.schedule(sim::make_event(SimTime(t), kind, std::move(entity), std::move(payload)));
  }

  Request* find(std::uint64_t id) {
    auto it = requests_.find(id);
    return it == requests_.end() ? nullptr : &it->second;
  }

  // Superseded events are skipped without a trace row.
  bool live_event(const sim::Event& e) {
    switch (e.kind) {
      case EventKind::ExecutionComplete: {
        const auto& p = std::get<sim::SiteWakePayload>(e.payload);
        return sites_[p.site].generation == p.generation;
      }
      case EventKind::DeadlineExpiry: {
        const Request* r = find(std::get<sim::RequestPayload>(e.payload).request);
        return r && (r->state == ReqState::Awaiting || r->state == ReqState::Backoff ||
                     r->state == ReqState::Pending);
      }
      case EventKind::BackoffExpiry: {
        const Request* r = find(std::get<sim::RequestPayload>(e.payload).request);
        return r && r->state == ReqState::Backoff;
      }
      case EventKind::BidSubmission: {
        const Request* r = find(std::get<sim::RequestPayload>(e.payload).request);
        return r && r->state == ReqState::Backoff;
      }
      case EventKind::AssignmentDispatch: {
        const Request* r = find(std::get<sim::DispatchPayload>(e.payload).request);
        return r && r->state == ReqState::Transit;
      }
      default: return true;
    }
  }

  void handle(const sim::Event& e) {
    const std::int64_t now = e.time.ms();
    switch (e.kind) {
      case EventKind::ServiceArrival: on_arrival(std::get<sim::VehiclePayload>(e.payload).vehicle, now); break;
      case EventKind::AuctionClear: on_round(std::get<sim::RoundPayload>(e.payload).round, now); break;
      case EventKind::FeedbackDelivery: on_feedback(std::get<sim::VehiclePayload>(e.payload).vehicle, now); break;
      case EventKind::BackoffExpiry: {
        auto id = std::get<sim::RequestPayload>(e.payload).request;
        schedule(now, EventKind::BidSubmission, "request/" + std::to_string(id), sim::RequestPayload{id});
        break;
      }
      case EventKind::BidSubmission: submit(*find(std::get<sim::RequestPayload>(e.payload).request), now); break;
      case EventKind::DeadlineExpiry: {
        Request& r = *find(std::get<sim::RequestPayload>(e.payload).request);
        fail(r, now, "expired");
        break;
      }
      case EventKind::AssignmentDispatch: {
        const auto& p = std::get<sim::DispatchPayload>(e.payload);
        on_dispatch(*find(p.request), p.site, now);
        break;
      }
      case EventKind::ExecutionComplete: {
        const auto site = std::get<sim::SiteWakePayload>(e.payload).site;
        settle(site, ops::execute_step(sites_[site], now), now);
        break;
      }
      case EventKind::UtilizationReportArrival: {
        const auto& p = std::get<sim::ReportPayload>(e.payload);
        auto it = reports_.find(p.report);
        ops::absorb_report(beliefs_[p.site], it->second);
        reports_.erase(it);
        ops::rial_update_prices(beliefs_, cfg_.op.gamma_price);
        break;
      }
    }
  }

  // ---- workload ----------------------------------------------------------

  void start_arrivals(std::uint32_t vi) {
    auto& v = vehicles_[vi];
    const auto& a = cfg_.arrivals;
    if (a.kind == "periodic") {
      for (const auto& t : cfg_.catalog.types()) {
        auto it = a.period_ms.find(t.type_id);
        const std::int64_t period = it == a.period_ms.end() ? 0 : it->second;
        v.next_periodic.push_back(period > 0 ? static_cast<std::int64_t>(v.arrivals.index(
                                                   static_cast<std::size_t>(period)))
                                             : std::numeric_limits<std::int64_t>::max());
      }
    } else {
      v.mmpp = workload::make_vehicle_mmpp(a.high_lo_per_s * a.rate_scale, a.high_hi_per_s * a.rate_scale,
                                           a.low_lo_per_s * a.rate_scale, a.low_hi_per_s * a.rate_scale, a.p_high,
                                           a.p_low, a.epoch_ms, v.arrivals);
    }
    schedule_next_arrival(vi);
  }

  void schedule_next_arrival(std::uint32_t vi) {
    auto& v = vehicles_[vi];
    std::int64_t at = 0;
    if (cfg_.arrivals.kind == "periodic") {
      at = *std::min_element(v.next_periodic.begin(), v.next_periodic.end());
      if (at == std::numeric_limits<std::int64_t>::max()) return;
    } else {
      const double horizon = static_cast<double>(opt_.duration_ms) + 1.0;
      while (true) {
        auto d = workload::mmpp_next_arrival(v.mmpp, v.arrivals, horizon);
        v.mmpp = d.state;
        v.clock_ms += d.interarrival_ms;
        if (v.clock_ms > horizon) return;
        if (!d.capped) break;
      }
      at = sim::ceil_ms(v.clock_ms);
    }
    schedule(at, EventKind::ServiceArrival, v.label, sim::VehiclePayload{vi});
  }

  void on_arrival(std::uint32_t vi, std::int64_t now) {
    auto& v = vehicles_[vi];
    if (cfg_.arrivals.kind == "periodic") {
      for (std::size_t k = 0; k < v.next_periodic.size(); ++k) {
        if (v.next_periodic[k] > now) continue;
        v.next_periodic[k] += cfg_.arrivals.period_ms.at(type_ids_[k]);
        if (v.present) create_request(vi, k, now);
      }
    } else if (v.present) {
      create_request(vi, workload::sample_service_index(cfg_.catalog.types(), v.requests), now);
    }
    schedule_next_arrival(vi);
  }

  void create_request(std::uint32_t vi, std::size_t type, std::int64_t now) {
    auto& v = vehicles_[vi];
    const auto& spec = cfg_.catalog[type];
    Request r;
    r.id = next_request_++;
    r.vehicle = vi;
    r.type = type;
    r.created = now;
    r.deadline_at = now + spec.deadline_ms;
    const double data = v.requests.uniform(cfg_.data_bits_lo, cfg_.data_bits_hi);
    r.up_bits = spec.uplink_bits > 0.0 ? spec.uplink_bits : data;
    r.down_bits = spec.downlink_bits;
    r.work_scales = ops::draw_work_scales(spec.task_chain.size(), cfg_.op.sigma_work, v.requests);
    v.awaiting.push_back(r.id);
    v.live.push_back(r.id);
    const std::string entity = "request/" + std::to_string(r.id);
    schedule(r.deadline_at + 1, EventKind::DeadlineExpiry, entity, sim::RequestPayload{r.id});
    requests_.emplace(r.id, std::move(r));
    request_feedback(vi, now);
  }

  void update_mobility(Vehicle& v, std::int64_t now) {
    if (v.track.empty()) return;
    while (v.track_pos < v.track.size() && v.track[v.track_pos].time_ms <= now) {
      v.present = v.track[v.track_pos].present;
      v.distance_m = v.track[v.track_pos].distance_m;
      ++v.track_pos;
    }
  }

  int vehicles_present() const {
    int n = 0;
    for (const auto& v : vehicles_) n += v.present ? 1 : 0;
    return n;
  }

  /// Transfer time in ms; nullopt when the vehicle cannot transmit.
  std::optional<std::int64_t> transfer_ms(const Vehicle& v, double bits) const {
    if (cfg_.zero_latency || bits <= 0.0) return 0;
    if (!v.present) return std::nullopt;
    try {
      return workload::transmission_delay(bits, workload::throughput_at(v.distance_m, std::max(1, vehicles_present())));
    } catch (const workload::OutOfRange&) {
      return std::nullopt;
    } catch (const workload::ZeroRate&) {
      return std::nullopt;
    }
  }

  // ---- agent side --------------------------------------------------------

  void request_feedback(std::uint32_t vi, std::int64_t now) {
    auto& v = vehicles_[vi];
    if (v.feedback_scheduled) return;
    v.feedback_scheduled = true;
    schedule(now, EventKind::FeedbackDelivery, v.label, sim::VehiclePayload{vi});
  }

  agent::StepInput observe(const Vehicle& v, std::int64_t now) const {
    agent::StepInput in;
    const std::size_t k = cfg_.catalog.size();
    in.types.resize(k);
    for (std::size_t i = 0; i < k; ++i) in.types[i].units = cfg_.catalog[i].total_units();
    std::vector<std::int64_t> tightest(k, std::numeric_limits<std::int64_t>::max());
    for (auto id : v.awaiting) {
      const Request& r = requests_.at(id);
      auto& o = in.types[r.type];
      ++o.awaiting;
      o.attempts = std::max(o.attempts, r.submissions);
      tightest[r.type] = std::min(tightest[r.type], r.deadline_at - now);
    }
    for (std::size_t i = 0; i < k; ++i)
      if (in.types[i].awaiting > 0) in.types[i].slack_ms = static_cast<double>(std::max<std::int64_t>(0, tightest[i]));
    for (auto id : v.live) {
      const Request& r = requests_.at(id);
      if (r.state == ReqState::Backoff || r.state == ReqState::Pending) ++in.types[r.type].outstanding;
    }
    in.prev_price = v.prev_price;
    in.bidder_count = std::max(0, vehicles_present() - 1);
    in.beta = v.beta;
    in.gap_ms = v.last_decision < 0 ? 0.0 : static_cast<double>(now - v.last_decision);
    in.utility_prev = v.pending_reward;
    return in;
  }

  void on_feedback(std::uint32_t vi, std::int64_t now) {
    auto& v = vehicles_[vi];
    v.feedback_scheduled = false;
    std::erase_if(v.awaiting, [this](std::uint64_t id) { return !requests_.count(id); });
    if (v.awaiting.empty()) return;

    agent::Agent& ag = *v.agent;
    const auto& ac = ag.config();
    const agent::StepInput in = observe(v, now);
    const double reward = v.pending_reward + ac.utilization_weight * (1.0 - v.beta);
    v.pending_reward = 0.0;
    const auto dec = ag.decide(in, reward, opt_.learn);
    v.last_decision = now;
    if (ac.active) ++decisions_;
    if (opt_.diagnostics && ac.active) write_diagnostics(v, now, reward, ag);

    for (auto id : v.awaiting) {
      Request& r = requests_.at(id);
      const double alpha = dec.action.backoff[r.type];
      r.price = dec.action.price[r.type];
      if (alpha > ac.backoff_threshold) {
        submit(r, now);
      } else {
        const auto wait = std::max<std::int64_t>(
            1, std::llround(alpha * static_cast<double>(ac.max_backoff_ms)));
        r.state = ReqState::Backoff;
        ++r.backoffs;
        r.backoff_ms += wait;
        v.pending_reward += ac.backoff_cost;
        schedule(now + wait, EventKind::BackoffExpiry, "request/" + std::to_string(r.id),
                 sim::RequestPayload{r.id});
      }
    }
    v.awaiting.clear();
  }

  void write_diagnostics(const Vehicle& v, std::int64_t now, double reward, const agent::Agent& ag) {
    const auto& tr = ag.last_trace();
    if (!tr) return;
    auto& os = *opt_.diagnostics;
    os << now << ',' << v.label << ',' << tr->step << ',' << sim::format_number(tr->eta) << ','
       << (tr->best_response ? "rl" : "sl") << ',' << sim::format_number(tr->delta) << ','
       << sim::format_number(tr->avg_reward) << ',' << sim::format_number(tr->actor_grad_norm) << ','
       << sim::format_number(tr->critic_grad_norm) << ',' << sim::format_number(reward) << '\n';
  }

  void submit(Request& r, std::int64_t now) {
    r.state = ReqState::Pending;
    ++r.submissions;
    r.price_sum += r.price;
    r.submitted_at = now;
    vehicles_[r.vehicle].queued.push_back(r.id);
  }

  // ---- operator side -----------------------------------------------------

  void on_round(std::uint64_t round, std::int64_t now) {
    for (auto& v : vehicles_) update_mobility(v, now);

    for (std::size_t s = 0; s < sites_.size(); ++s) {
      settle(s, ops::execute_step(sites_[s], now), now);
      auto rep = ops::report_utilization(sites_[s], now, report_rngs_[s], noise_);
      const std::uint64_t key = next_report_++;
      const std::int64_t arrives = rep.arrives_at;
      reports_.emplace(key, std::move(rep));
      schedule(arrives, EventKind::UtilizationReportArrival, "site/" + sites_[s].site_id,
               sim::ReportPayload{static_cast<std::uint32_t>(s), key});
    }

    // One bid per (vehicle, type) per round; the rest wait for later rounds.
    std::vector<auction::Bid> bids;
    std::vector<std::string> roster;
    for (auto& v : vehicles_) {
      std::vector<bool> used(cfg_.catalog.size(), false);
      std::vector<std::uint64_t> keep;
      bool any = false;
      for (auto id : v.queued) {
        Request* r = find(id);
        if (!r || r->state != ReqState::Pending) continue;
        if (used[r->type]) {
          keep.push_back(id);
          continue;
        }
        used[r->type] = true;
        any = true;
        const auto& spec = cfg_.catalog[r->type];
        auction::Bid b;
        b.bidder_id = v.label;
        b.service_type = spec.type_id;
        b.price = r->price;
        b.resource_estimate = {spec.total_units()};
        b.deadline_ms = r->deadline_at;
        b.rebid_count = r->submissions - 1;
        b.submitted_at = r->submitted_at;
        b.request_id = id;
        bids.push_back(std::move(b));
      }
      v.queued = std::move(keep);
      if (any) roster.push_back(v.label);
    }

    if (!bids.empty()) clear_round(bids, roster, now);

    const double beta = ops::system_utilization(beliefs_);
    for (std::size_t s = 0; s < sites_.size(); ++s) {
      sim::TraceRow row{now, "util", "site/" + sites_[s].site_id, {}};
      row.add("util", sites_[s].utilization);
      row.add("believed", beliefs_[s].believed_utilization());
      row.add("price", beliefs_[s].price);
      row.add("queued", sites_[s].queued_units());
      trace_.append(std::move(row));
    }
    for (std::uint32_t i = 0; i < vehicles_.size(); ++i) {
      vehicles_[i].beta = beta;
      std::erase_if(vehicles_[i].awaiting, [this](std::uint64_t id) { return !requests_.count(id); });
      if (!vehicles_[i].awaiting.empty()) request_feedback(i, now);
    }
    schedule(now + cfg_.op.cadence_ms, EventKind::AuctionClear, "aca", sim::RoundPayload{round + 1});
  }

  void clear_round(const std::vector<auction::Bid>& bids, const std::vector<std::string>& roster,
                   std::int64_t now) {
    const auto estimates = ops::demand_estimates(sites_, bids);
    const auto slots = ops::compute_slots(beliefs_, estimates);
    const auto outcome = auction::clear_auction(bids, slots, auction_rng_, now, roster);
    const auto decisions = ops::admit(bids, outcome, beliefs_, estimates, cfg_.op.gamma_price);

    for (const auto& [type, ranked] : outcome.ranking) {
      sim::TraceRow row{now, "clear", "aca", {}};
      row.add("type", type);
      row.add("bids", static_cast<std::int64_t>(ranked.size()));
      row.add("slots", slots.count(type) ? slots.at(type) : 0);
      row.add("winners", static_cast<std::int64_t>(outcome.winners.at(type).size()));
      row.add("price", outcome.payment_vector.at(type));
      trace_.append(std::move(row));
    }

    for (const auto& d : decisions) {
      Request& r = requests_.at(d.request_id);
      const std::uint32_t vi = r.vehicle;
      Vehicle& v = vehicles_[vi];
      const auto& ac = v.agent->config();
      const double pay = outcome.payment_vector.at(bids[d.bid_index].service_type);
      v.prev_price[r.type] = pay;
      const int won = outcome.is_winner(bids[d.bid_index].service_type, v.label) ? 1 : 0;
      v.pending_reward += agent::utility_per_type(won, v.agent->valuations()[r.type], pay, ac.lost_bid_cost,
                                                  ac.backoff_cost, true);
      if (d.admitted) {
        const std::size_t s = static_cast<std::size_t>(
            std::find_if(sites_.begin(), sites_.end(),
                         [&](const ops::SiteState& x) { return x.site_id == *d.assigned_site; }) -
            sites_.begin());
        const auto up = transfer_ms(v, r.up_bits);
        const auto down = transfer_ms(v, r.down_bits);
        r.site = s;
        if (!up || !down) {
          fail(r, now, "dropped");
          continue;
        }
        r.down_delay = *down;
        r.state = ReqState::Transit;
        schedule(now + *up, EventKind::AssignmentDispatch, "request/" + std::to_string(r.id),
                 sim::DispatchPayload{r.id, static_cast<std::uint32_t>(s)});
      } else if (r.submissions < 1 + opt_.max_rebids) {
        r.state = ReqState::Awaiting;
        v.awaiting.push_back(r.id);
      } else {
        finish(r, now, "rejected");
      }
      request_feedback(vi, now);
    }
  }

  void on_dispatch(Request& r, std::uint32_t s, std::int64_t now) {
    ops::note_arrival(beliefs_[s], r.id, now);
    r.state = ReqState::AtSite;
    const auto& spec = cfg_.catalog[r.type];
    std::vector<double> units;
    for (const auto& t : spec.task_chain) units.push_back(t.resource_units);
    auto sr = ops::make_site_request(sites_[s], r.id, spec.type_id, units, r.deadline_at - r.down_delay,
                                     r.work_scales);
    settle(s, ops::dispatch_to_site(sites_[s], std::move(sr), now), now);
  }

  void settle(std::size_t s, const std::vector<ops::SiteOutcome>& outcomes, std::int64_t now) {
    auto& site = sites_[s];
    for (const auto& o : outcomes) {
      Request* r = find(o.request_id);
      if (o.kind == ops::SiteOutcome::Kind::Completed) {
        ops::update_service_estimate(site, o.service_type, o.observed_units, cfg_.op.estimate_rate);
        if (r) finish(*r, now, "completed");
      } else if (r) {
        fail(*r, now, "dropped");
      }
    }
    ++site.generation;
    if (auto w = ops::next_wake(site)) {
      schedule(std::max(*w, now), EventKind::ExecutionComplete, "site/" + site.site_id,
               sim::SiteWakePayload{static_cast<std::uint32_t>(s), site.generation});
    }
  }

  void fail(Request& r, std::int64_t now, const char* outcome) {
    const std::uint32_t vi = r.vehicle;
    vehicles_[vi].pending_reward -= cfg_.agents.failure_penalty;
    finish(r, now, outcome);
    request_feedback(vi, now);
  }

  void finish(Request& r, std::int64_t now, const char* outcome) {
    Vehicle& v = vehicles_[r.vehicle];
    sim::TraceRow row{now, "request", v.label, {}};
    row.add("id", r.id);
    row.add("type", cfg_.catalog[r.type].type_id);
    row.add("deadline", cfg_.catalog[r.type].deadline_ms);
    row.add("created", r.created);
    row.add("outcome", std::string(outcome));
    row.add("submissions", r.submissions);
    row.add("rebids", std::max(0, r.submissions - 1));
    row.add("backoffs", r.backoffs);
    row.add("backoff_ms", r.backoff_ms);
    row.add("price_sum", r.price_sum);
    row.add("budget", std::string(is_high_budget(v) ? "high" : "low"));
    row.add("site", r.site ? sites_[*r.site].site_id : std::string("none"));
    trace_.append(std::move(row));
    std::erase(v.live, r.id);
    requests_.erase(r.id);
  }

  const ScenarioConfig& cfg_;
  const RunOptions& opt_;
  sim::RunTrace trace_;
  sim::Engine engine_;
  sim::RngStream auction_rng_;
  std::vector<std::string> type_ids_;
  std::vector<Vehicle> vehicles_;
  std::vector<ops::SiteState> sites_;
  std::vector<ops::SiteBelief> beliefs_;
  std::vector<sim::RngStream> report_rngs_;
  ops::ReportNoise noise_;
  std::map<std::uint64_t, ops::UtilizationReport> reports_;
  std::uint64_t next_report_ = 0;
  std::unordered_map<std::uint64_t, Request> requests_;
  std::uint64_t next_request_ = 0;
  std::int64_t decisions_ = 0;
};

}  // namespace

int fleet_size(const ScenarioConfig& cfg) {
  if (!cfg.mobility_trace) return cfg.vehicle_count;
  return static_cast<int>(trace_vehicle_ids(workload::load_mobility_trace(*cfg.mobility_trace)).size());
}

std::vector<agent::Agent> make_agents(const ScenarioConfig& cfg, bool active, std::uint64_t seed) {
  const int n = fleet_size(cfg);
  std::vector<double> units;
  for (const auto& t : cfg.catalog.types()) units.push_back(t.total_units());
  std::vector<agent::Agent> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::string label = "vehicle/" + std::to_string(i);
    sim::RngStream budget_rng(seed, label + "/budget");
    const auto& d = cfg.agents;
    agent::AgentConfig a;
    a.bidder_id = label;
    a.budget = budget_rng.bernoulli(d.high_fraction) ? d.budget_high : d.budget_low;
    a.valuation_slope = d.valuation_slope;
    a.valuation_intercept = d.valuation_intercept;
    a.lost_bid_cost = d.lost_bid_cost;
    a.backoff_cost = d.backoff_cost;
    a.utilization_weight = d.utilization_weight;
    a.backoff_threshold = d.backoff_threshold;
    a.max_backoff_ms = d.max_backoff_ms;
    a.active = active;
    agent::FeatureScales fs;
    fs.max_units = cfg.catalog.max_units();
    fs.max_deadline_ms = static_cast<double>(cfg.catalog.max_deadline_ms());
    fs.price_scale = a.budget;
    fs.fleet_size = n;
    fs.max_attempts = 1 + cfg.max_rebids;
    fs.max_gap_ms = static_cast<double>(std::max<std::int64_t>(cfg.op.cadence_ms, d.max_backoff_ms));
    out.emplace_back(a, cfg.learning, units, fs, seed, label);
  }
  return out;
}

RunResult run_world(const ScenarioConfig& cfg, std::vector<agent::Agent>& agents, const RunOptions& options) {
  World w(cfg, agents, options);
  return w.run();
}

std::string_view diagnostics_header() {
  return "time_ms,vehicle,step,eta,branch,delta,avg_reward,actor_grad_norm,critic_grad_norm,reward";
}

}  // namespace offload::scenario
