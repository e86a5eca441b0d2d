#include "offload/ops/site.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "offload/sim/time.hpp"

namespace offload::ops {

namespace {

constexpr double kEps = 1e-9;

double finish_time(const SiteState& site, const SiteRequest& r) {
  if (r.remaining <= kEps) return site.clock_ms;
  if (r.allocated <= 0.0) return std::numeric_limits<double>::infinity();
  return site.clock_ms + r.remaining / r.allocated;
}

void start_and_share(SiteState& site) {
  double demand = 0.0;
  for (const auto& r : site.in_flight) demand += r.demand();
  while (!site.queue.empty() && demand < site.capacity - kEps) {
    SiteRequest r = std::move(site.queue.front());
    site.queue.pop_front();
    r.started_at = static_cast<std::int64_t>(std::floor(site.clock_ms + kEps));
    demand += r.demand();
    site.in_flight.push_back(std::move(r));
  }
  // Water-filling: equal shares, nobody above its own demand.
  std::vector<std::size_t> order(site.in_flight.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return site.in_flight[a].demand() < site.in_flight[b].demand();
  });
  double left = site.capacity;
  std::size_t n = order.size();
  for (std::size_t i : order) {
    double share = left / static_cast<double>(n--);
    double a = std::min(site.in_flight[i].demand(), share);
    site.in_flight[i].allocated = a;
    left -= a;
  }
  site.utilization = site.capacity > 0.0 ? std::clamp(site.allocated_units() / site.capacity, 0.0, 1.0) : 0.0;
}

void advance_work(SiteState& site, double t) {
  double dt = t - site.clock_ms;
  if (dt > 0.0) {
    for (auto& r : site.in_flight) r.remaining = std::max(0.0, r.remaining - r.allocated * dt);
  }
  site.clock_ms = std::max(site.clock_ms, t);
}

}  // namespace

double SiteRequest::observed_units(double time_unit_ms) const {
  return std::accumulate(task_work.begin(), task_work.end(), 0.0) / time_unit_ms;
}

double SiteState::allocated_units() const {
  double s = 0.0;
  for (const auto& r : in_flight) s += r.allocated;
  return s;
}

double SiteState::queued_units() const {
  double s = 0.0;
  for (const auto& r : queue) s += r.demand();
  return s;
}

double SiteState::profile(const std::string& type) const {
  auto it = resource_profile.find(type);
  return it == resource_profile.end() ? 1.0 : it->second;
}

SiteState make_site(std::string site_id, double capacity, std::int64_t report_delay_ms, double time_unit_ms) {
  if (site_id.empty()) throw std::invalid_argument("site id must not be empty");
  if (!(capacity > 0.0)) throw std::invalid_argument("site capacity must be positive");
  if (report_delay_ms < 0) throw std::invalid_argument("report delay must be non-negative");
  if (!(time_unit_ms > 0.0)) throw std::invalid_argument("time unit must be positive");
  SiteState s;
  s.site_id = std::move(site_id);
  s.capacity = capacity;
  s.report_delay_ms = report_delay_ms;
  s.time_unit_ms = time_unit_ms;
  return s;
}

SiteRequest make_site_request(const SiteState& site, std::uint64_t request_id, const std::string& type,
                              const std::vector<double>& task_units, std::int64_t deadline_at,
                              std::span<const double> work_scales) {
  if (task_units.empty()) throw std::invalid_argument("request needs at least one task");
  SiteRequest r;
  r.request_id = request_id;
  r.service_type = type;
  r.task_units = task_units;
  r.deadline_at = deadline_at;
  const double mult = site.profile(type) * site.time_unit_ms;
  for (std::size_t i = 0; i < task_units.size(); ++i) {
    const double u = task_units[i];
    if (!(u > 0.0)) throw std::invalid_argument("task units must be positive");
    const double scale = i < work_scales.size() ? work_scales[i] : 1.0;
    r.task_work.push_back(u * mult * scale);
  }
  r.remaining = r.task_work.front();
  return r;
}

std::vector<double> draw_work_scales(std::size_t tasks, double sigma, sim::RngStream& rng) {
  std::vector<double> out;
  for (std::size_t i = 0; i < tasks; ++i) out.push_back(sigma > 0.0 ? std::max(0.0, 1.0 + rng.normal(0.0, sigma)) : 1.0);
  return out;
}

std::vector<SiteOutcome> execute_step(SiteState& site, std::int64_t now) {
  std::vector<SiteOutcome> out;
  const double t_now = static_cast<double>(now);
  if (t_now + kEps < site.clock_ms) throw std::logic_error("site advanced backwards");
  for (;;) {
    start_and_share(site);
    double t_done = std::numeric_limits<double>::infinity();
    std::size_t done_idx = 0;
    for (std::size_t i = 0; i < site.in_flight.size(); ++i) {
      double t = finish_time(site, site.in_flight[i]);
      if (t < t_done) { t_done = t; done_idx = i; }
    }
    // Earliest deadline among everything still at the site.
    double t_drop = std::numeric_limits<double>::infinity();
    bool drop_in_queue = false;
    std::size_t drop_idx = 0;
    for (std::size_t i = 0; i < site.in_flight.size(); ++i) {
      double d = static_cast<double>(site.in_flight[i].deadline_at);
      if (d < t_drop) { t_drop = d; drop_idx = i; drop_in_queue = false; }
    }
    for (std::size_t i = 0; i < site.queue.size(); ++i) {
      double d = static_cast<double>(site.queue[i].deadline_at);
      if (d < t_drop) { t_drop = d; drop_idx = i; drop_in_queue = true; }
    }

    if (t_done <= t_drop + kEps && t_done <= t_now + kEps) {
      advance_work(site, t_done);
      SiteRequest& r = site.in_flight[done_idx];
      r.remaining = 0.0;
      if (r.current_task + 1 < r.task_work.size()) {
        ++r.current_task;
        r.remaining = r.task_work[r.current_task];
        continue;
      }
      SiteOutcome o;
      o.kind = SiteOutcome::Kind::Completed;
      o.request_id = r.request_id;
      o.service_type = r.service_type;
      o.time_ms = std::max<std::int64_t>(sim::ceil_ms(t_done), 0);
      o.observed_units = r.observed_units(site.time_unit_ms);
      site.in_flight.erase(site.in_flight.begin() + static_cast<std::ptrdiff_t>(done_idx));
      out.push_back(std::move(o));
      continue;
    }
    if (t_drop < t_done && t_drop < t_now) {
      // The request stops consuming resources at its deadline; the drop is
      // observable on the next tick.
      advance_work(site, std::max(t_drop, site.clock_ms));
      SiteRequest r;
      if (drop_in_queue) {
        r = std::move(site.queue[drop_idx]);
        site.queue.erase(site.queue.begin() + static_cast<std::ptrdiff_t>(drop_idx));
      } else {
        r = std::move(site.in_flight[drop_idx]);
        site.in_flight.erase(site.in_flight.begin() + static_cast<std::ptrdiff_t>(drop_idx));
      }
      SiteOutcome o;
      o.kind = SiteOutcome::Kind::Dropped;
      o.request_id = r.request_id;
      o.service_type = r.service_type;
      o.time_ms = r.deadline_at + 1;
      out.push_back(std::move(o));
      continue;
    }
    advance_work(site, t_now);
    break;
  }
  start_and_share(site);
  return out;
}

std::vector<SiteOutcome> dispatch_to_site(SiteState& site, SiteRequest request, std::int64_t now) {
  auto out = execute_step(site, now);
  site.queue.push_back(std::move(request));
  start_and_share(site);
  ++site.generation;
  return out;
}

std::optional<std::int64_t> next_wake(const SiteState& site) {
  std::optional<std::int64_t> best;
  auto consider = [&](std::int64_t t) {
    if (!best || t < *best) best = t;
  };
  for (const auto& r : site.in_flight) {
    double t = finish_time(site, r);
    // A task finishing before the chain ends still changes the shares.
    if (std::isfinite(t)) consider(std::max<std::int64_t>(sim::ceil_ms(t), 0));
    consider(r.deadline_at + 1);
  }
  for (const auto& r : site.queue) consider(r.deadline_at + 1);
  return best;
}

void update_service_estimate(SiteState& site, const std::string& type, double observed_units, double rate) {
  if (!(observed_units > 0.0)) throw std::invalid_argument("observed units must be positive");
  if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("estimate rate must be in (0, 1]");
  auto it = site.estimates.find(type);
  if (it == site.estimates.end()) {
    site.estimates.emplace(type, observed_units);
  } else {
    it->second = (1.0 - rate) * it->second + rate * observed_units;
  }
}

UtilizationReport report_utilization(const SiteState& site, std::int64_t now, sim::RngStream& rng,
                                     const ReportNoise& noise) {
  UtilizationReport rep;
  rep.site_id = site.site_id;
  rep.measured_at = now;
  rep.queued_units = site.queued_units();
  if (noise.sigma_delay_ms > 0.0) rep.delay_noise_ms = rng.normal(0.0, noise.sigma_delay_ms);
  double delay = static_cast<double>(site.report_delay_ms) + rep.delay_noise_ms;
  rep.arrives_at = now + std::max<std::int64_t>(0, std::llround(delay));
  if (noise.sigma_util > 0.0) rep.noise_applied = rng.normal(0.0, noise.sigma_util);
  rep.utilization = std::clamp(site.utilization + rep.noise_applied, 0.0, 1.0);
  return rep;
}

}  // namespace offload::ops
