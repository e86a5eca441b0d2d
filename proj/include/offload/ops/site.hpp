#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "offload/sim/rng.hpp"

namespace offload::ops {

/// An admitted request as seen by a computing site.
struct SiteRequest {
  std::uint64_t request_id = 0;
  std::string service_type;
  /// Concurrent resource units each task can use.
  std::vector<double> task_units;
  /// Work per task in unit-milliseconds, after profile and noise.
  std::vector<double> task_work;
  std::size_t current_task = 0;
  double remaining = 0.0;
  /// Last instant at which completing still meets the deadline.
  std::int64_t deadline_at = 0;
  std::int64_t started_at = -1;
  double allocated = 0.0;

  double demand() const { return task_units.at(current_task); }
  /// Resource volume of the whole chain, in time-resource units.
  double observed_units(double time_unit_ms) const;
};

/// A computing site. Requests wait FIFO in `queue` until the site has
/// unclaimed capacity, then run in `in_flight` under processor sharing:
/// capacity is split equally, with no request getting more than its current
/// task's demand, and re-split on every start, completion and drop.
struct SiteState {
  std::string site_id;
  double capacity = 0.0;
  /// Execution-duration multiplier per service type (default 1).
  std::map<std::string, double> resource_profile;
  std::deque<SiteRequest> queue;
  std::vector<SiteRequest> in_flight;
  double utilization = 0.0;
  /// Learned resource need per service type.
  std::map<std::string, double> estimates;
  std::int64_t report_delay_ms = 0;
  double price = 0.0;
  /// Milliseconds one unit of work takes on one resource unit.
  double time_unit_ms = 1.0;
  /// Continuous clock of the last advance.
  double clock_ms = 0.0;

  double allocated_units() const;
  double free_units() const { return capacity - allocated_units(); }
  double queued_units() const;
  double profile(const std::string& type) const;
  /// Drops references to stale wake-ups; bumped whenever the schedule changes.
  std::uint64_t generation = 0;
};

SiteState make_site(std::string site_id, double capacity, std::int64_t report_delay_ms,
                    double time_unit_ms = 1.0);

/// Builds the site-side record for a request. Each task's work is its units
/// times the site's profile multiplier and time unit, times the matching
/// entry of `work_scales` (1 when absent).
SiteRequest make_site_request(const SiteState& site, std::uint64_t request_id, const std::string& type,
                              const std::vector<double>& task_units, std::int64_t deadline_at,
                              std::span<const double> work_scales = {});

/// Per-task work multipliers max(0, 1 + N(0, sigma)).
std::vector<double> draw_work_scales(std::size_t tasks, double sigma, sim::RngStream& rng);

struct SiteOutcome {
  enum class Kind { Completed, Dropped };
  Kind kind = Kind::Completed;
  std::uint64_t request_id = 0;
  std::string service_type;
  /// Tick at which the outcome became observable.
  std::int64_t time_ms = 0;
  double observed_units = 0.0;
};

/// Enqueues a request at `now` (after advancing the site to `now`).
std::vector<SiteOutcome> dispatch_to_site(SiteState& site, SiteRequest request, std::int64_t now);

/// Advances execution to `now`. Completions at or before their deadline are
/// reported as Completed on the tick they finish; a request still unfinished
/// once its deadline has passed is removed and reported as Dropped.
std::vector<SiteOutcome> execute_step(SiteState& site, std::int64_t now);

/// Earliest tick at which execute_step would report something.
std::optional<std::int64_t> next_wake(const SiteState& site);

/// Exponential moving average of a service's resource need; the first
/// observation initialises it.
void update_service_estimate(SiteState& site, const std::string& type, double observed_units,
                             double rate);

struct UtilizationReport {
  std::string site_id;
  std::int64_t measured_at = 0;
  std::int64_t arrives_at = 0;
  double utilization = 0.0;
  /// Demand waiting in the queue when measured.
  double queued_units = 0.0;
  double noise_applied = 0.0;
  double delay_noise_ms = 0.0;
};

struct ReportNoise {
  double sigma_delay_ms = 0.0;
  double sigma_util = 0.0;
};

/// Measures the site at `now`. The report reaches the admission controller
/// after report_delay + N(0, sigma_delay) ms (rounded to the nearest tick,
/// never before `now`); the utilization carries N(0, sigma_util) noise and is
/// clamped to [0, 1].
UtilizationReport report_utilization(const SiteState& site, std::int64_t now, sim::RngStream& rng,
                                     const ReportNoise& noise);

}  // namespace offload::ops
