#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "offload/sim/trace.hpp"

namespace offload::scenario {

// All metrics read only the "vehicle", "request" and "util" rows of a run
// trace, so they can be recomputed from a saved trace.csv.

/// Box-plot summary. Quartiles interpolate linearly between order
/// statistics; whiskers reach the most extreme points within 1.5 IQR.
struct BoxStats {
  std::size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
};
BoxStats box_stats(std::vector<double> values);

struct VehicleStats {
  std::string vehicle;
  std::string level;  // "high" or "low" budget
  int requests = 0;
  int failures = 0;
  double ofr = 0.0;
  double mean_rebids = 0.0;
  /// Mean submitted price over all submissions (0 when none).
  double mean_price = 0.0;
  int submissions = 0;
  double mean_backoff_ms = 0.0;
};

struct SiteUtilization {
  std::string site;
  std::size_t samples = 0;
  double mean = 0.0;
  double std = 0.0;
};

struct RunSummary {
  int requests = 0;
  int completed = 0;
  int rejected = 0;
  int dropped = 0;
  int expired = 0;
  double ofr = 0.0;
  /// Completed over admitted (completed + dropped); 1 when nothing was admitted.
  double reliability = 1.0;
  double mean_rebids = 0.0;
  /// Over per-vehicle mean rebids.
  BoxStats rebids;
  std::vector<SiteUtilization> sites;
  std::vector<VehicleStats> vehicles;
};

/// Final failures (rejected, dropped, expired) over finished requests; 0
/// for an empty trace.
double compute_ofr(std::span<const sim::TraceRow> rows);
double compute_reliability(std::span<const sim::TraceRow> rows);
/// Per-vehicle statistics in trace order of the vehicle rows; vehicles that
/// only appear in request rows are appended.
std::vector<VehicleStats> compute_vehicle_stats(std::span<const sim::TraceRow> rows);
/// Box summary of the per-vehicle mean rebids (vehicles with requests).
BoxStats compute_rebidding_stats(std::span<const sim::TraceRow> rows);
std::vector<SiteUtilization> compute_site_utilization(std::span<const sim::TraceRow> rows);

struct CdfPoint {
  std::string level;
  double ofr = 0.0;
  double cumulative = 0.0;
};
/// Empirical CDF of per-vehicle OFR for each budget level ("high" then
/// "low"); equal values collapse into one step.
std::vector<CdfPoint> compute_individual_ofr_cdf(std::span<const sim::TraceRow> rows);

struct BackoffGroup {
  /// "high" or "low" price group; a vehicle whose mean bid equals the
  /// average of all vehicles' mean bids is in "high".
  std::string group;
  std::int64_t deadline_ms = 0;
  int vehicles = 0;
  int requests = 0;
  double mean_backoff_ms = 0.0;
};
/// Keyed by (group, deadline class), sorted by group then deadline.
std::vector<BackoffGroup> backoff_price_analysis(std::span<const sim::TraceRow> rows);

RunSummary summarize(std::span<const sim::TraceRow> rows);

struct PairedSummary {
  RunSummary active;
  RunSummary passive;
  double delta_ofr = 0.0;
  double delta_reliability = 0.0;
  double delta_mean_rebids = 0.0;
  /// Per site, in the order of active.sites.
  std::vector<double> delta_util_mean;
  std::vector<double> delta_util_std;
};
PairedSummary pair_summaries(RunSummary active, RunSummary passive);

/// Tidy CSV writers (header plus one observation per row).
void write_vehicle_csv(std::ostream& out, const RunSummary& s);
void write_utilization_csv(std::ostream& out, const RunSummary& s);
void write_rebids_csv(std::ostream& out, const RunSummary& s);
void write_cdf_csv(std::ostream& out, const std::vector<CdfPoint>& cdf);
void write_backoff_csv(std::ostream& out, const std::vector<BackoffGroup>& groups);

}  // namespace offload::scenario
