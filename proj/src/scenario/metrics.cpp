#include "offload/scenario/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

namespace offload::scenario {

namespace {

bool is_failure(const std::string& outcome) {
  return outcome == "rejected" || outcome == "dropped" || outcome == "expired";
}

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct VehicleAcc {
  VehicleStats stats;
  double rebids = 0.0;
  double price = 0.0;
  double backoff = 0.0;
};

}  // namespace

BoxStats box_stats(std::vector<double> values) {
  BoxStats b;
  b.count = values.size();
  if (values.empty()) return b;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  b.mean = sum / static_cast<double>(values.size());
  b.min = values.front();
  b.max = values.back();
  b.q1 = quantile(values, 0.25);
  b.median = quantile(values, 0.5);
  b.q3 = quantile(values, 0.75);
  const double iqr = b.q3 - b.q1;
  b.whisker_lo = b.max;
  b.whisker_hi = b.min;
  for (double v : values) {
    if (v >= b.q1 - 1.5 * iqr) b.whisker_lo = std::min(b.whisker_lo, v);
    if (v <= b.q3 + 1.5 * iqr) b.whisker_hi = std::max(b.whisker_hi, v);
  }
  return b;
}

double compute_ofr(std::span<const sim::TraceRow> rows) {
  int total = 0;
  int failed = 0;
  for (const auto& r : rows) {
    if (r.kind != "request") continue;
    ++total;
    failed += is_failure(r.at("outcome")) ? 1 : 0;
  }
  return total == 0 ? 0.0 : static_cast<double>(failed) / total;
}

double compute_reliability(std::span<const sim::TraceRow> rows) {
  int admitted = 0;
  int done = 0;
  for (const auto& r : rows) {
    if (r.kind != "request") continue;
    const auto& o = r.at("outcome");
    if (o == "completed") ++done;
    if (o == "completed" || o == "dropped") ++admitted;
  }
  return admitted == 0 ? 1.0 : static_cast<double>(done) / admitted;
}

std::vector<VehicleStats> compute_vehicle_stats(std::span<const sim::TraceRow> rows) {
  std::vector<VehicleAcc> acc;
  std::map<std::string, std::size_t> index;
  auto slot = [&](const std::string& id) -> VehicleAcc& {
    auto it = index.find(id);
    if (it != index.end()) return acc[it->second];
    index.emplace(id, acc.size());
    acc.push_back({});
    acc.back().stats.vehicle = id;
    return acc.back();
  };
  for (const auto& r : rows) {
    if (r.kind == "vehicle") {
      slot(r.entity).stats.level = r.at("level");
    } else if (r.kind == "request") {
      auto& a = slot(r.entity);
      if (a.stats.level.empty()) a.stats.level = r.at("budget");
      ++a.stats.requests;
      a.stats.failures += is_failure(r.at("outcome")) ? 1 : 0;
      a.rebids += r.number("rebids");
      a.price += r.number("price_sum");
      a.stats.submissions += static_cast<int>(r.number("submissions"));
      a.backoff += r.number("backoff_ms");
    }
  }
  std::vector<VehicleStats> out;
  for (auto& a : acc) {
    auto s = a.stats;
    if (s.requests > 0) {
      s.ofr = static_cast<double>(s.failures) / s.requests;
      s.mean_rebids = a.rebids / s.requests;
      s.mean_backoff_ms = a.backoff / s.requests;
    }
    if (s.submissions > 0) s.mean_price = a.price / s.submissions;
    out.push_back(std::move(s));
  }
  return out;
}

BoxStats compute_rebidding_stats(std::span<const sim::TraceRow> rows) {
  std::vector<double> means;
  for (const auto& v : compute_vehicle_stats(rows))
    if (v.requests > 0) means.push_back(v.mean_rebids);
  return box_stats(std::move(means));
}

std::vector<SiteUtilization> compute_site_utilization(std::span<const sim::TraceRow> rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> series;
  for (const auto& r : rows) {
    if (r.kind != "util") continue;
    auto [it, fresh] = series.try_emplace(r.entity);
    if (fresh) order.push_back(r.entity);
    it->second.push_back(r.number("util"));
  }
  std::vector<SiteUtilization> out;
  for (const auto& id : order) {
    const auto& xs = series[id];
    SiteUtilization s;
    s.site = id.rfind("site/", 0) == 0 ? id.substr(5) : id;
    s.samples = xs.size();
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(xs.size()));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CdfPoint> compute_individual_ofr_cdf(std::span<const sim::TraceRow> rows) {
  std::map<std::string, std::vector<double>> by_level;
  for (const auto& v : compute_vehicle_stats(rows))
    if (v.requests > 0) by_level[v.level].push_back(v.ofr);
  std::vector<CdfPoint> out;
  for (const char* level : {"high", "low"}) {
    auto it = by_level.find(level);
    if (it == by_level.end()) continue;
    auto xs = it->second;
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i + 1 < xs.size() && xs[i + 1] == xs[i]) continue;
      out.push_back({level, xs[i], static_cast<double>(i + 1) / n});
    }
  }
  return out;
}

std::vector<BackoffGroup> backoff_price_analysis(std::span<const sim::TraceRow> rows) {
  const auto vehicles = compute_vehicle_stats(rows);
  double sum = 0.0;
  int n = 0;
  for (const auto& v : vehicles)
    if (v.submissions > 0) {
      sum += v.mean_price;
      ++n;
    }
  if (n == 0) return {};
  const double overall = sum / n;
  std::map<std::string, std::string> group_of;
  for (const auto& v : vehicles)
    if (v.submissions > 0) group_of[v.vehicle] = v.mean_price < overall ? "low" : "high";

  struct Acc {
    std::map<std::string, bool> vehicles;
    int requests = 0;
    double backoff = 0.0;
  };
  std::map<std::pair<std::string, std::int64_t>, Acc> groups;
  for (const auto& r : rows) {
    if (r.kind != "request") continue;
    auto g = group_of.find(r.entity);
    if (g == group_of.end()) continue;
    auto& a = groups[{g->second, static_cast<std::int64_t>(r.number("deadline"))}];
    a.vehicles[r.entity] = true;
    ++a.requests;
    a.backoff += r.number("backoff_ms");
  }
  std::vector<BackoffGroup> out;
  for (const auto& [key, a] : groups)
    out.push_back({key.first, key.second, static_cast<int>(a.vehicles.size()), a.requests,
                   a.backoff / a.requests});
  return out;
}

RunSummary summarize(std::span<const sim::TraceRow> rows) {
  RunSummary s;
  for (const auto& r : rows) {
    if (r.kind != "request") continue;
    ++s.requests;
    const auto& o = r.at("outcome");
    if (o == "completed") ++s.completed;
    else if (o == "rejected") ++s.rejected;
    else if (o == "dropped") ++s.dropped;
    else if (o == "expired") ++s.expired;
  }
  s.ofr = compute_ofr(rows);
  s.reliability = compute_reliability(rows);
  s.vehicles = compute_vehicle_stats(rows);
  s.rebids = compute_rebidding_stats(rows);
  s.mean_rebids = s.rebids.mean;
  s.sites = compute_site_utilization(rows);
  return s;
}

PairedSummary pair_summaries(RunSummary active, RunSummary passive) {
  PairedSummary p;
  p.delta_ofr = active.ofr - passive.ofr;
  p.delta_reliability = active.reliability - passive.reliability;
  p.delta_mean_rebids = active.mean_rebids - passive.mean_rebids;
  for (const auto& a : active.sites) {
    auto it = std::find_if(passive.sites.begin(), passive.sites.end(),
                           [&](const SiteUtilization& x) { return x.site == a.site; });
    p.delta_util_mean.push_back(it == passive.sites.end() ? a.mean : a.mean - it->mean);
    p.delta_util_std.push_back(it == passive.sites.end() ? a.std : a.std - it->std);
  }
  p.active = std::move(active);
  p.passive = std::move(passive);
  return p;
}

void write_vehicle_csv(std::ostream& out, const RunSummary& s) {
  out << "vehicle,level,requests,failures,ofr,mean_rebids,mean_price,mean_backoff_ms\n";
  for (const auto& v : s.vehicles)
    out << v.vehicle << ',' << v.level << ',' << v.requests << ',' << v.failures << ','
        << sim::format_number(v.ofr) << ',' << sim::format_number(v.mean_rebids) << ','
        << sim::format_number(v.mean_price) << ',' << sim::format_number(v.mean_backoff_ms) << '\n';
}

void write_utilization_csv(std::ostream& out, const RunSummary& s) {
  out << "site,samples,mean,std\n";
  for (const auto& u : s.sites)
    out << u.site << ',' << u.samples << ',' << sim::format_number(u.mean) << ',' << sim::format_number(u.std)
        << '\n';
}

void write_rebids_csv(std::ostream& out, const RunSummary& s) {
  const auto& b = s.rebids;
  out << "statistic,value\n";
  out << "count," << b.count << '\n';
  for (auto [name, v] : {std::pair{"min", b.min}, {"whisker_lo", b.whisker_lo}, {"q1", b.q1}, {"median", b.median},
                         {"mean", b.mean}, {"q3", b.q3}, {"whisker_hi", b.whisker_hi}, {"max", b.max}})
    out << name << ',' << sim::format_number(v) << '\n';
}

void write_cdf_csv(std::ostream& out, const std::vector<CdfPoint>& cdf) {
  out << "level,ofr,cumulative\n";
  for (const auto& p : cdf)
    out << p.level << ',' << sim::format_number(p.ofr) << ',' << sim::format_number(p.cumulative) << '\n';
}

void write_backoff_csv(std::ostream& out, const std::vector<BackoffGroup>& groups) {
  out << "group,deadline_ms,vehicles,requests,mean_backoff_ms\n";
  for (const auto& g : groups)
    out << g.group << ',' << g.deadline_ms << ',' << g.vehicles << ',' << g.requests << ','
        << sim::format_number(g.mean_backoff_ms) << '\n';
}

}  // namespace offload::scenario
