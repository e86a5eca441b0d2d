#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "offload/sim/rng.hpp"

namespace offload::workload {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class SchemaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Position of one vehicle relative to the access point at one instant.
struct MobilitySample {
  std::int64_t time_ms = 0;
  std::string vehicle_id;
  double distance_m = 0.0;
  bool present = false;

  bool operator==(const MobilitySample&) const = default;
};

/// Reads a CSV with header `time_ms,vehicle_id,distance_m,present` (columns
/// in any order, extra columns ignored). Samples are returned sorted by
/// (time_ms, vehicle_id), which keeps each vehicle's samples time-ordered.
std::vector<MobilitySample> load_mobility_trace(const std::filesystem::path& path);
std::vector<MobilitySample> parse_mobility_trace(std::istream& in);

void write_mobility_trace(std::ostream& out, const std::vector<MobilitySample>& samples);

/// Parameters of the synthetic four-way junction generator.
struct JunctionParams {
  std::int64_t duration_ms = 120'000;
  std::int64_t sample_ms = 100;
  std::int64_t spawn_interval_ms = 2200;
  double speed_kmh = 10.0;
  std::int64_t green_ms = 20'000;
  double stop_line_m = 5.0;
};

/// Vehicles enter at the coverage edge on one of four approaches, drive
/// towards the junction, wait at the stop line while their approach is red,
/// cross, and leave once they are 65 m out again (a final present=0 sample).
std::vector<MobilitySample> generate_junction_trace(const JunctionParams& params, sim::RngStream& rng);

}  // namespace offload::workload
