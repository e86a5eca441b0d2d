#include "offload/workload/mobility.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "offload/sim/trace.hpp"
#include "offload/workload/latency.hpp"

namespace offload::workload {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "1" || s == "true" || s == "True" || s == "TRUE") {
    out = true;
    return true;
  }
  if (s == "0" || s == "false" || s == "False" || s == "FALSE") {
    out = false;
    return true;
  }
  return false;
}

}  // namespace

std::vector<MobilitySample> parse_mobility_trace(std::istream& in) {
  std::vector<MobilitySample> out;
  std::string line;
  std::size_t lineno = 0;
  // empty input: no header, no samples
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  if (in.eof() && line.find_first_not_of(" \t\r") == std::string::npos) return out;

  const auto header = split_csv(line);
  const char* required[] = {"time_ms", "vehicle_id", "distance_m", "present"};
  std::size_t col[4];
  std::string missing;
  for (int i = 0; i < 4; ++i) {
    auto it = std::find(header.begin(), header.end(), required[i]);
    if (it == header.end()) {
      if (!missing.empty()) missing += ", ";
      missing += required[i];
    } else {
      col[i] = static_cast<std::size_t>(it - header.begin());
    }
  }
  if (!missing.empty()) throw SchemaError("mobility trace is missing columns: " + missing);

  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv(line);
    if (cells.size() != header.size()) throw ParseError(lineno, "expected " + std::to_string(header.size()) + " columns");
    MobilitySample s;
    const std::string& t = cells[col[0]];
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), s.time_ms);
    if (ec != std::errc() || p != t.data() + t.size() || s.time_ms < 0) {
      throw ParseError(lineno, "bad time_ms '" + t + "'");
    }
    s.vehicle_id = cells[col[1]];
    if (s.vehicle_id.empty()) throw ParseError(lineno, "empty vehicle_id");
    try {
      std::size_t used = 0;
      s.distance_m = std::stod(cells[col[2]], &used);
      if (used != cells[col[2]].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad distance_m '" + cells[col[2]] + "'");
    }
    if (!parse_bool(cells[col[3]], s.present)) throw ParseError(lineno, "bad present '" + cells[col[3]] + "'");
    if (s.present && (!(s.distance_m >= 0.0) || s.distance_m > kCoverageRadiusM)) {
      throw SchemaError("line " + std::to_string(lineno) + ": distance " + cells[col[2]] +
                        " m outside the 65 m coverage radius");
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const MobilitySample& a, const MobilitySample& b) {
    if (a.time_ms != b.time_ms) return a.time_ms < b.time_ms;
    return a.vehicle_id < b.vehicle_id;
  });
  return out;
}

std::vector<MobilitySample> load_mobility_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mobility trace " + path.string());
  return parse_mobility_trace(in);
}

void write_mobility_trace(std::ostream& out, const std::vector<MobilitySample>& samples) {
  out << "time_ms,vehicle_id,distance_m,present\n";
  for (const auto& s : samples) {
    out << s.time_ms << ',' << s.vehicle_id << ',' << sim::format_number(s.distance_m) << ','
        << (s.present ? 1 : 0) << '\n';
  }
}

std::vector<MobilitySample> generate_junction_trace(const JunctionParams& params, sim::RngStream& rng) {
  struct Car {
    std::string id;
    int approach;        // 0..3; even approaches share a green phase
    double position_m;   // signed: positive on approach, negative once past the centre
    bool done = false;
  };
  const double speed_m_per_ms = params.speed_kmh / 3.6 / 1000.0;
  std::vector<Car> cars;
  std::vector<MobilitySample> out;
  std::int64_t next_spawn = 0;
  int serial = 0;
  for (std::int64_t t = 0; t <= params.duration_ms; t += params.sample_ms) {
    while (next_spawn <= t) {
      cars.push_back(Car{"car" + std::to_string(serial++), static_cast<int>(rng.index(4)), kCoverageRadiusM});
      next_spawn += params.spawn_interval_ms;
    }
    const bool ns_green = (t / params.green_ms) % 2 == 0;
    for (auto& c : cars) {
      if (c.done) continue;
      const bool green = (c.approach % 2 == 0) == ns_green;
      double step = speed_m_per_ms * static_cast<double>(params.sample_ms);
      double next = c.position_m - step;
      if (!green && c.position_m >= params.stop_line_m) next = std::max(next, params.stop_line_m);
      c.position_m = next;
      double dist = std::fabs(c.position_m);
      if (c.position_m < 0.0 && dist >= kCoverageRadiusM) {
        out.push_back({t, c.id, kCoverageRadiusM, false});
        c.done = true;
      } else {
        out.push_back({t, c.id, std::min(dist, kCoverageRadiusM), true});
      }
    }
    std::erase_if(cars, [](const Car& c) { return c.done; });
  }
  return out;
}

}  // namespace offload::workload
