#include "offload/sim/trace.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "offload/sim/rng.hpp"

namespace offload::sim {

namespace {

void check_token(std::string_view s, bool allow_equals) {
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\n' || c == '\r' || (!allow_equals && c == '=')) {
      throw std::invalid_argument("trace token contains a reserved character: " + std::string(s));
    }
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

TraceRow& TraceRow::add(std::string key, std::string value) {
  check_token(key, false);
  check_token(value, false);
  fields.emplace_back(std::move(key), std::move(value));
  return *this;
}

TraceRow& TraceRow::add(std::string key, double value) { return add(std::move(key), format_number(value)); }

TraceRow& TraceRow::add(std::string key, std::int64_t value) {
  return add(std::move(key), std::to_string(value));
}

TraceRow& TraceRow::add(std::string key, std::uint64_t value) {
  return add(std::move(key), std::to_string(value));
}

const std::string* TraceRow::find(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& TraceRow::at(std::string_view key) const {
  if (const auto* v = find(key)) return *v;
  throw std::out_of_range("trace row has no field " + std::string(key));
}

double TraceRow::number(std::string_view key) const {
  const std::string& v = at(key);
  return std::stod(v);
}

RunTrace::RunTrace(std::ostream& sink) : sink_(&sink) { *sink_ << header() << '\n'; }

void RunTrace::set_retain_filter(std::function<bool(std::string_view)> keep) { keep_ = std::move(keep); }

void RunTrace::retain_none() {
  keep_ = [](std::string_view) { return false; };
}

void RunTrace::set_accept_filter(std::function<bool(std::string_view kind)> accept) {
  accept_ = std::move(accept);
}

void RunTrace::append(TraceRow row) {
  if (accept_ && !accept_(row.kind)) return;
  std::string line = format_row(row);
  digest_ = fnv1a64(line, digest_);
  digest_ = fnv1a64("\n", digest_);
  ++count_;
  if (sink_) *sink_ << line << '\n';
  if (!keep_ || keep_(row.kind)) rows_.push_back(std::move(row));
}

std::string_view RunTrace::header() { return "time_ms,kind,entity,fields"; }

std::string RunTrace::format_row(const TraceRow& row) {
  check_token(row.kind, false);
  check_token(row.entity, true);
  std::string out = std::to_string(row.time_ms);
  out += ',';
  out += row.kind;
  out += ',';
  out += row.entity;
  out += ',';
  bool first = true;
  for (const auto& [k, v] : row.fields) {
    if (!first) out += ' ';
    first = false;
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

TraceRow RunTrace::parse_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  TraceRow row;
  std::size_t c1 = line.find(',');
  std::size_t c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
  std::size_t c3 = c2 == std::string_view::npos ? c2 : line.find(',', c2 + 1);
  if (c3 == std::string_view::npos) throw std::runtime_error("malformed trace row: " + std::string(line));
  auto t = line.substr(0, c1);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), row.time_ms);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw std::runtime_error("malformed trace time: " + std::string(t));
  }
  row.kind = std::string(line.substr(c1 + 1, c2 - c1 - 1));
  row.entity = std::string(line.substr(c2 + 1, c3 - c2 - 1));
  std::string_view rest = line.substr(c3 + 1);
  while (!rest.empty()) {
    std::size_t sp = rest.find(' ');
    std::string_view tok = rest.substr(0, sp);
    std::size_t eq = tok.find('=');
    if (eq == std::string_view::npos) throw std::runtime_error("malformed trace field: " + std::string(tok));
    row.fields.emplace_back(std::string(tok.substr(0, eq)), std::string(tok.substr(eq + 1)));
    if (sp == std::string_view::npos) break;
    rest = rest.substr(sp + 1);
  }
  return row;
}

std::vector<TraceRow> RunTrace::parse_csv(std::istream& in) {
  std::vector<TraceRow> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header()) throw std::runtime_error("unexpected trace header: " + line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_row(line));
  }
  return rows;
}

}  // namespace offload::sim
