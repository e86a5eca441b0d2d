#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace offload::sim {

/// One line of a run trace.
///
/// CSV layout, one row per line, header included:
///
///     time_ms,kind,entity,fields
///
/// `fields` is a space-separated list of key=value pairs; neither keys nor
/// values contain spaces, commas, or '='. Floating-point values are written
/// with 17 significant digits so that a parsed trace reproduces every number.
struct TraceRow {
  std::int64_t time_ms = 0;
  std::string kind;
  std::string entity;
  std::vector<std::pair<std::string, std::string>> fields;

  TraceRow& add(std::string key, std::string value);
  TraceRow& add(std::string key, double value);
  TraceRow& add(std::string key, std::int64_t value);
  TraceRow& add(std::string key, std::uint64_t value);
  TraceRow& add(std::string key, int value) { return add(std::move(key), static_cast<std::int64_t>(value)); }

  /// Value of `key`, or nullptr.
  const std::string* find(std::string_view key) const;
  const std::string& at(std::string_view key) const;
  double number(std::string_view key) const;

  bool operator==(const TraceRow&) const = default;
};

std::string format_number(double value);

/// Append-only record of a run. Rows may be streamed to a sink as they are
/// appended, retained in memory, or both; a running digest covers every row.
class RunTrace {
public:
  RunTrace() = default;
  explicit RunTrace(std::ostream& sink);

  RunTrace(const RunTrace&) = delete;
  RunTrace& operator=(const RunTrace&) = delete;

  /// Rows whose kind fails the predicate are streamed and hashed but not kept.
  void set_retain_filter(std::function<bool(std::string_view kind)> keep);
  void retain_none();
  /// Rows whose kind fails the predicate are discarded outright: not
  /// streamed, hashed, counted or kept.
  void set_accept_filter(std::function<bool(std::string_view kind)> accept);

  void append(TraceRow row);

  const std::vector<TraceRow>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return count_; }
  std::uint64_t digest() const noexcept { return digest_; }

  static std::string_view header();
  static std::string format_row(const TraceRow& row);
  static TraceRow parse_row(std::string_view line);
  /// Parses a full CSV document including its header.
  static std::vector<TraceRow> parse_csv(std::istream& in);

private:
  std::ostream* sink_ = nullptr;
  std::function<bool(std::string_view)> keep_;
  std::function<bool(std::string_view)> accept_;
  std::vector<TraceRow> rows_;
  std::size_t count_ = 0;
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;
};

}  // namespace offload::sim
