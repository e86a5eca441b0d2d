#pragma once

#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "offload/sim/event.hpp"
#include "offload/sim/trace.hpp"

namespace offload::sim {

class PastEvent : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Single-threaded discrete-event loop. Events are dequeued in (time, seq)
/// order; seq is the insertion counter, so simultaneous events run in the
/// order they were scheduled.
class Engine {
public:
  using Handler = std::function<void(const Event&)>;
  /// Returns false for superseded events (for example a stale wake-up); those
  /// are dropped without being handled or traced.
  using Filter = std::function<bool(const Event&)>;

  explicit Engine(RunTrace& trace) : trace_(&trace) {}

  void set_handler(Handler handler) { handler_ = std::move(handler); }
  void set_filter(Filter filter) { filter_ = std::move(filter); }

  /// Enqueues the event and returns its sequence number.
  std::uint64_t schedule(Event event);

  /// Processes every event with time <= t_end, then sets the clock to t_end.
  const RunTrace& run_until(SimTime t_end);

  SimTime now() const noexcept { return clock_; }
  std::size_t pending() const noexcept { return queue_.size(); }
  std::uint64_t processed() const noexcept { return processed_; }

private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  RunTrace* trace_;
  Handler handler_;
  Filter filter_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  SimTime clock_{};
  std::uint64_t next_seq_ = 0;
  std::uint64_t processed_ = 0;
#ifndef NDEBUG
  SimTime last_time_{};
  std::uint64_t last_seq_ = 0;
  bool any_dequeued_ = false;
#endif
};

}  // namespace offload::sim
