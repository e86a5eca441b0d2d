#include "offload/sim/engine.hpp"

#include <cassert>
#include <string>

namespace offload::sim {

std::uint64_t Engine::schedule(Event event) {
  if (event.time < clock_) {
    throw PastEvent("event at t=" + std::to_string(event.time.ms()) +
                    " scheduled while clock=" + std::to_string(clock_.ms()));
  }
  event.seq = next_seq_++;
  const auto seq = event.seq;
  queue_.push(std::move(event));
  return seq;
}

const RunTrace& Engine::run_until(SimTime t_end) {
  if (t_end < clock_) throw PastEvent("run_until target precedes the clock");
  while (!queue_.empty() && queue_.top().time <= t_end) {
    Event ev = queue_.top();
    queue_.pop();
#ifndef NDEBUG
    assert(!any_dequeued_ || ev.time > last_time_ ||
           (ev.time == last_time_ && ev.seq > last_seq_));
    last_time_ = ev.time;
    last_seq_ = ev.seq;
    any_dequeued_ = true;
#endif
    clock_ = ev.time;
    if (filter_ && !filter_(ev)) continue;
    ++processed_;
    TraceRow row;
    row.time_ms = ev.time.ms();
    row.kind = std::string(to_string(ev.kind));
    row.entity = ev.entity;
    trace_->append(std::move(row));
    if (handler_) handler_(ev);
  }
  clock_ = t_end;
  return *trace_;
}

}  // namespace offload::sim
