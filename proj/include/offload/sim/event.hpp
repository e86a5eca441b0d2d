#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "offload/sim/time.hpp"

namespace offload::sim {

/// One arrow of the offloading message sequence.
enum class EventKind : std::uint8_t {
  ServiceArrival,
  BidSubmission,
  AuctionClear,
  AssignmentDispatch,
  ExecutionComplete,
  DeadlineExpiry,
  UtilizationReportArrival,
  FeedbackDelivery,
  BackoffExpiry,
};

std::string_view to_string(EventKind kind);

struct VehiclePayload {
  std::uint32_t vehicle = 0;
};
struct RequestPayload {
  std::uint64_t request = 0;
};
struct DispatchPayload {
  std::uint64_t request = 0;
  std::uint32_t site = 0;
};
struct SiteWakePayload {
  std::uint32_t site = 0;
  std::uint64_t generation = 0;
};
struct ReportPayload {
  std::uint32_t site = 0;
  std::uint64_t report = 0;
};
struct RoundPayload {
  std::uint64_t round = 0;
};

using EventPayload = std::variant<VehiclePayload, RequestPayload, DispatchPayload,
                                  SiteWakePayload, ReportPayload, RoundPayload>;

class InvalidEvent : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A scheduled occurrence. The payload alternative must match the kind; this is
/// checked when the event is built with make_event.
struct Event {
  SimTime time;
  EventKind kind = EventKind::ServiceArrival;
  std::string entity;
  EventPayload payload;
  std::uint64_t seq = 0;  // assigned by the engine
};

Event make_event(SimTime time, EventKind kind, std::string entity, EventPayload payload);

}  // namespace offload::sim
