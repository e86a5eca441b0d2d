#include "offload/sim/event.hpp"

namespace offload::sim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ServiceArrival: return "ServiceArrival";
    case EventKind::BidSubmission: return "BidSubmission";
    case EventKind::AuctionClear: return "AuctionClear";
    case EventKind::AssignmentDispatch: return "AssignmentDispatch";
    case EventKind::ExecutionComplete: return "ExecutionComplete";
    case EventKind::DeadlineExpiry: return "DeadlineExpiry";
    case EventKind::UtilizationReportArrival: return "UtilizationReportArrival";
    case EventKind::FeedbackDelivery: return "FeedbackDelivery";
    case EventKind::BackoffExpiry: return "BackoffExpiry";
  }
  return "Unknown";
}

namespace {

bool payload_matches(EventKind kind, const EventPayload& p) {
  switch (kind) {
    case EventKind::ServiceArrival:
    case EventKind::FeedbackDelivery:
      return std::holds_alternative<VehiclePayload>(p);
    case EventKind::BidSubmission:
    case EventKind::BackoffExpiry:
    case EventKind::DeadlineExpiry:
      return std::holds_alternative<RequestPayload>(p);
    case EventKind::AssignmentDispatch:
      return std::holds_alternative<DispatchPayload>(p);
    case EventKind::ExecutionComplete:
      return std::holds_alternative<SiteWakePayload>(p);
    case EventKind::UtilizationReportArrival:
      return std::holds_alternative<ReportPayload>(p);
    case EventKind::AuctionClear:
      return std::holds_alternative<RoundPayload>(p);
  }
  return false;
}

}  // namespace

Event make_event(SimTime time, EventKind kind, std::string entity, EventPayload payload) {
  if (!payload_matches(kind, payload)) {
    throw InvalidEvent("payload does not match event kind " + std::string(to_string(kind)));
  }
  if (entity.empty()) throw InvalidEvent("event entity must be non-empty");
  for (char c : entity) {
    if (c == ',' || c == '\n') throw InvalidEvent("event entity contains a separator");
  }
  Event e;
  e.time = time;
  e.kind = kind;
  e.entity = std::move(entity);
  e.payload = payload;
  return e;
}

}  // namespace offload::sim
