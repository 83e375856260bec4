#include "vanet/message.hpp"

#include <array>
#include <cstdio>

namespace vanet {
namespace {

constexpr double kFloorTrust = 0.05;
constexpr double kForwardThreshold = 0.25;
constexpr double kHighThreshold = 0.5;

void append(std::string& out, const char* key, double v)
{
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s=%.6g;", key, v);
  out += buf;
}

void append(std::string& out, const char* key, unsigned long long v)
{
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s=%llu;", key, v);
  out += buf;
}

void append(std::string& out, const char* key, std::string_view v)
{
  out += key;
  out += '=';
  out += v;
  out += ';';
}

struct BodyWriter {
  std::string& out;

  void operator()(const std::monostate&) const {}
  void operator()(const BeaconBody& b) const
  {
    append(out, "px", b.position.x);
    append(out, "py", b.position.y);
  }
  void operator()(const EventBody& b) const
  {
    append(out, "ty", to_string(b.type));
    append(out, "obs", b.observed_at);
    append(out, "drv", static_cast<unsigned long long>(raw(b.driver)));
    append(out, "cl", static_cast<unsigned long long>(b.claim));
    if (b.reputation != 0.0) append(out, "rep", b.reputation);
  }
  void operator()(const UntrueReportBody& b) const
  {
    append(out, "dsp", static_cast<unsigned long long>(raw(b.disputed)));
    append(out, "snd", static_cast<unsigned long long>(raw(b.sender)));
    append(out, "rpt", static_cast<unsigned long long>(raw(b.reporter)));
  }
  void operator()(const QueryBody& b) const
  {
    append(out, "rsu", static_cast<unsigned long long>(raw(b.rsu)));
    append(out, "dsp", static_cast<unsigned long long>(raw(b.disputed)));
    append(out, "snd", static_cast<unsigned long long>(raw(b.sender)));
    for (EntityId r : b.reporters) append(out, "rpt", static_cast<unsigned long long>(raw(r)));
    append(out, "dl", b.deadline);
  }
  void operator()(const FeedbackBody& b) const
  {
    append(out, "rsu", static_cast<unsigned long long>(raw(b.rsu)));
    append(out, "dsp", static_cast<unsigned long long>(raw(b.disputed)));
    append(out, "f", static_cast<double>(b.vote));
    append(out, "tr", b.trust);
    append(out, "off", static_cast<unsigned long long>(b.official));
  }
  void operator()(const AdjustBody& b) const
  {
    append(out, "tg", static_cast<unsigned long long>(raw(b.target)));
    append(out, "drv", static_cast<unsigned long long>(raw(b.driver)));
    append(out, "amt", b.amount);
  }
  void operator()(const BlockingBody& b) const
  {
    append(out, "drv", static_cast<unsigned long long>(raw(b.driver)));
    append(out, "veh", static_cast<unsigned long long>(raw(b.vehicle)));
  }
  void operator()(const RulingBody& b) const
  {
    append(out, "dsp", static_cast<unsigned long long>(raw(b.disputed)));
    append(out, "dec", to_string(b.decision));
    append(out, "sc", b.score);
    for (const Party& p : b.rewarded) append(out, "rw", static_cast<unsigned long long>(raw(p.vehicle)));
    for (const Party& p : b.punished) append(out, "pn", static_cast<unsigned long long>(raw(p.vehicle)));
  }
  void operator()(const ServiceBody& b) const
  {
    append(out, "svc", b.service);
    if (b.location) {
      append(out, "sx", b.location->x);
      append(out, "sy", b.location->y);
    }
  }
  void operator()(const ReputationBody& b) const
  {
    for (const auto& [driver, rep] : b.reputations) {
      append(out, "d", static_cast<unsigned long long>(raw(driver)));
      append(out, "r", rep);
    }
  }
};

}  // namespace

MessageClass class_of(EventType type)
{
  switch (type) {
    case EventType::Beacon:
    case EventType::WaveService: return MessageClass::Low;
    case EventType::PoorRoadCondition:
    case EventType::Debris:
    case EventType::RoadDefect: return MessageClass::Mid;
    case EventType::Accident:
    case EventType::TrafficJam:
    case EventType::RoadClosure:
    case EventType::UntrueAttackReport: return MessageClass::High;
  }
  return MessageClass::High;
}

namespace {
constexpr std::array<std::pair<EventType, std::string_view>, 9> kEventNames{{
    {EventType::Beacon, "beacon"},
    {EventType::WaveService, "wave_service"},
    {EventType::PoorRoadCondition, "poor_road_condition"},
    {EventType::Debris, "debris"},
    {EventType::RoadDefect, "road_defect"},
    {EventType::Accident, "accident"},
    {EventType::TrafficJam, "traffic_jam"},
    {EventType::RoadClosure, "road_closure"},
    {EventType::UntrueAttackReport, "untrue_attack_report"},
}};
}  // namespace

std::string_view to_string(EventType type)
{
  for (const auto& [t, name] : kEventNames) {
    if (t == type) return name;
  }
  return "?";
}

std::optional<EventType> event_type_from_string(std::string_view name)
{
  for (const auto& [t, n] : kEventNames) {
    if (n == name) return t;
  }
  return std::nullopt;
}

bool permitted(EventType type, double trust, bool blocked)
{
  if (type == EventType::Beacon) return true;
  if (blocked || trust <= kFloorTrust) return false;
  switch (class_of(type)) {
    case MessageClass::Low: return true;
    case MessageClass::Mid: return trust > kForwardThreshold;
    case MessageClass::High: return trust >= kHighThreshold;
  }
  return false;
}

bool forwarding_permitted(double trust, bool blocked)
{
  return !blocked && trust > kForwardThreshold;
}

std::string_view to_string(MessageKind kind)
{
  switch (kind) {
    case MessageKind::Beacon: return "Beacon";
    case MessageKind::EventAnnouncement: return "EventAnnouncement";
    case MessageKind::UntrueReport: return "UntrueReport";
    case MessageKind::ClarificationQuery: return "ClarificationQuery";
    case MessageKind::Feedback: return "Feedback";
    case MessageKind::RewardMsg: return "RewardMsg";
    case MessageKind::PunishmentMsg: return "PunishmentMsg";
    case MessageKind::BlockingRequest: return "BlockingRequest";
    case MessageKind::BlockingConfirmation: return "BlockingConfirmation";
    case MessageKind::BlockingAck: return "BlockingAck";
    case MessageKind::InterRsuNotice: return "InterRsuNotice";
    case MessageKind::ServiceQuery: return "ServiceQuery";
    case MessageKind::ServiceReply: return "ServiceReply";
    case MessageKind::AttendingBy: return "AttendingBy";
    case MessageKind::EventSorted: return "EventSorted";
    case MessageKind::LowTrustNotice: return "LowTrustNotice";
    case MessageKind::FarFromEvent: return "FarFromEvent";
    case MessageKind::UnresolvedUntrue: return "UnresolvedUntrue";
    case MessageKind::RulingReport: return "RulingReport";
    case MessageKind::ReputationUpdate: return "ReputationUpdate";
  }
  return "?";
}

bool is_event_traffic(MessageKind kind)
{
  switch (kind) {
    case MessageKind::Beacon:
    case MessageKind::ServiceQuery:
    case MessageKind::ServiceReply: return false;
    default: return true;
  }
}

std::string_view to_string(Decision decision)
{
  switch (decision) {
    case Decision::Collecting: return "collecting";
    case Decision::DecidedTrue: return "true";
    case Decision::DecidedFalse: return "false";
    case Decision::Unresolved: return "unresolved";
  }
  return "?";
}

std::string_view to_string(DecisionMethod method)
{
  return method == DecisionMethod::Vote ? "vote" : "official";
}

std::string serialize(const VanetMessage& msg)
{
  std::string out;
  out.reserve(96);
  append(out, "k", to_string(msg.kind));
  append(out, "id", static_cast<unsigned long long>(raw(msg.id)));
  append(out, "o", static_cast<unsigned long long>(raw(msg.origin)));
  if (msg.destination != kNoEntity) {
    append(out, "to", static_cast<unsigned long long>(raw(msg.destination)));
  }
  if (msg.event_id) append(out, "ev", static_cast<unsigned long long>(raw(*msg.event_id)));
  if (msg.event_location) {
    append(out, "ex", msg.event_location->x);
    append(out, "ey", msg.event_location->y);
  }
  append(out, "h", static_cast<unsigned long long>(msg.hops));
  append(out, "hl", static_cast<unsigned long long>(msg.hop_limit));
  append(out, "t", msg.created_at);
  std::visit(BodyWriter{out}, msg.payload);
  return out;
}

std::string_view to_string(RelayDecision decision)
{
  switch (decision) {
    case RelayDecision::Relay: return "relay";
    case RelayDecision::Drop: return "drop";
    case RelayDecision::LowTrustNotice: return "low_trust";
  }
  return "?";
}

RelayDecision relay_eligible(const VanetMessage& msg, double trust, bool seen_before,
                             bool is_originator)
{
  if (seen_before || is_originator) return RelayDecision::Drop;
  if (trust <= kFloorTrust) return RelayDecision::Drop;
  if (trust <= kForwardThreshold) return RelayDecision::LowTrustNotice;
  if (msg.hops >= msg.hop_limit) return RelayDecision::Drop;
  return RelayDecision::Relay;
}

VanetMessage relayed(const VanetMessage& msg)
{
  VanetMessage copy = msg;
  ++copy.hops;
  return copy;
}

}  // namespace vanet
