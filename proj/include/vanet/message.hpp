#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "vanet/types.hpp"

namespace vanet {

enum class MessageClass { Low, Mid, High };

enum class EventType {
  Beacon,
  WaveService,
  PoorRoadCondition,
  Debris,
  RoadDefect,
  Accident,
  TrafficJam,
  RoadClosure,
  UntrueAttackReport,
};

MessageClass class_of(EventType type);
std::string_view to_string(EventType type);
std::optional<EventType> event_type_from_string(std::string_view name);

/// Sender-side gate: may a driver with this trust originate this traffic?
bool permitted(EventType type, double trust, bool blocked);

/// Relaying another vehicle's event requires trust above the not-trusted band.
bool forwarding_permitted(double trust, bool blocked);

enum class MessageKind {
  Beacon,
  EventAnnouncement,
  UntrueReport,
  ClarificationQuery,
  Feedback,
  RewardMsg,
  PunishmentMsg,
  BlockingRequest,
  BlockingConfirmation,
  BlockingAck,
  InterRsuNotice,
  ServiceQuery,
  ServiceReply,
  AttendingBy,
  EventSorted,
  LowTrustNotice,
  FarFromEvent,
  UnresolvedUntrue,
  RulingReport,
  ReputationUpdate,
};

std::string_view to_string(MessageKind kind);

/// Event-related traffic for overhead accounting; beacons are excluded.
bool is_event_traffic(MessageKind kind);

enum class Decision { Collecting, DecidedTrue, DecidedFalse, Unresolved };
enum class DecisionMethod { Vote, Official };
std::string_view to_string(Decision decision);
std::string_view to_string(DecisionMethod method);

struct BeaconBody {
  Vec2 position;
};

struct EventBody {
  EventType type = EventType::Accident;
  SimTime observed_at = 0.0;
  DriverId driver{};
  std::string label;
  bool claim = true;        ///< baseline: whether the observer claims the event is real
  double reputation = 0.0;  ///< baseline: sender reputation attached by the sender
};

struct UntrueReportBody {
  MessageId disputed{};
  EntityId sender{};
  DriverId sender_driver{};
  EntityId reporter{};
  DriverId reporter_driver{};
  bool official = false;
  std::string label;
};

struct QueryBody {
  EntityId rsu{};
  MessageId disputed{};
  EntityId sender{};
  std::vector<EntityId> reporters;
  SimTime deadline = 0.0;
  std::string label;
};

struct FeedbackBody {
  EntityId rsu{};
  MessageId disputed{};
  int vote = 0;  ///< +1 YES, -1 NO, 0 unsure
  double trust = 0.0;
  EntityId clarifier{};
  DriverId clarifier_driver{};
  bool official = false;
};

struct AdjustBody {
  EntityId target{};
  DriverId driver{};
  double amount = 0.0;
  MessageId disputed{};
};

struct BlockingBody {
  DriverId driver{};
  EntityId vehicle{};
  EntityId via_rsu = kNoEntity;
};

struct Party {
  EntityId vehicle{};
  DriverId driver{};
  bool official = false;
  friend bool operator==(const Party&, const Party&) = default;
};

enum class NoticeType { DisputeOpened, EventShare, Ruling };

struct RulingBody {
  NoticeType notice = NoticeType::Ruling;
  MessageId disputed{};
  Vec2 location;
  Decision decision = Decision::Collecting;
  DecisionMethod method = DecisionMethod::Vote;
  double score = 0.0;
  std::vector<Party> rewarded;
  std::vector<Party> punished;
  std::vector<double> punishments;
};

struct ServiceBody {
  std::string service;
  std::optional<Vec2> location;
};

struct ReputationBody {
  std::vector<std::pair<DriverId, double>> reputations;
};

using Payload = std::variant<std::monostate, BeaconBody, EventBody, UntrueReportBody, QueryBody,
                             FeedbackBody, AdjustBody, BlockingBody, RulingBody, ServiceBody,
                             ReputationBody>;

struct VanetMessage {
  MessageId id{};
  MessageKind kind = MessageKind::Beacon;
  EntityId origin{};
  EntityId destination = kNoEntity;  ///< kNoEntity: any receiver
  std::optional<EventId> event_id;
  std::optional<Vec2> event_location;
  int hops = 0;  ///< transmissions so far beyond the original
  int hop_limit = 4;
  SimTime created_at = 0.0;
  SimTime injected_at = 0.0;  ///< last non-relay (re)transmission by an originator
  Payload payload;

  template <class Body>
  const Body& body() const
  {
    return std::get<Body>(payload);
  }
};

/// Compact self-describing text record; its length is the logged byte count.
std::string serialize(const VanetMessage& msg);

enum class RelayDecision { Relay, Drop, LowTrustNotice };
std::string_view to_string(RelayDecision decision);

RelayDecision relay_eligible(const VanetMessage& msg, double trust, bool seen_before,
                             bool is_originator);

/// Copy of `msg` one hop further along.
VanetMessage relayed(const VanetMessage& msg);

}  // namespace vanet
