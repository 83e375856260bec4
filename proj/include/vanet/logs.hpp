#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vanet/message.hpp"
#include "vanet/trust.hpp"
#include "vanet/types.hpp"

namespace vanet {

/// One transmission. The CSV row carries the public columns; the remaining
/// fields feed the post-run auditors.
struct TransmissionRecord {
  SimTime time = 0.0;
  EntityId sender{};
  std::optional<EntityId> receiver;  ///< nullopt: radio broadcast
  MessageKind kind = MessageKind::Beacon;
  MessageId message_id{};
  int hop = 0;
  std::size_t bytes = 0;

  EntityId origin{};
  bool originated = false;  ///< first transmission by the message's origin
  std::optional<EventId> event_id;
  std::optional<EventType> event_type;
  double sender_trust = 0.0;
  bool sender_blocked = false;
  bool sender_is_vehicle = false;
  bool sender_official = false;
};

struct DisputeRecord {
  SimTime time = 0.0;
  EventId event_id{};
  MessageId disputed{};
  EntityId rsu{};
  DecisionMethod method = DecisionMethod::Vote;
  double score = 0.0;
  Decision decision = Decision::Unresolved;
  std::vector<Party> rewarded;
  std::vector<Party> punished;
  std::vector<EntityId> feedback_from;
  SimTime opened_at = 0.0;
};

struct TrustRecord {
  SimTime time = 0.0;
  DriverId driver{};
  EntityId vehicle{};
  double trust = 0.0;
  trust::TrustBand band = trust::TrustBand::Trusted;
  trust::TrustCause cause = trust::TrustCause::Initial;
  double delta = 0.0;
};

/// A receiver acting on an event: first receipt (proposed framework) or
/// buffer decision (baseline).
struct ResponseRecord {
  EntityId receiver{};
  EventId event_id{};
  SimTime injected_at = 0.0;
  SimTime decided_at = 0.0;
};

struct RunLogs {
  std::vector<TransmissionRecord> transmissions;
  std::vector<DisputeRecord> disputes;
  std::vector<TrustRecord> trust;
  std::vector<ResponseRecord> responses;
  std::vector<std::string> diagnostics;

  void write(const std::filesystem::path& dir) const;
};

std::string format_time(SimTime t);
std::string message_log_header();
std::string to_csv(const TransmissionRecord& r);
std::string dispute_log_header();
std::string to_csv(const DisputeRecord& r);
std::string trust_log_header();
std::string to_csv(const TrustRecord& r);

}  // namespace vanet
