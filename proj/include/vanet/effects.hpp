#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vanet/logs.hpp"
#include "vanet/message.hpp"
#include "vanet/trust.hpp"

namespace vanet {

enum class TimerKind {
  RewardRelease,
  BlockingCheck,
  Retransmit,
  Beacon,
  DisputeDeadline,
  Reannounce,
  SortedRepeat,
  ConfirmationRepeat,
  BaselineDecision,
  ReputationBroadcast,
  SortEvent,
};

/// How an outgoing message leaves its entity.
enum class Route {
  Radio,     ///< unit-disk broadcast from the sender's position
  Wired,     ///< point-to-point over the RSU/TA backbone
  Uplink,    ///< radio, held until an RSU is within range
  Downlink,  ///< backbone to whichever RSU covers the target vehicle, then radio
};

struct Outgoing {
  Route route = Route::Radio;
  VanetMessage msg;
  EntityId to = kNoEntity;  ///< Wired/Downlink target
  bool relay = false;       ///< forwarding someone else's message
  std::optional<double> sender_trust;  ///< vehicle trust when the send was decided
  bool sender_blocked = false;
};

struct TimerRequest {
  SimTime at = 0.0;
  TimerKind kind = TimerKind::Beacon;
  std::uint64_t key = 0;
};

/// Side effects requested by an agent handler; the simulation applies them.
struct Effects {
  std::vector<Outgoing> sends;
  std::vector<TimerRequest> timers;
  std::vector<trust::TrustUpdate> trust;
  std::vector<DisputeRecord> rulings;
  std::vector<ResponseRecord> responses;
  std::vector<EventId> resolved;
  std::vector<std::string> diagnostics;

  void radio(VanetMessage msg, bool relay = false) { push(Route::Radio, std::move(msg), kNoEntity, relay); }
  void wired(EntityId to, VanetMessage msg) { push(Route::Wired, std::move(msg), to, false); }
  void uplink(VanetMessage msg) { push(Route::Uplink, std::move(msg), kNoEntity, false); }
  void downlink(EntityId vehicle, VanetMessage msg) { push(Route::Downlink, std::move(msg), vehicle, false); }
  void at(SimTime when, TimerKind kind, std::uint64_t key = 0) { timers.push_back({when, kind, key}); }

 private:
  void push(Route route, VanetMessage msg, EntityId to, bool relay)
  {
    Outgoing out;
    out.route = route;
    out.msg = std::move(msg);
    out.to = to;
    out.relay = relay;
    sends.push_back(std::move(out));
  }
};

}  // namespace vanet
