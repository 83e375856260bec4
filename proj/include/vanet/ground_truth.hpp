#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vanet/message.hpp"
#include "vanet/types.hpp"

namespace vanet {

struct EventRecord {
  EventId event_id{};
  EventType event_type = EventType::Accident;
  Vec2 location;
  SimTime observed_at = 0.0;
  std::optional<SimTime> announced_at;
  bool real = true;  ///< false for fabricated claims
  bool resolved = false;
  std::string label;
};

/// Oracle registry of every event the run knows about: real incidents and
/// the fabricated ones announced by attackers. Truthful agents consult it.
class GroundTruth {
 public:
  EventId register_event(EventType type, Vec2 location, SimTime observed_at, bool real,
                         std::string label = {});

  const EventRecord* find(EventId id) const;
  bool is_real(EventId id) const;
  void mark_announced(EventId id, SimTime when);
  void resolve(EventId id);

  /// Unresolved sites visitable at `now`: real events since their
  /// observation, fabricated ones since their announcement, none older than
  /// `max_age` seconds.
  std::vector<const EventRecord*> active(SimTime now, double max_age) const;
  const std::map<EventId, EventRecord>& all() const { return events_; }

 private:
  std::map<EventId, EventRecord> events_;
  std::uint32_t next_id_ = 1;
};

}  // namespace vanet
