#pragma once

#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vanet/effects.hpp"
#include "vanet/rsu.hpp"

namespace vanet {

struct TaConfig {
  double window = std::numeric_limits<double>::infinity();  ///< 3ME window W
  int malicious_threshold = 3;
  double vicinity_radius = 600.0;
};

struct HistoryEntry {
  SimTime time = 0.0;
  double amount = 0.0;
  EventId event_id{};
  Decision ruling = Decision::Unresolved;
};

struct DriverRecord {
  DriverId driver_id{};
  EntityId vehicle_id{};
  std::vector<HistoryEntry> history;
  std::vector<std::pair<SimTime, EventId>> malicious_events;
  bool blocked = false;
  std::optional<SimTime> blocked_at;
  std::string block_reason;
  bool acked = false;
};

struct IncidentRecord {
  EventId event_id{};
  Vec2 location;
  SimTime timestamp = 0.0;
  std::optional<EventType> incident_type;
  std::optional<Decision> ruling;
};

/// True iff some window of length `window` holds at least `threshold` of the
/// (sorted) times.
bool window_exceeds(const std::vector<SimTime>& sorted_times, double window, int threshold);

class TrustAuthority {
 public:
  TrustAuthority(EntityId id, TaConfig cfg, const RsuDirectory& directory);

  EntityId id() const { return id_; }
  const std::map<DriverId, DriverRecord>& drivers() const { return drivers_; }
  const std::map<EventId, IncidentRecord>& incidents() const { return incidents_; }
  bool is_blocked(DriverId driver) const;

  /// False (rejection) for an already registered driver.
  bool register_driver(DriverId driver, EntityId vehicle);

  /// Append a ruling; returns the drivers it newly blocked.
  std::vector<DriverId> record_ruling(const RulingBody& ruling, EventId event, EntityId from_rsu,
                                      SimTime now, Effects& fx);
  void handle_blocking_request(const BlockingBody& request, SimTime now, Effects& fx);
  void unblock(DriverId driver);

  void on_message(const VanetMessage& msg, SimTime now, Effects& fx);
  void write_csv(const std::filesystem::path& dir) const;

 private:
  DriverRecord& record_for(DriverId driver, EntityId vehicle);
  void send_confirmation(const DriverRecord& rec, Vec2 location, EntityId via, SimTime now,
                         Effects& fx);

  EntityId id_;
  TaConfig cfg_;
  const RsuDirectory* dir_;
  std::map<DriverId, DriverRecord> drivers_;
  std::map<EventId, IncidentRecord> incidents_;
  std::uint32_t next_seq_ = 0;
};

}  // namespace vanet
