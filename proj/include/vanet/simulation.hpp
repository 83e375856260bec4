#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "vanet/authority.hpp"
#include "vanet/channel.hpp"
#include "vanet/event_queue.hpp"
#include "vanet/ground_truth.hpp"
#include "vanet/logs.hpp"
#include "vanet/mobility.hpp"
#include "vanet/rsu.hpp"
#include "vanet/scenario.hpp"
#include "vanet/vehicle.hpp"

namespace vanet {

struct MessageArrival {
  std::shared_ptr<const VanetMessage> msg;
  EntityId from{};
  bool wired = false;
};
struct TimerFired {
  TimerKind kind = TimerKind::Beacon;
  std::uint64_t key = 0;
};
struct MobilityTick {};
struct AnnouncementDue {
  std::size_t index = 0;  ///< into the vehicle's announce schedule
};
struct EventSourceDue {
  std::size_t source = 0;
  int occurrence = 0;
};
struct VehicleEntry {};
struct ServiceQueryDue {
  std::size_t index = 0;
};

using Deliverable = std::variant<MessageArrival, TimerFired, MobilityTick, AnnouncementDue,
                                 EventSourceDue, VehicleEntry, ServiceQueryDue>;

/// One run: owns every agent, the event queue and the logs.
class Simulation {
 public:
  explicit Simulation(Scenario scenario);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Drain the queue up to `until` (default: scenario duration).
  void run(std::optional<SimTime> until = std::nullopt);

  const Scenario& scenario() const { return scenario_; }
  SimTime now() const { return queue_.now(); }
  std::size_t executed() const { return queue_.executed(); }
  const RunLogs& logs() const { return logs_; }
  const GroundTruth& truth() const { return truth_; }
  const std::vector<VehicleAgent>& vehicles() const { return vehicles_; }
  VehicleAgent& vehicle(EntityId id);
  const std::vector<RsuNode>& rsus() const { return rsus_; }
  const TrustAuthority* authority() const { return ta_ ? &*ta_ : nullptr; }
  const RsuDirectory& directory() const { return directory_; }
  bool present(EntityId vehicle) const;

  /// Entity kind helpers over the numbering: vehicles, then RSUs, then the TA.
  bool is_vehicle(EntityId id) const { return raw(id) < vehicles_.size(); }
  bool is_rsu(EntityId id) const;
  bool is_ta(EntityId id) const { return ta_ && id == ta_->id(); }

  /// Radio broadcast from `sender`; returns the receivers scheduled.
  std::vector<EntityId> broadcast(EntityId sender, const VanetMessage& msg, bool relay);

  /// Administrative redemption: TA record and TPD are reset.
  void admin_unblock(DriverId driver);

 private:
  struct PendingLink {
    EntityId sender{};
    EntityId target{};
    VanetMessage msg;
    SimTime expires = 0.0;
    std::optional<double> trust;
    bool blocked = false;
  };

  Vec2 position_of(EntityId id) const;
  void dispatch(const SimEvent<Deliverable>& ev);
  void deliver(EntityId target, const MessageArrival& arrival);
  void apply(EntityId actor, Effects& fx);
  void send(EntityId actor, Outgoing& out);
  void log_transmission(EntityId sender, std::optional<EntityId> receiver, const VanetMessage& msg,
                        bool relay, std::optional<double> trust = std::nullopt, bool blocked = false);
  std::vector<EntityId> broadcast_stamped(EntityId sender, const VanetMessage& msg, bool relay,
                                          std::optional<double> trust, bool blocked);
  std::optional<EntityId> covering_rsu(Vec2 p) const;
  bool try_uplink(const PendingLink& link);
  bool try_downlink(const PendingLink& link);
  void on_tick();
  void on_event_source(std::size_t source, int occurrence);
  void refresh_positions();

  Scenario scenario_;
  UnitDiskChannel channel_;
  EventQueue<Deliverable> queue_;
  GroundTruth truth_;
  RunLogs logs_;
  std::optional<RoadNetwork> road_;
  RsuDirectory directory_;
  std::vector<VehicleAgent> vehicles_;
  std::vector<bool> present_;
  std::vector<RadioNode> vehicle_nodes_;
  std::vector<RsuNode> rsus_;
  std::optional<TrustAuthority> ta_;
  std::deque<PendingLink> uplinks_;
  std::deque<PendingLink> downlinks_;
};

}  // namespace vanet
