#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "vanet/baseline.hpp"
#include "vanet/effects.hpp"
#include "vanet/ground_truth.hpp"
#include "vanet/message.hpp"
#include "vanet/mobility.hpp"
#include "vanet/rng.hpp"
#include "vanet/trust.hpp"

namespace vanet {

enum class VehicleKind { Regular, Police, Ambulance, FireService };
std::string_view to_string(VehicleKind kind);
std::optional<VehicleKind> vehicle_kind_from_string(std::string_view name);
inline bool is_official(VehicleKind kind) { return kind != VehicleKind::Regular; }

enum class Protocol { Proposed, Baseline };

enum class ReporterMode {
  None,
  Truthful,   ///< reports only announcements the ground truth contradicts
  Malicious,  ///< reports every announcement it is told to
};

enum class ClarifierMode {
  None,
  GroundTruth,
  Probabilistic,  ///< YES with clarifier_yes_probability regardless of truth
  Inverted,
};

struct ScheduledAnnouncement {
  SimTime time = 0.0;
  EventType type = EventType::Accident;
  bool truthful = true;  ///< false: fabricated event
  std::string label;
  std::optional<Vec2> location;  ///< default: the vehicle's position at `time`
  double observation_delay = 0.0;
};

struct BehaviorPolicy {
  ReporterMode reporter = ReporterMode::Truthful;
  double report_probability = 1.0;
  std::vector<std::string> report_labels;  ///< non-empty: only these announcements are reported

  ClarifierMode clarifier = ClarifierMode::GroundTruth;
  double clarifier_yes_probability = 1.0;
  std::vector<std::string> silent_labels;  ///< queries on these announcements go unanswered

  std::vector<ScheduledAnnouncement> announce_schedule;
  bool announce_observed = false;  ///< announce real events the vehicle drives past
  bool attend_events = false;      ///< officials: attend and sort observed real events

  void validate() const;
};

/// Parameters shared by every vehicle of a run.
struct VehicleConfig {
  Protocol protocol = Protocol::Proposed;
  trust::TrustConfig trust;
  int hop_limit = 4;
  int retransmit_limit = 2;
  double retransmit_interval = 10.0;
  double t_int = 120.0;
  double t_dis = 120.0;
  double visit_radius = 50.0;
  double observe_radius = 0.0;  ///< announce_observed trigger; 0: visit_radius
  double beacon_interval = 5.0;
  double sort_duration = 300.0;
  baseline::Scheme baseline_scheme = baseline::Scheme::MajorityVote;
  double baseline_timer = 30.0;
  double baseline_initial_reputation = 0.5;
};

/// Sites passed during one mobility step.
struct Sighting {
  std::vector<EventId> visited;   ///< within visit_radius
  std::vector<EventId> observed;  ///< within the observation radius
  bool empty() const { return visited.empty() && observed.empty(); }
};

class VehicleAgent {
 public:
  VehicleAgent(EntityId id, VehicleKind kind, Mobility mobility, BehaviorPolicy policy,
               double initial_trust, const VehicleConfig& cfg, RngStream rng);

  EntityId id() const { return id_; }
  VehicleKind kind() const { return kind_; }
  bool official() const { return is_official(kind_); }
  const BehaviorPolicy& policy() const { return policy_; }
  Vec2 position() const { return mobility_.position(); }
  double speed() const { return mobility_.speed(); }
  DriverId driver() const;
  double trust() const;
  bool blocked() const;
  const trust::Tpd* tpd() const { return tpd_ ? &*tpd_ : nullptr; }
  trust::Tpd* tpd() { return tpd_ ? &*tpd_ : nullptr; }
  const std::map<EventId, SimTime>& recent_visits() const { return visits_; }
  bool has_seen(MessageId id) const { return seen_.contains(id); }

  /// Timers the vehicle needs from the start of the run.
  void start(SimTime now, Effects& fx);

  /// Originate an announcement for `event` if the sender-side gate allows.
  std::optional<VanetMessage> announce_event(const EventRecord& event, SimTime now, Effects& fx);

  std::optional<VanetMessage> maybe_report_untrue(const VanetMessage& received, SimTime now,
                                                  const GroundTruth& truth, Effects& fx);

  std::optional<VanetMessage> answer_clarification(const VanetMessage& query, SimTime now,
                                                   const GroundTruth& truth, Effects& fx);

  /// Move by dt and record visits to active event sites.
  Sighting step_mobility(double dt, SimTime now, const std::vector<const EventRecord*>& active);

  /// Mobility step plus everything a visit unlocks (deferred reports and
  /// answers, official inspections, observed announcements).
  void tick(double dt, SimTime now, const GroundTruth& truth,
            const std::vector<const EventRecord*>& active, Effects& fx);

  /// Everything a visit unlocks, for sites returned by step_mobility.
  void process_visits(const Sighting& sighting, SimTime now, const GroundTruth& truth,
                      Effects& fx);

  void on_message(const VanetMessage& msg, SimTime now, const GroundTruth& truth, Effects& fx);
  void on_timer(TimerKind kind, std::uint64_t key, SimTime now, const GroundTruth& truth,
                Effects& fx);

  void switch_driver(DriverId driver, SimTime now, Effects& fx);
  void service_query(const std::string& service, SimTime now, Effects& fx);

 private:
  struct PendingReport {
    VanetMessage announcement;
    SimTime deadline = 0.0;
  };
  struct PendingQuery {
    VanetMessage query;
  };
  struct Inspection {
    VanetMessage referral;
  };

  MessageId next_id();
  void radio(Effects& fx, VanetMessage msg, bool relay = false) const;
  void uplink(Effects& fx, VanetMessage msg) const;
  VanetMessage make(MessageKind kind, SimTime now);
  bool visited_within(EventId event, SimTime now, double window) const;
  void relay(const VanetMessage& msg, SimTime now, Effects& fx);
  void record_trust(const trust::TrustUpdate& update, Effects& fx);
  std::optional<int> vote_for(const VanetMessage& query, const GroundTruth& truth);
  std::optional<VanetMessage> emit_report(const VanetMessage& announcement, SimTime now,
                                          Effects& fx);
  std::optional<VanetMessage> emit_feedback(const VanetMessage& query, SimTime now,
                                            const GroundTruth& truth, Effects& fx);
  void on_announcement(const VanetMessage& msg, SimTime now, const GroundTruth& truth,
                       Effects& fx);
  void on_baseline_announcement(const VanetMessage& msg, SimTime now, Effects& fx);
  void on_visit(EventId event, SimTime now, const GroundTruth& truth, Effects& fx);
  void on_observe(EventId event, SimTime now, const GroundTruth& truth, Effects& fx);

  EntityId id_;
  VehicleKind kind_;
  Mobility mobility_;
  BehaviorPolicy policy_;
  const VehicleConfig* cfg_;
  RngStream rng_;
  std::optional<trust::Tpd> tpd_;
  std::uint32_t next_seq_ = 0;

  std::unordered_set<MessageId> seen_;
  std::unordered_set<MessageId> relayed_untrue_for_;
  std::set<MessageId> report_decided_;
  std::set<EventId> responded_;
  std::set<EventId> announced_events_;
  std::map<EventId, SimTime> visits_;
  std::map<MessageId, VanetMessage> own_messages_;
  std::map<MessageId, int> retransmits_;
  std::map<MessageId, PendingReport> pending_reports_;
  std::map<MessageId, PendingQuery> pending_queries_;
  std::set<MessageId> answered_queries_;
  std::map<MessageId, Inspection> inspections_;
  std::set<EventId> attended_;
  std::map<EventId, baseline::EventBuffer> buffers_;
  double reputation_ = 0.0;
};

}  // namespace vanet
