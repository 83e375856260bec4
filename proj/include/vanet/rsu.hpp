#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vanet/baseline.hpp"
#include "vanet/channel.hpp"
#include "vanet/effects.hpp"
#include "vanet/message.hpp"
#include "vanet/vehicle.hpp"

namespace vanet {

struct RsuConfig {
  Protocol protocol = Protocol::Proposed;
  double collaboration_timer = 120.0;
  double rsu_reward = 0.08;
  std::vector<double> ipp = {0.1, 0.3, 0.5};
  bool share_high = true;
  bool share_mid = false;
  double neighbor_radius = 1000.0;
  double reannounce_interval = 0.0;  ///< 0 disables periodic re-announcement
  int retransmit_limit = 2;
  double retransmit_interval = 10.0;
  int hop_limit = 4;
  double confirmation_repeat = 10.0;
  int confirmation_repeats = 2;
  double reputation_interval = 60.0;
  double reputation_initial = 0.5;
  double reputation_step = 0.01;
  double reputation_cap = 0.9;
};

/// Static infrastructure facts every RSU is provisioned with.
struct RsuDirectory {
  std::vector<RadioNode> rsus;
  EntityId ta = kNoEntity;
  std::vector<EntityId> officials;
  std::map<std::string, Vec2> services;

  /// RSU nearest to `location` (lowest id on ties): owner of disputes there.
  EntityId owner_for(Vec2 location) const;
  std::optional<Vec2> position_of(EntityId rsu) const;
};

struct FeedbackEntry {
  int vote = 0;
  double trust = 0.0;  ///< snapshot at feedback receipt
  EntityId clarifier{};
  DriverId driver{};
};

/// Eq. score = sum of vote * trust.
double vote_score(const std::vector<FeedbackEntry>& entries);
/// Positive: true, negative: false, zero: unresolved.
Decision decision_for(double score);

struct DisputeCase {
  EventId event_id{};
  MessageId disputed{};
  Vec2 location;
  Party sender;
  std::vector<Party> reporters;
  std::vector<FeedbackEntry> feedback;
  SimTime opened_at = 0.0;
  SimTime deadline = 0.0;
  Decision state = Decision::Collecting;
  std::string label;
  bool referred = false;

  bool participant(EntityId vehicle) const;
};

class PunishmentLedger {
 public:
  explicit PunishmentLedger(std::vector<double> ipp) : ipp_(std::move(ipp)) {}
  std::size_t offenses(DriverId driver) const;
  /// Magnitude for the driver's next offense; records it.
  double next(DriverId driver);
  void record(DriverId driver, double magnitude) { history_[driver].push_back(magnitude); }
  const std::vector<double>& history(DriverId driver) const;

 private:
  std::vector<double> ipp_;
  std::map<DriverId, std::vector<double>> history_;
};

class RsuNode {
 public:
  RsuNode(EntityId id, Vec2 position, const RsuConfig& cfg, const RsuDirectory& directory);

  EntityId id() const { return id_; }
  Vec2 position() const { return position_; }
  const std::map<EventId, DisputeCase>& disputes() const { return disputes_; }
  const std::set<EventId>& unresolved() const { return unresolved_; }
  const PunishmentLedger& ledger() const { return ledger_; }
  std::size_t reannouncing() const { return reannounce_.size(); }

  void start(SimTime now, Effects& fx);
  void on_message(const VanetMessage& msg, bool wired, SimTime now, Effects& fx);
  void on_timer(TimerKind kind, std::uint64_t key, SimTime now, Effects& fx);

  void handle_event_announcement(const VanetMessage& msg, SimTime now, Effects& fx);
  /// Opens a case, or adds the reporter to an existing one. Returns nullptr
  /// when the report is forwarded to the owning RSU instead.
  DisputeCase* open_dispute(const VanetMessage& report, SimTime now, Effects& fx);
  void collect_feedback(const VanetMessage& fb, SimTime now, Effects& fx);
  void decide(DisputeCase& c, SimTime now, Effects& fx);
  void rew_pun_gen(DisputeCase& c, Decision decision, DecisionMethod method, double score,
                   SimTime now, Effects& fx);
  VanetMessage handle_service_query(const VanetMessage& query, SimTime now);

 private:
  VanetMessage make(MessageKind kind, SimTime now);
  void notify_peers(MessageKind kind, const VanetMessage& msg, Effects& fx);
  void on_sorted(const VanetMessage& msg, SimTime now, Effects& fx);

  EntityId id_;
  Vec2 position_;
  const RsuConfig* cfg_;
  const RsuDirectory* dir_;
  std::uint32_t next_seq_ = 0;

  std::set<MessageId> processed_;
  std::set<EventId> known_events_;
  std::set<EventId> shared_events_;
  std::map<EventId, VanetMessage> reannounce_;
  std::set<EventId> sorted_;
  std::map<EventId, std::pair<VanetMessage, int>> sorted_repeats_;
  std::map<EventId, DisputeCase> disputes_;
  std::set<EventId> handled_;  ///< disputes opened anywhere in the network
  std::set<EventId> unresolved_;
  PunishmentLedger ledger_;
  std::map<std::uint64_t, std::pair<VanetMessage, int>> confirmations_;
  std::set<DriverId> acked_;
  baseline::ReputationTable reputations_;
};

}  // namespace vanet
