#pragma once

#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "vanet/types.hpp"

namespace vanet::trust {

inline constexpr double kOfficialTrust = 1.0;

struct TrustConfig {
  double floor = 0.05;  ///< both the clamp floor and the blocking trigger
  double cap = 0.9;
  double initial_trust = 0.45;
  double withhold_duration = 120.0;
  double blocking_check_period = 10.0;
  double beacon_reward = 0.005;
  double forward_reward = 0.01;
  double clarify_reward = 0.02;
  double report_reward = 0.02;
};

enum class TrustBand { Blocked, NotTrusted, LowlyTrusted, Trusted, HighlyTrusted };

TrustBand classify(double trust, const TrustConfig& cfg = {});
std::string_view to_string(TrustBand band);

/// Location and timing quality of one announcement, measured by the TPD.
struct AnnouncementMetrics {
  double pos_diff = 0.0;  ///< meters between the event and the announcing vehicle
  double delay = 0.0;     ///< seconds from observation to announcement
};

struct RewardAssessment {
  double amount = 0.0;
  bool long_delayed = false;
};

/// Tier lookup on both metrics; the worse (lower-reward) tier wins.
RewardAssessment assess_reward(const AnnouncementMetrics& metrics);

struct PendingReward {
  MessageId message_id{};
  double amount = 0.0;
  SimTime release_time = 0.0;
  bool long_delayed = false;
};

struct DriverProfile {
  DriverId driver_id{};
  EntityId vehicle_id{};
  double trust = 0.45;
  double initial_trust = 0.45;
  bool blocked = false;
  std::vector<PendingReward> pending_rewards;
  std::set<MessageId> complaint_list;
  std::set<MessageId> announced;
  std::optional<SimTime> blocking_check_at;
};

enum class TrustCause {
  Initial,
  TpdReward,
  RewardDiscarded,
  RsuReward,
  RsuPunishment,
  ForwardReward,
  ClarifyReward,
  ReportReward,
  BeaconReward,
  Blocked,
  Unblocked,
  DriverChange,
};

std::string_view to_string(TrustCause cause);

struct TrustUpdate {
  DriverId driver{};
  double before = 0.0;
  double after = 0.0;
  TrustCause cause = TrustCause::Initial;
};

/// trust' = clamp(trust + delta, floor, cap). Reaching the floor arms the
/// blocking-check timer.
TrustUpdate apply_reward_or_punishment(DriverProfile& profile, double delta, SimTime now,
                                       const TrustConfig& cfg,
                                       TrustCause cause = TrustCause::TpdReward);

/// Queue a reward for release at now + duration. Throws ProtocolError if the
/// message already has a pending reward.
void withhold_reward(DriverProfile& profile, MessageId message_id, double amount, SimTime now,
                     double withhold_duration);

struct ReleaseOutcome {
  PendingReward reward;
  bool discarded = false;
  TrustUpdate update;
};

/// Release every pending reward due at `now`. Rewards on complained messages
/// are dropped without touching trust.
std::vector<ReleaseOutcome> release_pending(DriverProfile& profile, SimTime now,
                                            const TrustConfig& cfg);

/// Returns false (and leaves the list untouched) for messages the driver never sent.
bool record_complaint(DriverProfile& profile, MessageId message_id);

struct BlockingRequest {
  DriverId driver{};
  EntityId vehicle{};
  SimTime issued_at = 0.0;
};

std::optional<BlockingRequest> check_blocking(DriverProfile& profile, SimTime now,
                                              const TrustConfig& cfg);

/// The tamper-proof device: a driver list with one current driver.
class Tpd {
 public:
  Tpd(EntityId vehicle, DriverId first_driver, double initial_trust, TrustConfig cfg);

  const TrustConfig& config() const { return cfg_; }
  DriverProfile& current() { return drivers_.at(current_); }
  const DriverProfile& current() const { return drivers_.at(current_); }
  DriverId current_driver() const { return current_; }
  double trust() const { return current().trust; }
  bool blocked() const { return current().blocked; }
  bool knows(DriverId driver) const { return drivers_.contains(driver); }
  const std::map<DriverId, DriverProfile>& drivers() const { return drivers_; }

  /// Saved profile becomes current; unknown drivers start at the configured
  /// default initial trust.
  void switch_driver(DriverId driver);

  /// Metrics for a fresh announcement. Long-delayed outcomes are applied at
  /// once; otherwise the reward is withheld and its release time returned.
  struct AnnouncementOutcome {
    RewardAssessment assessment;
    std::optional<SimTime> release_at;
    std::optional<TrustUpdate> immediate;
  };
  AnnouncementOutcome on_announcement(MessageId message_id, const AnnouncementMetrics& metrics,
                                      SimTime now);

  TrustUpdate adjust(double delta, SimTime now, TrustCause cause);
  std::vector<ReleaseOutcome> release_due(SimTime now) { return release_pending(current(), now, cfg_); }
  bool complain(MessageId message_id) { return record_complaint(current(), message_id); }
  std::optional<BlockingRequest> poll_blocking(SimTime now) { return check_blocking(current(), now, cfg_); }

  /// Blocking confirmation from the TA: trust drops to the floor and event
  /// traffic is disabled.
  TrustUpdate confirm_block(DriverId driver);
  TrustUpdate unblock(DriverId driver);

 private:
  EntityId vehicle_;
  TrustConfig cfg_;
  std::map<DriverId, DriverProfile> drivers_;
  DriverId current_;
};

}  // namespace vanet::trust
