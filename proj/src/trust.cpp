#include "vanet/trust.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace vanet::trust {
namespace {

constexpr std::array<double, 6> kTierRewards{0.08, 0.06, 0.05, 0.01, -0.01, -0.05};
constexpr std::array<double, 5> kDistanceBounds{300.0, 500.0, 800.0, 1200.0, 1500.0};
constexpr std::array<double, 5> kDelayBounds{15.0, 30.0, 60.0, 120.0, 150.0};
constexpr std::size_t kFirstPunishmentTier = 4;

// Half-open tiers: value in [bound[i-1], bound[i]) maps to tier i.
std::size_t tier_of(double value, const std::array<double, 5>& bounds)
{
  return static_cast<std::size_t>(std::upper_bound(bounds.begin(), bounds.end(), value) -
                                  bounds.begin());
}

// Trust lives on a 1e-9 lattice so that repeated +-0.08 steps land exactly on
// band thresholds such as 0.5.
double quantize(double t) { return std::round(t * 1e9) / 1e9; }

}  // namespace

TrustBand classify(double trust, const TrustConfig& cfg)
{
  if (trust <= cfg.floor) return TrustBand::Blocked;
  if (trust <= 0.25) return TrustBand::NotTrusted;
  if (trust < 0.5) return TrustBand::LowlyTrusted;
  if (trust >= cfg.cap) return TrustBand::HighlyTrusted;
  return TrustBand::Trusted;
}

std::string_view to_string(TrustBand band)
{
  switch (band) {
    case TrustBand::Blocked: return "blocked";
    case TrustBand::NotTrusted: return "not_trusted";
    case TrustBand::LowlyTrusted: return "lowly_trusted";
    case TrustBand::Trusted: return "trusted";
    case TrustBand::HighlyTrusted: return "highly_trusted";
  }
  return "?";
}

std::string_view to_string(TrustCause cause)
{
  switch (cause) {
    case TrustCause::Initial: return "initial";
    case TrustCause::TpdReward: return "tpd_reward";
    case TrustCause::RewardDiscarded: return "reward_discarded";
    case TrustCause::RsuReward: return "rsu_reward";
    case TrustCause::RsuPunishment: return "rsu_punishment";
    case TrustCause::ForwardReward: return "forward_reward";
    case TrustCause::ClarifyReward: return "clarify_reward";
    case TrustCause::ReportReward: return "report_reward";
    case TrustCause::BeaconReward: return "beacon_reward";
    case TrustCause::Blocked: return "blocked";
    case TrustCause::Unblocked: return "unblocked";
    case TrustCause::DriverChange: return "driver_change";
  }
  return "?";
}

RewardAssessment assess_reward(const AnnouncementMetrics& metrics)
{
  const std::size_t tier =
      std::max(tier_of(metrics.pos_diff, kDistanceBounds), tier_of(metrics.delay, kDelayBounds));
  return {kTierRewards[tier], tier >= kFirstPunishmentTier};
}

TrustUpdate apply_reward_or_punishment(DriverProfile& profile, double delta, SimTime now,
                                       const TrustConfig& cfg, TrustCause cause)
{
  TrustUpdate update{profile.driver_id, profile.trust, profile.trust, cause};
  double next = quantize(profile.trust + delta);
  next = std::min(next, cfg.cap);
  if (next <= cfg.floor) {
    next = cfg.floor;
    if (!profile.blocked && !profile.blocking_check_at) {
      profile.blocking_check_at = now + cfg.blocking_check_period;
    }
  }
  profile.trust = next;
  update.after = next;
  return update;
}

void withhold_reward(DriverProfile& profile, MessageId message_id, double amount, SimTime now,
                     double withhold_duration)
{
  const bool duplicate =
      std::any_of(profile.pending_rewards.begin(), profile.pending_rewards.end(),
                  [&](const PendingReward& p) { return p.message_id == message_id; });
  if (duplicate) {
    throw ProtocolError("duplicate pending reward for message " + std::to_string(raw(message_id)));
  }
  profile.pending_rewards.push_back({message_id, amount, now + withhold_duration, false});
}

std::vector<ReleaseOutcome> release_pending(DriverProfile& profile, SimTime now,
                                            const TrustConfig& cfg)
{
  std::vector<ReleaseOutcome> out;
  auto due = [now](const PendingReward& p) { return p.release_time <= now; };
  for (const PendingReward& reward : profile.pending_rewards) {
    if (!due(reward)) continue;
    ReleaseOutcome outcome{reward, false, {profile.driver_id, profile.trust, profile.trust,
                                           TrustCause::RewardDiscarded}};
    if (profile.complaint_list.contains(reward.message_id)) {
      outcome.discarded = true;
    } else {
      outcome.update =
          apply_reward_or_punishment(profile, reward.amount, now, cfg, TrustCause::TpdReward);
    }
    out.push_back(outcome);
  }
  std::erase_if(profile.pending_rewards, due);
  return out;
}

bool record_complaint(DriverProfile& profile, MessageId message_id)
{
  if (!profile.announced.contains(message_id)) return false;
  profile.complaint_list.insert(message_id);
  return true;
}

std::optional<BlockingRequest> check_blocking(DriverProfile& profile, SimTime now,
                                              const TrustConfig& cfg)
{
  if (profile.blocked || !profile.blocking_check_at || now < *profile.blocking_check_at) {
    return std::nullopt;
  }
  if (profile.trust > cfg.floor) {
    profile.blocking_check_at.reset();
    return std::nullopt;
  }
  // Re-arm so an unanswered request is retried one period later.
  profile.blocking_check_at = now + cfg.blocking_check_period;
  return BlockingRequest{profile.driver_id, profile.vehicle_id, now};
}

Tpd::Tpd(EntityId vehicle, DriverId first_driver, double initial_trust, TrustConfig cfg)
    : vehicle_(vehicle), cfg_(cfg), current_(first_driver)
{
  cfg_.initial_trust = initial_trust;
  DriverProfile profile;
  profile.driver_id = first_driver;
  profile.vehicle_id = vehicle;
  profile.trust = initial_trust;
  profile.initial_trust = initial_trust;
  drivers_.emplace(first_driver, std::move(profile));
}

void Tpd::switch_driver(DriverId driver)
{
  if (!drivers_.contains(driver)) {
    DriverProfile profile;
    profile.driver_id = driver;
    profile.vehicle_id = vehicle_;
    profile.trust = cfg_.initial_trust;
    profile.initial_trust = cfg_.initial_trust;
    drivers_.emplace(driver, std::move(profile));
  }
  current_ = driver;
}

Tpd::AnnouncementOutcome Tpd::on_announcement(MessageId message_id,
                                              const AnnouncementMetrics& metrics, SimTime now)
{
  DriverProfile& profile = current();
  profile.announced.insert(message_id);
  AnnouncementOutcome outcome;
  outcome.assessment = assess_reward(metrics);
  if (outcome.assessment.long_delayed) {
    outcome.immediate = apply_reward_or_punishment(profile, outcome.assessment.amount, now, cfg_,
                                                   TrustCause::TpdReward);
  } else {
    withhold_reward(profile, message_id, outcome.assessment.amount, now, cfg_.withhold_duration);
    outcome.release_at = now + cfg_.withhold_duration;
  }
  return outcome;
}

TrustUpdate Tpd::adjust(double delta, SimTime now, TrustCause cause)
{
  return apply_reward_or_punishment(current(), delta, now, cfg_, cause);
}

TrustUpdate Tpd::confirm_block(DriverId driver)
{
  DriverProfile& profile = drivers_.at(driver);
  TrustUpdate update{driver, profile.trust, cfg_.floor, TrustCause::Blocked};
  profile.trust = cfg_.floor;
  profile.blocked = true;
  profile.blocking_check_at.reset();
  profile.pending_rewards.clear();
  return update;
}

TrustUpdate Tpd::unblock(DriverId driver)
{
  DriverProfile& profile = drivers_.at(driver);
  TrustUpdate update{driver, profile.trust, profile.initial_trust, TrustCause::Unblocked};
  profile.blocked = false;
  profile.trust = profile.initial_trust;
  profile.blocking_check_at.reset();
  return update;
}

}  // namespace vanet::trust
