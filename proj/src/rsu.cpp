#include "vanet/rsu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace vanet {

namespace {
constexpr double kClarifierThreshold = 0.5;
}

EntityId RsuDirectory::owner_for(Vec2 location) const
{
  EntityId best = kNoEntity;
  double best_d = std::numeric_limits<double>::infinity();
  for (const RadioNode& r : rsus) {
    const double d = distance(r.position, location);
    if (d < best_d || (d == best_d && raw(r.id) < raw(best))) {
      best = r.id;
      best_d = d;
    }
  }
  return best;
}

std::optional<Vec2> RsuDirectory::position_of(EntityId rsu) const
{
  for (const RadioNode& r : rsus) {
    if (r.id == rsu) return r.position;
  }
  return std::nullopt;
}

double vote_score(const std::vector<FeedbackEntry>& entries)
{
  // Summed on the 1e-9 trust lattice so that exact ties stay exactly zero.
  std::int64_t nano = 0;
  for (const FeedbackEntry& e : entries) nano += e.vote * std::llround(e.trust * 1e9);
  return static_cast<double>(nano) / 1e9;
}

Decision decision_for(double score)
{
  if (score > 0.0) return Decision::DecidedTrue;
  if (score < 0.0) return Decision::DecidedFalse;
  return Decision::Unresolved;
}

bool DisputeCase::participant(EntityId vehicle) const
{
  if (sender.vehicle == vehicle) return true;
  return std::any_of(reporters.begin(), reporters.end(),
                     [&](const Party& p) { return p.vehicle == vehicle; });
}

std::size_t PunishmentLedger::offenses(DriverId driver) const
{
  auto it = history_.find(driver);
  return it == history_.end() ? 0 : it->second.size();
}

double PunishmentLedger::next(DriverId driver)
{
  auto& h = history_[driver];
  const double magnitude = ipp_.empty() ? 0.0 : ipp_[std::min(h.size(), ipp_.size() - 1)];
  h.push_back(magnitude);
  return magnitude;
}

const std::vector<double>& PunishmentLedger::history(DriverId driver) const
{
  static const std::vector<double> none;
  auto it = history_.find(driver);
  return it == history_.end() ? none : it->second;
}

RsuNode::RsuNode(EntityId id, Vec2 position, const RsuConfig& cfg, const RsuDirectory& directory)
    : id_(id), position_(position), cfg_(&cfg), dir_(&directory), ledger_(cfg.ipp),
      reputations_(cfg.reputation_initial, cfg.reputation_step, cfg.reputation_cap)
{
}

VanetMessage RsuNode::make(MessageKind kind, SimTime now)
{
  VanetMessage msg;
  msg.id = make_message_id(id_, next_seq_++);
  msg.kind = kind;
  msg.origin = id_;
  msg.hop_limit = cfg_->hop_limit;
  msg.created_at = now;
  msg.injected_at = now;
  return msg;
}

void RsuNode::start(SimTime now, Effects& fx)
{
  if (cfg_->protocol == Protocol::Baseline && cfg_->reputation_interval > 0.0) {
    fx.at(now + cfg_->reputation_interval, TimerKind::ReputationBroadcast);
  }
}

void RsuNode::notify_peers(MessageKind kind, const VanetMessage& msg, Effects& fx)
{
  for (const RadioNode& r : dir_->rsus) {
    if (r.id == id_) continue;
    VanetMessage copy = msg;
    copy.kind = kind;
    copy.destination = r.id;
    fx.wired(r.id, std::move(copy));
  }
}

void RsuNode::on_message(const VanetMessage& msg, bool wired, SimTime now, Effects& fx)
{
  if (msg.origin == id_ && !wired) return;
  if (!wired && !processed_.insert(msg.id).second) return;

  if (cfg_->protocol == Protocol::Baseline) {
    if (msg.kind == MessageKind::Feedback) {
      const auto& fb = msg.body<FeedbackBody>();
      reputations_.feedback(DriverId{raw(message_origin(fb.disputed))}, fb.vote);
    }
    return;
  }

  switch (msg.kind) {
    case MessageKind::EventAnnouncement:
      if (!wired) handle_event_announcement(msg, now, fx);
      break;
    case MessageKind::UntrueReport: open_dispute(msg, now, fx); break;
    case MessageKind::Feedback:
    case MessageKind::FarFromEvent: collect_feedback(msg, now, fx); break;
    case MessageKind::EventSorted: on_sorted(msg, now, fx); break;
    case MessageKind::ServiceQuery: fx.radio(handle_service_query(msg, now)); break;

    case MessageKind::InterRsuNotice: {
      const auto& body = msg.body<RulingBody>();
      if (!msg.event_id) break;
      if (body.notice == NoticeType::DisputeOpened) handled_.insert(*msg.event_id);
      if (body.notice == NoticeType::EventShare) shared_events_.insert(*msg.event_id);
      if (body.notice == NoticeType::Ruling) {
        for (std::size_t i = 0; i < body.punished.size() && i < body.punishments.size(); ++i) {
          ledger_.record(body.punished[i].driver, body.punishments[i]);
        }
      }
      break;
    }

    case MessageKind::BlockingRequest:
    case MessageKind::BlockingAck: {
      if (wired) break;
      VanetMessage fwd = msg;
      auto& body = std::get<BlockingBody>(fwd.payload);
      body.via_rsu = id_;
      fwd.destination = dir_->ta;
      if (msg.kind == MessageKind::BlockingAck) acked_.insert(body.driver);
      fx.wired(dir_->ta, std::move(fwd));
      break;
    }

    case MessageKind::BlockingConfirmation: {
      if (!wired) break;
      const auto& body = msg.body<BlockingBody>();
      VanetMessage out = make(MessageKind::BlockingConfirmation, now);
      out.payload = body;
      out.destination = body.vehicle;
      if (body.via_rsu == id_) fx.downlink(body.vehicle, out);
      VanetMessage air = out;
      air.id = make_message_id(id_, next_seq_++);
      fx.radio(air);
      if (cfg_->confirmation_repeats > 0) {
        const std::uint64_t key = raw(air.id);
        confirmations_[key] = {air, 0};
        fx.at(now + cfg_->confirmation_repeat, TimerKind::ConfirmationRepeat, key);
      }
      break;
    }

    default: break;
  }
}

void RsuNode::handle_event_announcement(const VanetMessage& msg, SimTime now, Effects& fx)
{
  if (!msg.event_id || !known_events_.insert(*msg.event_id).second) return;
  if (sorted_.contains(*msg.event_id)) return;

  VanetMessage again = msg;
  again.hops = 0;
  fx.radio(again, true);

  const auto type = msg.body<EventBody>().type;
  const MessageClass cls = class_of(type);
  const bool share = (cls == MessageClass::High && cfg_->share_high) ||
                     (cls == MessageClass::Mid && cfg_->share_mid);
  if (!share) return;

  VanetMessage notice = make(MessageKind::InterRsuNotice, now);
  notice.event_id = msg.event_id;
  notice.event_location = msg.event_location;
  notice.payload = RulingBody{NoticeType::EventShare, msg.id, msg.event_location.value_or(position_),
                              Decision::Collecting, DecisionMethod::Vote, 0.0, {}, {}, {}};
  for (const RadioNode& r : dir_->rsus) {
    if (r.id == id_ || distance(r.position, position_) > cfg_->neighbor_radius) continue;
    VanetMessage copy = notice;
    copy.destination = r.id;
    fx.wired(r.id, std::move(copy));
  }
  if (dir_->ta != kNoEntity) {
    VanetMessage incident = msg;
    incident.destination = dir_->ta;
    fx.wired(dir_->ta, std::move(incident));
  }
  if (cfg_->reannounce_interval > 0.0 && cls == MessageClass::High) {
    reannounce_[*msg.event_id] = msg;
    fx.at(now + cfg_->reannounce_interval, TimerKind::Reannounce, raw(*msg.event_id));
  }
}

void RsuNode::on_sorted(const VanetMessage& msg, SimTime now, Effects& fx)
{
  if (!msg.event_id || !sorted_.insert(*msg.event_id).second) return;
  const bool was_active = reannounce_.erase(*msg.event_id) > 0;
  if (!was_active) return;
  VanetMessage notice = msg;
  notice.hops = 0;
  fx.radio(notice, true);
  if (cfg_->retransmit_limit > 0) {
    sorted_repeats_[*msg.event_id] = {notice, 0};
    fx.at(now + cfg_->retransmit_interval, TimerKind::SortedRepeat, raw(*msg.event_id));
  }
}

DisputeCase* RsuNode::open_dispute(const VanetMessage& report, SimTime now, Effects& fx)
{
  if (!report.event_id) return nullptr;
  const auto& body = report.body<UntrueReportBody>();
  const Vec2 location = report.event_location.value_or(position_);
  const EntityId owner = dir_->owner_for(location);
  if (owner != id_) {
    VanetMessage fwd = report;
    fwd.destination = owner;
    fx.wired(owner, std::move(fwd));
    return nullptr;
  }

  const Party reporter{body.reporter, body.reporter_driver, body.official};
  auto it = disputes_.find(*report.event_id);
  if (it != disputes_.end()) {
    DisputeCase& c = it->second;
    if (c.state == Decision::Collecting && !c.participant(body.reporter)) {
      c.reporters.push_back(reporter);
      std::erase_if(c.feedback,
                    [&](const FeedbackEntry& f) { return f.clarifier == body.reporter; });
    }
    return &c;
  }

  DisputeCase& c = disputes_[*report.event_id];
  c.event_id = *report.event_id;
  c.disputed = body.disputed;
  c.location = location;
  c.sender = Party{body.sender, body.sender_driver, false};
  c.reporters = {reporter};
  c.opened_at = now;
  c.deadline = now + cfg_->collaboration_timer;
  c.label = body.label;
  handled_.insert(c.event_id);

  VanetMessage notice = make(MessageKind::InterRsuNotice, now);
  notice.event_id = c.event_id;
  notice.event_location = c.location;
  notice.payload = RulingBody{NoticeType::DisputeOpened, c.disputed, c.location,
                              Decision::Collecting, DecisionMethod::Vote, 0.0, {}, {}, {}};
  notify_peers(MessageKind::InterRsuNotice, notice, fx);

  if (body.official) {
    rew_pun_gen(c, Decision::DecidedFalse, DecisionMethod::Official, 0.0, now, fx);
    return &c;
  }

  VanetMessage query = make(MessageKind::ClarificationQuery, now);
  query.event_id = c.event_id;
  query.event_location = c.location;
  query.payload = QueryBody{id_, c.disputed, c.sender.vehicle, {body.reporter}, c.deadline, c.label};
  fx.radio(query);
  fx.at(c.deadline, TimerKind::DisputeDeadline, raw(c.event_id));
  return &c;
}

void RsuNode::collect_feedback(const VanetMessage& fb, SimTime now, Effects& fx)
{
  const auto& body = fb.body<FeedbackBody>();
  if (body.rsu != id_) {
    if (body.rsu != kNoEntity && dir_->position_of(body.rsu)) {
      VanetMessage fwd = fb;
      fx.wired(body.rsu, std::move(fwd));
    }
    return;
  }
  if (fb.kind == MessageKind::FarFromEvent) {
    fx.diagnostics.push_back("far-from-event reply from " + std::to_string(raw(body.clarifier)));
    return;
  }
  if (!fb.event_id) return;
  auto it = disputes_.find(*fb.event_id);
  if (it == disputes_.end() || it->second.disputed != body.disputed) return;
  DisputeCase& c = it->second;
  if (c.participant(body.clarifier)) return;

  if (body.official) {
    if (c.state != Decision::Collecting && c.state != Decision::Unresolved) return;
    unresolved_.erase(c.event_id);
    c.feedback.push_back({body.vote, body.trust, body.clarifier, body.clarifier_driver});
    rew_pun_gen(c, body.vote > 0 ? Decision::DecidedTrue : Decision::DecidedFalse,
                DecisionMethod::Official, body.vote * body.trust, now, fx);
    return;
  }
  if (c.state != Decision::Collecting || now >= c.deadline) return;
  if (body.trust <= kClarifierThreshold) return;
  const bool duplicate = std::any_of(c.feedback.begin(), c.feedback.end(), [&](const auto& f) {
    return f.clarifier == body.clarifier;
  });
  if (duplicate) return;
  c.feedback.push_back({body.vote, body.trust, body.clarifier, body.clarifier_driver});
}

void RsuNode::decide(DisputeCase& c, SimTime now, Effects& fx)
{
  if (c.state != Decision::Collecting) return;
  const double score = vote_score(c.feedback);
  const Decision decision = decision_for(score);
  if (decision != Decision::Unresolved) {
    rew_pun_gen(c, decision, DecisionMethod::Vote, score, now, fx);
    return;
  }
  c.state = Decision::Unresolved;
  unresolved_.insert(c.event_id);
  DisputeRecord rec{now, c.event_id, c.disputed, id_, DecisionMethod::Vote, score,
                    Decision::Unresolved, {}, {}, {}, c.opened_at};
  for (const auto& f : c.feedback) rec.feedback_from.push_back(f.clarifier);
  fx.rulings.push_back(std::move(rec));

  if (dir_->officials.empty()) return;
  const EntityId official = dir_->officials.front();
  VanetMessage referral = make(MessageKind::UnresolvedUntrue, now);
  referral.destination = official;
  referral.event_id = c.event_id;
  referral.event_location = c.location;
  std::vector<EntityId> reporters;
  for (const Party& p : c.reporters) reporters.push_back(p.vehicle);
  referral.payload = QueryBody{id_, c.disputed, c.sender.vehicle, reporters, now, c.label};
  fx.downlink(official, std::move(referral));
  c.referred = true;
}

void RsuNode::rew_pun_gen(DisputeCase& c, Decision decision, DecisionMethod method, double score,
                          SimTime now, Effects& fx)
{
  c.state = decision;
  std::vector<Party> winners;
  std::vector<Party> losers;
  if (decision == Decision::DecidedTrue) {
    winners = {c.sender};
    losers = c.reporters;
  } else {
    winners = c.reporters;
    losers = {c.sender};
  }

  RulingBody ruling{NoticeType::Ruling, c.disputed, c.location, decision, method, score,
                    {}, {}, {}};
  for (const Party& p : winners) {
    ruling.rewarded.push_back(p);
    if (p.official) continue;
    VanetMessage reward = make(MessageKind::RewardMsg, now);
    reward.destination = p.vehicle;
    reward.event_id = c.event_id;
    reward.payload = AdjustBody{p.vehicle, p.driver, cfg_->rsu_reward, c.disputed};
    fx.downlink(p.vehicle, std::move(reward));
  }
  for (const Party& p : losers) {
    if (p.official) continue;
    const double magnitude = ledger_.next(p.driver);
    ruling.punished.push_back(p);
    ruling.punishments.push_back(magnitude);
    VanetMessage punish = make(MessageKind::PunishmentMsg, now);
    punish.destination = p.vehicle;
    punish.event_id = c.event_id;
    punish.payload = AdjustBody{p.vehicle, p.driver, -magnitude, c.disputed};
    fx.downlink(p.vehicle, std::move(punish));
  }

  VanetMessage report = make(MessageKind::RulingReport, now);
  report.event_id = c.event_id;
  report.event_location = c.location;
  report.payload = ruling;
  if (dir_->ta != kNoEntity) {
    VanetMessage to_ta = report;
    to_ta.destination = dir_->ta;
    fx.wired(dir_->ta, std::move(to_ta));
  }
  notify_peers(MessageKind::InterRsuNotice, report, fx);

  DisputeRecord rec{now, c.event_id, c.disputed, id_, method, score, decision,
                    ruling.rewarded, ruling.punished, {}, c.opened_at};
  for (const auto& f : c.feedback) rec.feedback_from.push_back(f.clarifier);
  fx.rulings.push_back(std::move(rec));
}

VanetMessage RsuNode::handle_service_query(const VanetMessage& query, SimTime now)
{
  const auto& body = query.body<ServiceBody>();
  VanetMessage reply = make(MessageKind::ServiceReply, now);
  reply.destination = query.origin;
  reply.hop_limit = 0;
  std::optional<Vec2> where;
  if (auto it = dir_->services.find(body.service); it != dir_->services.end()) where = it->second;
  reply.payload = ServiceBody{body.service, where};
  return reply;
}

void RsuNode::on_timer(TimerKind kind, std::uint64_t key, SimTime now, Effects& fx)
{
  switch (kind) {
    case TimerKind::DisputeDeadline: {
      auto it = disputes_.find(EventId{static_cast<std::uint32_t>(key)});
      if (it != disputes_.end()) decide(it->second, now, fx);
      break;
    }
    case TimerKind::Reannounce: {
      auto it = reannounce_.find(EventId{static_cast<std::uint32_t>(key)});
      if (it == reannounce_.end()) break;
      VanetMessage again = it->second;
      again.hops = 0;
      fx.radio(again, true);
      fx.at(now + cfg_->reannounce_interval, TimerKind::Reannounce, key);
      break;
    }
    case TimerKind::SortedRepeat: {
      auto it = sorted_repeats_.find(EventId{static_cast<std::uint32_t>(key)});
      if (it == sorted_repeats_.end()) break;
      fx.radio(it->second.first, true);
      if (++it->second.second >= cfg_->retransmit_limit) {
        sorted_repeats_.erase(it);
      } else {
        fx.at(now + cfg_->retransmit_interval, TimerKind::SortedRepeat, key);
      }
      break;
    }
    case TimerKind::ConfirmationRepeat: {
      auto it = confirmations_.find(key);
      if (it == confirmations_.end()) break;
      const auto& body = it->second.first.body<BlockingBody>();
      if (acked_.contains(body.driver) || it->second.second >= cfg_->confirmation_repeats) {
        confirmations_.erase(it);
        break;
      }
      ++it->second.second;
      VanetMessage again = it->second.first;
      again.id = make_message_id(id_, next_seq_++);
      again.created_at = again.injected_at = now;
      fx.radio(again);
      fx.at(now + cfg_->confirmation_repeat, TimerKind::ConfirmationRepeat, key);
      break;
    }
    case TimerKind::ReputationBroadcast: {
      auto updates = reputations_.take_updates();
      if (!updates.empty()) {
        VanetMessage msg = make(MessageKind::ReputationUpdate, now);
        msg.hop_limit = 0;
        msg.payload = ReputationBody{std::move(updates)};
        fx.radio(msg);
      }
      fx.at(now + cfg_->reputation_interval, TimerKind::ReputationBroadcast);
      break;
    }
    default: break;
  }
}

}  // namespace vanet
