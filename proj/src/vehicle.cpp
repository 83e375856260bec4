#include "vanet/vehicle.hpp"

#include <algorithm>
#include <limits>

namespace vanet {

namespace {
constexpr double kClarifierThreshold = 0.5;

bool contains(const std::vector<std::string>& v, const std::string& s)
{
  return std::find(v.begin(), v.end(), s) != v.end();
}

const std::string& label_of(const VanetMessage& msg)
{
  static const std::string empty;
  if (auto* e = std::get_if<EventBody>(&msg.payload)) return e->label;
  if (auto* q = std::get_if<QueryBody>(&msg.payload)) return q->label;
  if (auto* u = std::get_if<UntrueReportBody>(&msg.payload)) return u->label;
  return empty;
}
}  // namespace

std::string_view to_string(VehicleKind kind)
{
  switch (kind) {
    case VehicleKind::Regular: return "regular";
    case VehicleKind::Police: return "police";
    case VehicleKind::Ambulance: return "ambulance";
    case VehicleKind::FireService: return "fire";
  }
  return "?";
}

std::optional<VehicleKind> vehicle_kind_from_string(std::string_view name)
{
  for (VehicleKind k : {VehicleKind::Regular, VehicleKind::Police, VehicleKind::Ambulance,
                        VehicleKind::FireService}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void BehaviorPolicy::validate() const
{
  auto unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!unit(report_probability) || !unit(clarifier_yes_probability)) {
    throw ConfigError("behavior probabilities must lie in [0, 1]");
  }
}

VehicleAgent::VehicleAgent(EntityId id, VehicleKind kind, Mobility mobility, BehaviorPolicy policy,
                           double initial_trust, const VehicleConfig& cfg, RngStream rng)
    : id_(id), kind_(kind), mobility_(std::move(mobility)), policy_(std::move(policy)), cfg_(&cfg),
      rng_(rng), reputation_(cfg.baseline_initial_reputation)
{
  policy_.validate();
  if (!official()) tpd_.emplace(id, DriverId{raw(id)}, initial_trust, cfg.trust);
}

DriverId VehicleAgent::driver() const { return tpd_ ? tpd_->current_driver() : DriverId{raw(id_)}; }
double VehicleAgent::trust() const { return tpd_ ? tpd_->trust() : trust::kOfficialTrust; }
bool VehicleAgent::blocked() const { return tpd_ && tpd_->blocked(); }

MessageId VehicleAgent::next_id() { return make_message_id(id_, next_seq_++); }

void VehicleAgent::radio(Effects& fx, VanetMessage msg, bool relay) const
{
  fx.radio(std::move(msg), relay);
  fx.sends.back().sender_trust = trust();
  fx.sends.back().sender_blocked = blocked();
}

void VehicleAgent::uplink(Effects& fx, VanetMessage msg) const
{
  fx.uplink(std::move(msg));
  fx.sends.back().sender_trust = trust();
  fx.sends.back().sender_blocked = blocked();
}

VanetMessage VehicleAgent::make(MessageKind kind, SimTime now)
{
  VanetMessage msg;
  msg.id = next_id();
  msg.kind = kind;
  msg.origin = id_;
  msg.hop_limit = cfg_->hop_limit;
  msg.created_at = now;
  msg.injected_at = now;
  seen_.insert(msg.id);
  return msg;
}

bool VehicleAgent::visited_within(EventId event, SimTime now, double window) const
{
  auto it = visits_.find(event);
  return it != visits_.end() && now - it->second <= window;
}

void VehicleAgent::record_trust(const trust::TrustUpdate& update, Effects& fx)
{
  fx.trust.push_back(update);
  const auto& at = tpd_->current().blocking_check_at;
  if (at) fx.at(*at, TimerKind::BlockingCheck);
}

void VehicleAgent::start(SimTime now, Effects& fx)
{
  if (tpd_) fx.trust.push_back({driver(), trust(), trust(), trust::TrustCause::Initial});
  if (cfg_->beacon_interval > 0.0) {
    fx.at(now + rng_.uniform(0.0, cfg_->beacon_interval), TimerKind::Beacon);
  }
}

std::optional<VanetMessage> VehicleAgent::announce_event(const EventRecord& event, SimTime now,
                                                         Effects& fx)
{
  const bool proposed = cfg_->protocol == Protocol::Proposed;
  if (proposed && !permitted(event.event_type, trust(), blocked())) return std::nullopt;

  VanetMessage msg = make(MessageKind::EventAnnouncement, now);
  msg.event_id = event.event_id;
  msg.event_location = event.location;
  msg.payload = EventBody{event.event_type, event.observed_at, driver(), event.label, true,
                          proposed ? trust() : reputation_};
  own_messages_[msg.id] = msg;
  announced_events_.insert(event.event_id);
  responded_.insert(event.event_id);

  if (proposed && tpd_) {
    const trust::AnnouncementMetrics metrics{distance(event.location, position()),
                                             now - event.observed_at};
    auto outcome = tpd_->on_announcement(msg.id, metrics, now);
    if (outcome.immediate) record_trust(*outcome.immediate, fx);
    if (outcome.release_at) fx.at(*outcome.release_at, TimerKind::RewardRelease, raw(msg.id));
  }
  for (int k = 1; k <= cfg_->retransmit_limit; ++k) {
    fx.at(now + k * cfg_->retransmit_interval, TimerKind::Retransmit, raw(msg.id));
  }
  radio(fx, msg);
  return msg;
}

std::optional<VanetMessage> VehicleAgent::maybe_report_untrue(const VanetMessage& received,
                                                              SimTime now,
                                                              const GroundTruth& truth,
                                                              Effects& fx)
{
  if (received.kind != MessageKind::EventAnnouncement || received.origin == id_) return std::nullopt;
  if (!received.event_id || policy_.reporter == ReporterMode::None) return std::nullopt;
  if (report_decided_.contains(received.id)) return std::nullopt;
  if (!policy_.report_labels.empty() && !contains(policy_.report_labels, label_of(received))) {
    return std::nullopt;
  }
  const bool believes_false =
      policy_.reporter == ReporterMode::Malicious || !truth.is_real(*received.event_id);
  if (!believes_false) return std::nullopt;

  report_decided_.insert(received.id);
  if (!rng_.bernoulli(policy_.report_probability)) return std::nullopt;
  if (visited_within(*received.event_id, now, cfg_->t_int)) return emit_report(received, now, fx);
  pending_reports_[received.id] = {received, now + cfg_->t_int};
  return std::nullopt;
}

std::optional<VanetMessage> VehicleAgent::emit_report(const VanetMessage& announcement,
                                                      SimTime now, Effects& fx)
{
  if (!official() && !permitted(EventType::UntrueAttackReport, trust(), blocked())) {
    return std::nullopt;
  }
  const auto& ev = announcement.body<EventBody>();
  VanetMessage msg = make(MessageKind::UntrueReport, now);
  msg.event_id = announcement.event_id;
  msg.event_location = announcement.event_location;
  msg.payload = UntrueReportBody{announcement.id, announcement.origin, ev.driver, id_, driver(),
                                 official(), ev.label};
  relayed_untrue_for_.insert(announcement.id);
  radio(fx, msg);
  if (tpd_) {
    record_trust(tpd_->adjust(cfg_->trust.report_reward, now, trust::TrustCause::ReportReward), fx);
  }
  return msg;
}

std::optional<int> VehicleAgent::vote_for(const VanetMessage& query, const GroundTruth& truth)
{
  const bool real = query.event_id && truth.is_real(*query.event_id);
  if (official()) return real ? 1 : -1;
  if (contains(policy_.silent_labels, label_of(query))) return std::nullopt;
  switch (policy_.clarifier) {
    case ClarifierMode::None: return std::nullopt;
    case ClarifierMode::GroundTruth: return real ? 1 : -1;
    case ClarifierMode::Inverted: return real ? -1 : 1;
    case ClarifierMode::Probabilistic:
      return rng_.bernoulli(policy_.clarifier_yes_probability) ? 1 : -1;
  }
  return std::nullopt;
}

std::optional<VanetMessage> VehicleAgent::answer_clarification(const VanetMessage& query,
                                                               SimTime now,
                                                               const GroundTruth& truth,
                                                               Effects& fx)
{
  if (query.kind != MessageKind::ClarificationQuery || !query.event_id) return std::nullopt;
  const auto& q = query.body<QueryBody>();
  if (q.sender == id_ || std::find(q.reporters.begin(), q.reporters.end(), id_) != q.reporters.end()) {
    return std::nullopt;
  }
  if (answered_queries_.contains(query.id) || now >= q.deadline) return std::nullopt;

  if (visited_within(*query.event_id, now, cfg_->t_dis)) return emit_feedback(query, now, truth, fx);

  if (official()) {
    pending_queries_[query.id] = {query};
    VanetMessage far = make(MessageKind::FarFromEvent, now);
    far.destination = q.rsu;
    far.event_id = query.event_id;
    far.event_location = query.event_location;
    far.payload = FeedbackBody{q.rsu, q.disputed, 0, trust(), id_, driver(), true};
    uplink(fx, far);
    return far;
  }
  if (blocked() || trust() <= kClarifierThreshold || policy_.clarifier == ClarifierMode::None) {
    return std::nullopt;
  }
  pending_queries_[query.id] = {query};
  return std::nullopt;
}

std::optional<VanetMessage> VehicleAgent::emit_feedback(const VanetMessage& query, SimTime now,
                                                        const GroundTruth& truth, Effects& fx)
{
  if (!official() && (blocked() || trust() <= kClarifierThreshold)) return std::nullopt;
  const auto vote = vote_for(query, truth);
  if (!vote) return std::nullopt;
  const auto& q = query.body<QueryBody>();
  answered_queries_.insert(query.id);
  pending_queries_.erase(query.id);

  VanetMessage msg = make(MessageKind::Feedback, now);
  msg.destination = q.rsu;
  msg.event_id = query.event_id;
  msg.event_location = query.event_location;
  msg.payload = FeedbackBody{q.rsu, q.disputed, *vote, trust(), id_, driver(), official()};
  uplink(fx, msg);
  if (tpd_) {
    record_trust(tpd_->adjust(cfg_->trust.clarify_reward, now, trust::TrustCause::ClarifyReward),
                 fx);
  }
  return msg;
}

Sighting VehicleAgent::step_mobility(double dt, SimTime now,
                                     const std::vector<const EventRecord*>& active)
{
  const auto swept = mobility_.step(dt);
  const double observe = cfg_->observe_radius > 0.0 ? cfg_->observe_radius : cfg_->visit_radius;
  Sighting out;
  for (const EventRecord* ev : active) {
    double closest = std::numeric_limits<double>::infinity();
    for (const Segment& s : swept) closest = std::min(closest, segment_distance(ev->location, s.from, s.to));
    if (closest <= cfg_->visit_radius) {
      visits_[ev->event_id] = now;
      out.visited.push_back(ev->event_id);
    }
    if (closest <= observe) out.observed.push_back(ev->event_id);
  }
  return out;
}

void VehicleAgent::tick(double dt, SimTime now, const GroundTruth& truth,
                        const std::vector<const EventRecord*>& active, Effects& fx)
{
  process_visits(step_mobility(dt, now, active), now, truth, fx);
}

void VehicleAgent::process_visits(const Sighting& sighting, SimTime now, const GroundTruth& truth,
                                  Effects& fx)
{
  for (EventId e : sighting.visited) on_visit(e, now, truth, fx);
  for (EventId e : sighting.observed) on_observe(e, now, truth, fx);
}

void VehicleAgent::on_visit(EventId event, SimTime now, const GroundTruth& truth, Effects& fx)
{
  for (auto it = pending_reports_.begin(); it != pending_reports_.end();) {
    if (now > it->second.deadline) {
      it = pending_reports_.erase(it);
    } else if (it->second.announcement.event_id == event) {
      emit_report(it->second.announcement, now, fx);
      it = pending_reports_.erase(it);
    } else {
      ++it;
    }
  }
  for (auto it = pending_queries_.begin(); it != pending_queries_.end();) {
    const VanetMessage query = it->second.query;
    ++it;
    if (now >= query.body<QueryBody>().deadline) {
      pending_queries_.erase(query.id);
    } else if (query.event_id == event) {
      emit_feedback(query, now, truth, fx);
      pending_queries_.erase(query.id);
    }
  }
  for (auto it = inspections_.begin(); it != inspections_.end();) {
    if (it->second.referral.event_id != event) {
      ++it;
      continue;
    }
    const auto& q = it->second.referral.body<QueryBody>();
    VanetMessage msg = make(MessageKind::Feedback, now);
    msg.destination = q.rsu;
    msg.event_id = event;
    msg.event_location = it->second.referral.event_location;
    msg.payload = FeedbackBody{q.rsu, q.disputed, truth.is_real(event) ? 1 : -1, trust(), id_,
                               driver(), true};
    uplink(fx, msg);
    it = inspections_.erase(it);
  }

  const EventRecord* record = truth.find(event);
  if (!record || !record->real) return;
  if (official() && policy_.attend_events && attended_.insert(event).second) {
    VanetMessage msg = make(MessageKind::AttendingBy, now);
    msg.event_id = event;
    msg.event_location = record->location;
    radio(fx, msg);
    fx.at(now + cfg_->sort_duration, TimerKind::SortEvent, raw(event));
  }
}

void VehicleAgent::on_observe(EventId event, SimTime now, const GroundTruth& truth, Effects& fx)
{
  if (!policy_.announce_observed || announced_events_.contains(event)) return;
  const EventRecord* record = truth.find(event);
  if (!record || !record->real) return;
  const bool heard = responded_.contains(event);
  if (cfg_->protocol == Protocol::Baseline || !heard) announce_event(*record, now, fx);
}

void VehicleAgent::relay(const VanetMessage& msg, SimTime now, Effects& fx)
{
  switch (relay_eligible(msg, trust(), false, msg.origin == id_)) {
    case RelayDecision::Drop: return;
    case RelayDecision::LowTrustNotice: {
      VanetMessage notice = make(MessageKind::LowTrustNotice, now);
      notice.destination = msg.origin;
      notice.event_id = msg.event_id;
      notice.hop_limit = 0;
      radio(fx, notice);
      return;
    }
    case RelayDecision::Relay:
      radio(fx, relayed(msg), true);
      if (tpd_ && msg.kind == MessageKind::EventAnnouncement && cfg_->trust.forward_reward != 0.0) {
        record_trust(
            tpd_->adjust(cfg_->trust.forward_reward, now, trust::TrustCause::ForwardReward), fx);
      }
      return;
  }
}

void VehicleAgent::on_announcement(const VanetMessage& msg, SimTime now, const GroundTruth& truth,
                                   Effects& fx)
{
  if (msg.event_id && responded_.insert(*msg.event_id).second) {
    fx.responses.push_back({id_, *msg.event_id, msg.injected_at, now});
  }
  relay(msg, now, fx);
  maybe_report_untrue(msg, now, truth, fx);
}

void VehicleAgent::on_baseline_announcement(const VanetMessage& msg, SimTime now, Effects& fx)
{
  if (msg.hops < msg.hop_limit) radio(fx, relayed(msg), true);
  if (!msg.event_id) return;
  const auto& body = msg.body<EventBody>();
  auto [it, inserted] = buffers_.try_emplace(*msg.event_id);
  baseline::EventBuffer& buffer = it->second;
  if (inserted) {
    buffer.event_id = *msg.event_id;
    buffer.timer_deadline = now + cfg_->baseline_timer;
    buffer.first_injected = msg.injected_at;
    fx.at(buffer.timer_deadline, TimerKind::BaselineDecision, raw(*msg.event_id));
  }
  if (!buffer.decided) {
    buffer.messages.push_back({msg.origin, body.reputation, body.claim ? 1 : -1});
  }
  VanetMessage fb = make(MessageKind::Feedback, now);
  fb.event_id = msg.event_id;
  fb.payload = FeedbackBody{kNoEntity, msg.id, body.claim ? 1 : -1, reputation_, id_, driver(), false};
  uplink(fx, fb);
}

void VehicleAgent::on_message(const VanetMessage& msg, SimTime now, const GroundTruth& truth,
                              Effects& fx)
{
  if (msg.origin == id_) return;
  if (!seen_.insert(msg.id).second) return;
  const bool for_me = msg.destination == id_;
  // Receiving a message at the site counts as a visit.
  if (msg.event_id && msg.event_location &&
      distance(*msg.event_location, position()) <= cfg_->visit_radius) {
    visits_[*msg.event_id] = now;
  }

  switch (msg.kind) {
    case MessageKind::EventAnnouncement:
      if (cfg_->protocol == Protocol::Baseline) {
        on_baseline_announcement(msg, now, fx);
      } else {
        on_announcement(msg, now, truth, fx);
      }
      break;

    case MessageKind::UntrueReport: {
      const auto& body = msg.body<UntrueReportBody>();
      if (body.sender == id_) {
        if (tpd_) tpd_->complain(body.disputed);
        break;
      }
      if (relayed_untrue_for_.insert(body.disputed).second) relay(msg, now, fx);
      break;
    }

    case MessageKind::ClarificationQuery: {
      const auto& q = msg.body<QueryBody>();
      if (q.sender == id_ ||
          std::find(q.reporters.begin(), q.reporters.end(), id_) != q.reporters.end()) {
        break;
      }
      relay(msg, now, fx);
      answer_clarification(msg, now, truth, fx);
      break;
    }

    case MessageKind::RewardMsg:
    case MessageKind::PunishmentMsg: {
      const auto& body = msg.body<AdjustBody>();
      if (!for_me || !tpd_ || body.driver != driver() || blocked()) break;
      const auto cause = msg.kind == MessageKind::RewardMsg ? trust::TrustCause::RsuReward
                                                            : trust::TrustCause::RsuPunishment;
      record_trust(tpd_->adjust(body.amount, now, cause), fx);
      break;
    }

    case MessageKind::BlockingConfirmation: {
      const auto& body = msg.body<BlockingBody>();
      if (body.vehicle != id_) {
        relay(msg, now, fx);
        break;
      }
      if (!tpd_ || !tpd_->knows(body.driver)) break;
      if (!tpd_->drivers().at(body.driver).blocked) {
        fx.trust.push_back(tpd_->confirm_block(body.driver));
        own_messages_.clear();
        pending_reports_.clear();
        pending_queries_.clear();
        VanetMessage ack = make(MessageKind::BlockingAck, now);
        ack.destination = body.via_rsu;
        ack.payload = BlockingBody{body.driver, id_, body.via_rsu};
        uplink(fx, ack);
      }
      break;
    }

    case MessageKind::UnresolvedUntrue:
      if (for_me && official()) {
        const auto& q = msg.body<QueryBody>();
        inspections_[q.disputed] = {msg};
        if (msg.event_id && visited_within(*msg.event_id, now, cfg_->t_dis)) {
          on_visit(*msg.event_id, now, truth, fx);
        }
      }
      break;

    case MessageKind::EventSorted: relay(msg, now, fx); break;

    case MessageKind::ReputationUpdate:
      for (const auto& [d, rep] : msg.body<ReputationBody>().reputations) {
        if (d == driver()) reputation_ = rep;
      }
      break;

    case MessageKind::LowTrustNotice:
    case MessageKind::ServiceReply:
      if (for_me) fx.diagnostics.push_back(std::string(to_string(msg.kind)) + " received");
      break;

    default: break;
  }
}

void VehicleAgent::on_timer(TimerKind kind, std::uint64_t key, SimTime now,
                            const GroundTruth& truth, Effects& fx)
{
  (void)truth;
  switch (kind) {
    case TimerKind::Beacon: {
      VanetMessage msg = make(MessageKind::Beacon, now);
      msg.hop_limit = 0;
      msg.payload = BeaconBody{position()};
      radio(fx, msg);
      if (tpd_ && !blocked() && trust() < kClarifierThreshold && cfg_->trust.beacon_reward > 0.0) {
        record_trust(tpd_->adjust(cfg_->trust.beacon_reward, now, trust::TrustCause::BeaconReward),
                     fx);
      }
      fx.at(now + cfg_->beacon_interval, TimerKind::Beacon);
      break;
    }

    case TimerKind::RewardRelease:
      if (!tpd_) break;
      for (const auto& outcome : tpd_->release_due(now)) record_trust(outcome.update, fx);
      break;

    case TimerKind::BlockingCheck:
      if (!tpd_) break;
      if (auto request = tpd_->poll_blocking(now)) {
        VanetMessage msg = make(MessageKind::BlockingRequest, now);
        msg.payload = BlockingBody{request->driver, id_, kNoEntity};
        uplink(fx, msg);
        fx.at(*tpd_->current().blocking_check_at, TimerKind::BlockingCheck);
      }
      break;

    case TimerKind::Retransmit: {
      auto it = own_messages_.find(MessageId{key});
      if (it == own_messages_.end()) break;
      int& count = retransmits_[it->first];
      if (count >= cfg_->retransmit_limit) break;
      ++count;
      if (cfg_->protocol == Protocol::Proposed) {
        const auto& ev = it->second.body<EventBody>();
        if (!permitted(ev.type, trust(), blocked())) break;
      }
      VanetMessage again = it->second;
      again.hops = 0;
      again.injected_at = now;
      radio(fx, again);
      break;
    }

    case TimerKind::SortEvent: {
      VanetMessage msg = make(MessageKind::EventSorted, now);
      msg.event_id = EventId{static_cast<std::uint32_t>(key)};
      radio(fx, msg);
      fx.resolved.push_back(*msg.event_id);
      break;
    }

    case TimerKind::BaselineDecision: {
      auto it = buffers_.find(EventId{static_cast<std::uint32_t>(key)});
      if (it == buffers_.end() || it->second.decided) break;
      it->second.decided = true;
      baseline::decide(it->second, cfg_->baseline_scheme);
      fx.responses.push_back({id_, it->first, it->second.first_injected, now});
      break;
    }

    default: break;
  }
}

void VehicleAgent::switch_driver(DriverId driver, SimTime now, Effects& fx)
{
  (void)now;
  if (!tpd_) throw ProtocolError("official vehicles have no TPD");
  tpd_->switch_driver(driver);
  fx.trust.push_back({driver, trust(), trust(), trust::TrustCause::DriverChange});
}

void VehicleAgent::service_query(const std::string& service, SimTime now, Effects& fx)
{
  if (blocked() || !permitted(EventType::WaveService, trust(), blocked())) return;
  VanetMessage msg = make(MessageKind::ServiceQuery, now);
  msg.hop_limit = 0;
  msg.payload = ServiceBody{service, std::nullopt};
  uplink(fx, msg);
}

}  // namespace vanet
