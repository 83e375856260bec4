#include "vanet/authority.hpp"

#include <algorithm>
#include <fstream>

namespace vanet {

bool window_exceeds(const std::vector<SimTime>& sorted_times, double window, int threshold)
{
  if (threshold <= 0) return true;
  const auto k = static_cast<std::size_t>(threshold);
  for (std::size_t i = 0; i + k <= sorted_times.size(); ++i) {
    if (sorted_times[i + k - 1] - sorted_times[i] <= window) return true;
  }
  return false;
}

TrustAuthority::TrustAuthority(EntityId id, TaConfig cfg, const RsuDirectory& directory)
    : id_(id), cfg_(cfg), dir_(&directory)
{
}

bool TrustAuthority::is_blocked(DriverId driver) const
{
  auto it = drivers_.find(driver);
  return it != drivers_.end() && it->second.blocked;
}

bool TrustAuthority::register_driver(DriverId driver, EntityId vehicle)
{
  if (drivers_.contains(driver)) return false;
  drivers_[driver] = DriverRecord{driver, vehicle, {}, {}, false, std::nullopt, {}, false};
  return true;
}

DriverRecord& TrustAuthority::record_for(DriverId driver, EntityId vehicle)
{
  register_driver(driver, vehicle);
  return drivers_.at(driver);
}

void TrustAuthority::send_confirmation(const DriverRecord& rec, Vec2 location, EntityId via,
                                       SimTime now, Effects& fx)
{
  VanetMessage msg;
  msg.kind = MessageKind::BlockingConfirmation;
  msg.origin = id_;
  msg.created_at = msg.injected_at = now;
  msg.payload = BlockingBody{rec.driver_id, rec.vehicle_id, via};
  for (const RadioNode& r : dir_->rsus) {
    if (r.id != via && distance(r.position, location) > cfg_.vicinity_radius) continue;
    msg.id = make_message_id(id_, next_seq_++);
    msg.destination = r.id;
    fx.wired(r.id, msg);
  }
}

std::vector<DriverId> TrustAuthority::record_ruling(const RulingBody& ruling, EventId event,
                                                    EntityId from_rsu, SimTime now, Effects& fx)
{
  IncidentRecord& incident = incidents_[event];
  incident.event_id = event;
  incident.location = ruling.location;
  if (incident.timestamp == 0.0) incident.timestamp = now;
  incident.ruling = ruling.decision;

  for (const Party& p : ruling.rewarded) {
    if (p.official) continue;
    record_for(p.driver, p.vehicle).history.push_back({now, 0.08, event, ruling.decision});
  }

  std::vector<DriverId> newly_blocked;
  for (std::size_t i = 0; i < ruling.punished.size(); ++i) {
    const Party& p = ruling.punished[i];
    DriverRecord& rec = record_for(p.driver, p.vehicle);
    const double amount = i < ruling.punishments.size() ? -ruling.punishments[i] : 0.0;
    rec.history.push_back({now, amount, event, ruling.decision});
    rec.malicious_events.emplace_back(now, event);
    if (rec.blocked) continue;
    std::vector<SimTime> times;
    for (const auto& [t, e] : rec.malicious_events) times.push_back(t);
    if (window_exceeds(times, cfg_.window, cfg_.malicious_threshold)) {
      rec.blocked = true;
      rec.blocked_at = now;
      rec.block_reason = "3ME";
      newly_blocked.push_back(p.driver);
      send_confirmation(rec, ruling.location, from_rsu, now, fx);
    }
  }
  return newly_blocked;
}

void TrustAuthority::handle_blocking_request(const BlockingBody& request, SimTime now, Effects& fx)
{
  DriverRecord& rec = record_for(request.driver, request.vehicle);
  if (!rec.blocked) {
    rec.blocked = true;
    rec.blocked_at = now;
    rec.block_reason = "tpd";
  }
  const Vec2 where = dir_->position_of(request.via_rsu).value_or(Vec2{});
  send_confirmation(rec, where, request.via_rsu, now, fx);
}

void TrustAuthority::unblock(DriverId driver)
{
  auto it = drivers_.find(driver);
  if (it == drivers_.end()) throw ProtocolError("unknown driver");
  it->second.blocked = false;
  it->second.blocked_at.reset();
  it->second.malicious_events.clear();
  it->second.acked = false;
}

void TrustAuthority::on_message(const VanetMessage& msg, SimTime now, Effects& fx)
{
  switch (msg.kind) {
    case MessageKind::RulingReport:
      if (msg.event_id) {
        record_ruling(msg.body<RulingBody>(), *msg.event_id, msg.origin, now, fx);
      }
      break;
    case MessageKind::BlockingRequest:
      handle_blocking_request(msg.body<BlockingBody>(), now, fx);
      break;
    case MessageKind::BlockingAck: {
      const auto& body = msg.body<BlockingBody>();
      if (auto it = drivers_.find(body.driver); it != drivers_.end()) it->second.acked = true;
      break;
    }
    case MessageKind::EventAnnouncement:
      if (msg.event_id) {
        IncidentRecord& incident = incidents_[*msg.event_id];
        incident.event_id = *msg.event_id;
        incident.location = msg.event_location.value_or(Vec2{});
        incident.timestamp = now;
        incident.incident_type = msg.body<EventBody>().type;
      }
      break;
    default: break;
  }
}

void TrustAuthority::write_csv(const std::filesystem::path& dir) const
{
  std::filesystem::create_directories(dir);
  std::ofstream d(dir / "ta_drivers.csv");
  d << "driver_id,vehicle_id,blocked,blocked_at,reason,malicious_events,acked\n";
  for (const auto& [id, r] : drivers_) {
    d << raw(id) << ',' << raw(r.vehicle_id) << ',' << (r.blocked ? 1 : 0) << ','
      << (r.blocked_at ? format_time(*r.blocked_at) : std::string("-")) << ','
      << (r.block_reason.empty() ? "-" : r.block_reason) << ',' << r.malicious_events.size()
      << ',' << (r.acked ? 1 : 0) << '\n';
  }
  std::ofstream h(dir / "ta_history.csv");
  h << "driver_id,time,amount,event_id,ruling\n";
  for (const auto& [id, r] : drivers_) {
    for (const auto& e : r.history) {
      h << raw(id) << ',' << format_time(e.time) << ',' << e.amount << ',' << raw(e.event_id) << ','
        << to_string(e.ruling) << '\n';
    }
  }
  std::ofstream i(dir / "ta_incidents.csv");
  i << "event_id,x,y,timestamp,type,ruling\n";
  for (const auto& [id, r] : incidents_) {
    i << raw(id) << ',' << r.location.x << ',' << r.location.y << ',' << format_time(r.timestamp)
      << ',' << (r.incident_type ? std::string(to_string(*r.incident_type)) : std::string("-"))
      << ',' << (r.ruling ? std::string(to_string(*r.ruling)) : std::string("-")) << '\n';
  }
}

}  // namespace vanet
