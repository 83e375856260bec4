#include "vanet/simulation.hpp"

#include <limits>

namespace vanet {

namespace {
constexpr std::uint64_t kRouteStreamBase = 1'000'000;
}

Simulation::Simulation(Scenario scenario) : scenario_(std::move(scenario)), channel_(scenario_.range)
{
  scenario_.finalize();
  const auto& s = scenario_;
  switch (s.road.type) {
    case RoadSpec::Type::Grid: road_ = RoadNetwork::grid(s.road.width, s.road.height, s.road.spacing); break;
    case RoadSpec::Type::Alternate: road_ = RoadNetwork::alternate_route(s.road.length, s.road.offset); break;
    case RoadSpec::Type::None: break;
  }

  const auto n_vehicles = static_cast<std::uint32_t>(s.vehicles.size());
  const auto n_rsus = static_cast<std::uint32_t>(s.rsus.size());
  for (std::uint32_t j = 0; j < n_rsus; ++j) directory_.rsus.push_back({EntityId{n_vehicles + j}, s.rsus[j]});
  if (s.has_ta) directory_.ta = EntityId{n_vehicles + n_rsus};
  directory_.services = s.services;

  vehicles_.reserve(n_vehicles);
  for (std::uint32_t i = 0; i < n_vehicles; ++i) {
    const VehicleSpec& spec = s.vehicles[i];
    const MobilitySpec& m = spec.mobility;
    std::optional<Mobility> mobility;
    switch (m.kind) {
      case MobilityKind::Fixed: mobility = Mobility::fixed(m.position); break;
      case MobilityKind::Route: {
        std::vector<Vec2> poly = m.points;
        if (!m.route.empty()) {
          if (!road_) throw ConfigError("named route needs a road network");
          poly = road_->polyline(road_->route(m.route));
        }
        mobility = Mobility::route(std::move(poly), m.speed, m.end, m.offset);
        break;
      }
      case MobilityKind::Waypoints: mobility = Mobility::waypoints(m.waypoints); break;
      case MobilityKind::RandomWalk: {
        if (!road_) throw ConfigError("random walk needs a road network");
        RngStream rng(s.seed, kRouteStreamBase + i);
        const auto path = road_->random_walk(road_->nearest_node(m.position), m.walk_steps, rng);
        const double hi = m.speed_max > 0.0 ? m.speed_max : m.speed;
        mobility = Mobility::route(road_->polyline(path), rng.uniform(m.speed, hi), EndPolicy::Park);
        break;
      }
    }
    if (is_official(spec.kind)) directory_.officials.push_back(EntityId{i});
    vehicles_.emplace_back(EntityId{i}, spec.kind, std::move(*mobility), spec.behavior,
                           spec.initial_trust.value_or(s.vehicle.trust.initial_trust), scenario_.vehicle,
                           RngStream(s.seed, i + 1));
  }
  present_.assign(n_vehicles, false);

  rsus_.reserve(n_rsus);
  for (const RadioNode& r : directory_.rsus) rsus_.emplace_back(r.id, r.position, scenario_.rsu, directory_);
  if (s.has_ta) {
    ta_.emplace(directory_.ta, s.ta, directory_);
    for (const VehicleAgent& v : vehicles_) {
      if (!v.official()) ta_->register_driver(v.driver(), v.id());
    }
  }

  for (std::uint32_t i = 0; i < n_vehicles; ++i) {
    const VehicleSpec& spec = s.vehicles[i];
    queue_.schedule(spec.enter_at, EntityId{i}, VehicleEntry{});
    for (std::size_t k = 0; k < spec.behavior.announce_schedule.size(); ++k) {
      queue_.schedule(spec.behavior.announce_schedule[k].time, EntityId{i}, AnnouncementDue{k});
    }
    for (std::size_t k = 0; k < spec.service_queries.size(); ++k) {
      queue_.schedule(spec.service_queries[k].first, EntityId{i}, ServiceQueryDue{k});
    }
  }
  for (RsuNode& rsu : rsus_) {
    Effects fx;
    rsu.start(0.0, fx);
    apply(rsu.id(), fx);
  }
  for (std::size_t k = 0; k < s.event_sources.size(); ++k) {
    queue_.schedule(s.event_sources[k].start, kKernelEntity, EventSourceDue{k, 0});
  }
  queue_.schedule(s.tick, kKernelEntity, MobilityTick{});
}

VehicleAgent& Simulation::vehicle(EntityId id) { return vehicles_.at(raw(id)); }

bool Simulation::present(EntityId vehicle) const
{
  return raw(vehicle) < present_.size() && present_[raw(vehicle)];
}

bool Simulation::is_rsu(EntityId id) const
{
  const auto r = raw(id);
  return r >= vehicles_.size() && r < vehicles_.size() + rsus_.size();
}

Vec2 Simulation::position_of(EntityId id) const
{
  if (is_vehicle(id)) return vehicles_[raw(id)].position();
  if (is_rsu(id)) return rsus_[raw(id) - vehicles_.size()].position();
  return {};
}

void Simulation::refresh_positions()
{
  vehicle_nodes_.clear();
  for (const VehicleAgent& v : vehicles_) {
    if (present_[raw(v.id())]) vehicle_nodes_.push_back({v.id(), v.position()});
  }
}

void Simulation::run(std::optional<SimTime> until)
{
  const SimTime end = until.value_or(scenario_.duration);
  while (!queue_.empty() && *queue_.next_time() <= end) dispatch(queue_.pop());
}

void Simulation::dispatch(const SimEvent<Deliverable>& ev)
{
  const SimTime now = ev.time;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, MessageArrival>) {
          deliver(ev.target, p);
        } else if constexpr (std::is_same_v<T, TimerFired>) {
          Effects fx;
          if (is_vehicle(ev.target)) {
            if (!present(ev.target)) return;
            vehicles_[raw(ev.target)].on_timer(p.kind, p.key, now, truth_, fx);
          } else if (is_rsu(ev.target)) {
            rsus_[raw(ev.target) - vehicles_.size()].on_timer(p.kind, p.key, now, fx);
          }
          apply(ev.target, fx);
        } else if constexpr (std::is_same_v<T, MobilityTick>) {
          on_tick();
        } else if constexpr (std::is_same_v<T, AnnouncementDue>) {
          if (!present(ev.target)) return;
          VehicleAgent& v = vehicles_[raw(ev.target)];
          const ScheduledAnnouncement& sa = v.policy().announce_schedule.at(p.index);
          const Vec2 where = sa.location.value_or(v.position());
          const EventId e = truth_.register_event(sa.type, where, now - sa.observation_delay,
                                                  sa.truthful, sa.label);
          Effects fx;
          v.announce_event(*truth_.find(e), now, fx);
          apply(ev.target, fx);
        } else if constexpr (std::is_same_v<T, EventSourceDue>) {
          on_event_source(p.source, p.occurrence);
        } else if constexpr (std::is_same_v<T, VehicleEntry>) {
          present_[raw(ev.target)] = true;
          refresh_positions();
          Effects fx;
          vehicles_[raw(ev.target)].start(now, fx);
          apply(ev.target, fx);
        } else if constexpr (std::is_same_v<T, ServiceQueryDue>) {
          if (!present(ev.target)) return;
          Effects fx;
          const auto& q = scenario_.vehicles[raw(ev.target)].service_queries.at(p.index);
          vehicles_[raw(ev.target)].service_query(q.second, now, fx);
          apply(ev.target, fx);
        }
      },
      ev.payload);
}

void Simulation::deliver(EntityId target, const MessageArrival& arrival)
{
  const SimTime now = queue_.now();
  Effects fx;
  if (is_vehicle(target)) {
    if (!present(target)) return;
    vehicles_[raw(target)].on_message(*arrival.msg, now, truth_, fx);
  } else if (is_rsu(target)) {
    rsus_[raw(target) - vehicles_.size()].on_message(*arrival.msg, arrival.wired, now, fx);
  } else if (is_ta(target)) {
    ta_->on_message(*arrival.msg, now, fx);
  }
  apply(target, fx);
}

void Simulation::apply(EntityId actor, Effects& fx)
{
  const SimTime now = queue_.now();
  for (const trust::TrustUpdate& u : fx.trust) {
    logs_.trust.push_back({now, u.driver, actor, u.after, trust::classify(u.after, scenario_.vehicle.trust),
                           u.cause, u.after - u.before});
  }
  for (Outgoing& out : fx.sends) send(actor, out);
  for (const TimerRequest& t : fx.timers) queue_.schedule(t.at, actor, TimerFired{t.kind, t.key});
  for (DisputeRecord& r : fx.rulings) logs_.disputes.push_back(std::move(r));
  for (const ResponseRecord& r : fx.responses) logs_.responses.push_back(r);
  for (EventId e : fx.resolved) truth_.resolve(e);
  for (const std::string& d : fx.diagnostics) {
    logs_.diagnostics.push_back(format_time(now) + " " + std::to_string(raw(actor)) + ": " + d);
  }
}

void Simulation::log_transmission(EntityId sender, std::optional<EntityId> receiver,
                                  const VanetMessage& msg, bool relay,
                                  std::optional<double> trust, bool blocked)
{
  TransmissionRecord rec;
  rec.time = queue_.now();
  rec.sender = sender;
  rec.receiver = receiver;
  rec.kind = msg.kind;
  rec.message_id = msg.id;
  rec.hop = msg.hops;
  rec.bytes = serialize(msg).size();
  rec.origin = msg.origin;
  rec.originated = !relay && msg.origin == sender;
  rec.event_id = msg.event_id;
  if (auto* body = std::get_if<EventBody>(&msg.payload)) rec.event_type = body->type;
  rec.sender_is_vehicle = is_vehicle(sender);
  if (rec.sender_is_vehicle) {
    const VehicleAgent& v = vehicles_[raw(sender)];
    rec.sender_trust = trust.value_or(v.trust());
    rec.sender_blocked = trust ? blocked : v.blocked();
    rec.sender_official = v.official();
  }
  logs_.transmissions.push_back(std::move(rec));

  if (is_vehicle(sender) && !relay && msg.kind == MessageKind::EventAnnouncement && msg.event_id) {
    const EventRecord* ev = truth_.find(*msg.event_id);
    if (ev && !ev->announced_at) truth_.mark_announced(*msg.event_id, queue_.now());
  }
}

std::vector<EntityId> Simulation::broadcast(EntityId sender, const VanetMessage& msg, bool relay)
{
  return broadcast_stamped(sender, msg, relay, std::nullopt, false);
}

std::vector<EntityId> Simulation::broadcast_stamped(EntityId sender, const VanetMessage& msg,
                                                    bool relay, std::optional<double> trust,
                                                    bool blocked)
{
  const SimTime at = queue_.now() + scenario_.hop_latency;
  const Vec2 origin = position_of(sender);
  log_transmission(sender, std::nullopt, msg, relay, trust, blocked);
  auto shared = std::make_shared<const VanetMessage>(msg);

  std::vector<EntityId> receivers;
  if (msg.kind != MessageKind::Beacon || scenario_.deliver_beacons_to_vehicles) {
    receivers = channel_.neighbors(vehicle_nodes_, origin, sender);
  }
  for (EntityId r : channel_.neighbors(directory_.rsus, origin, sender)) receivers.push_back(r);
  for (EntityId r : receivers) queue_.schedule(at, r, MessageArrival{shared, sender, false});
  return receivers;
}

std::optional<EntityId> Simulation::covering_rsu(Vec2 p) const
{
  std::optional<EntityId> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const RadioNode& r : directory_.rsus) {
    const double d = distance(r.position, p);
    if (d <= channel_.range() && d < best_d) {
      best = r.id;
      best_d = d;
    }
  }
  return best;
}

bool Simulation::try_uplink(const PendingLink& link)
{
  if (!present(link.sender)) return true;
  const auto rsu = covering_rsu(position_of(link.sender));
  if (!rsu) return false;
  log_transmission(link.sender, *rsu, link.msg, false, link.trust, link.blocked);
  queue_.schedule(queue_.now() + scenario_.hop_latency, *rsu,
                  MessageArrival{std::make_shared<const VanetMessage>(link.msg), link.sender, false});
  return true;
}

bool Simulation::try_downlink(const PendingLink& link)
{
  if (!present(link.target)) return false;
  const auto rsu = covering_rsu(position_of(link.target));
  if (!rsu) return false;
  double delay = 0.0;
  if (*rsu != link.sender) {
    log_transmission(link.sender, *rsu, link.msg, true);
    delay = is_ta(link.sender) ? scenario_.ta_latency : scenario_.rsu_latency;
  }
  log_transmission(*rsu, link.target, link.msg, *rsu != link.sender);
  queue_.schedule(queue_.now() + delay + scenario_.hop_latency, link.target,
                  MessageArrival{std::make_shared<const VanetMessage>(link.msg), *rsu, false});
  return true;
}

void Simulation::send(EntityId actor, Outgoing& out)
{
  const SimTime now = queue_.now();
  switch (out.route) {
    case Route::Radio:
      broadcast_stamped(actor, out.msg, out.relay, out.sender_trust, out.sender_blocked);
      break;
    case Route::Wired: {
      log_transmission(actor, out.to, out.msg, out.relay);
      const double delay = (is_ta(actor) || is_ta(out.to)) ? scenario_.ta_latency : scenario_.rsu_latency;
      queue_.schedule(now + delay, out.to,
                      MessageArrival{std::make_shared<const VanetMessage>(std::move(out.msg)), actor, true});
      break;
    }
    case Route::Uplink: {
      PendingLink link{actor, kNoEntity, std::move(out.msg), now + scenario_.uplink_ttl,
                       out.sender_trust, out.sender_blocked};
      if (!try_uplink(link)) uplinks_.push_back(std::move(link));
      break;
    }
    case Route::Downlink: {
      PendingLink link{actor, out.to, std::move(out.msg), now + scenario_.downlink_ttl, std::nullopt, false};
      if (!try_downlink(link)) downlinks_.push_back(std::move(link));
      break;
    }
  }
}

void Simulation::on_tick()
{
  const SimTime now = queue_.now();
  const auto active = truth_.active(now, scenario_.event_max_age);
  std::vector<Sighting> visits(vehicles_.size());
  for (VehicleAgent& v : vehicles_) {
    if (present_[raw(v.id())]) visits[raw(v.id())] = v.step_mobility(scenario_.tick, now, active);
  }
  refresh_positions();
  for (VehicleAgent& v : vehicles_) {
    const Sighting& sighting = visits[raw(v.id())];
    if (sighting.empty()) continue;
    Effects fx;
    v.process_visits(sighting, now, truth_, fx);
    apply(v.id(), fx);
  }

  auto flush = [&](std::deque<PendingLink>& links, auto&& attempt) {
    std::deque<PendingLink> keep;
    for (PendingLink& link : links) {
      if (attempt(link)) continue;
      if (now <= link.expires) {
        keep.push_back(std::move(link));
      } else {
        logs_.diagnostics.push_back(format_time(now) + " dropped undeliverable " +
                                    std::string(to_string(link.msg.kind)));
      }
    }
    links.swap(keep);
  };
  flush(uplinks_, [&](const PendingLink& l) { return try_uplink(l); });
  flush(downlinks_, [&](const PendingLink& l) { return try_downlink(l); });

  if (now + scenario_.tick <= scenario_.duration) queue_.schedule(now + scenario_.tick, kKernelEntity, MobilityTick{});
}

void Simulation::on_event_source(std::size_t source, int occurrence)
{
  const SimTime now = queue_.now();
  const EventSourceSpec& src = scenario_.event_sources.at(source);
  std::string label = src.label.empty() ? "src" + std::to_string(source) : src.label;
  label += "-" + std::to_string(occurrence);
  const EventId e = truth_.register_event(src.type, src.location, now, src.real, label);

  if (src.announce) {
    std::optional<EntityId> witness;
    double best = std::numeric_limits<double>::infinity();
    for (const VehicleAgent& v : vehicles_) {
      if (!present_[raw(v.id())] || v.official()) continue;
      if (!permitted(src.type, v.trust(), v.blocked())) continue;
      const double d = distance(v.position(), src.location);
      if (d <= src.witness_range && d < best) {
        witness = v.id();
        best = d;
      }
    }
    if (witness) {
      Effects fx;
      vehicles_[raw(*witness)].announce_event(*truth_.find(e), now, fx);
      apply(*witness, fx);
    }
  }

  const bool more = src.interval > 0.0 && (src.count == 0 || occurrence + 1 < src.count);
  if (more && now + src.interval <= scenario_.duration) {
    queue_.schedule(now + src.interval, kKernelEntity, EventSourceDue{source, occurrence + 1});
  }
}

void Simulation::admin_unblock(DriverId driver)
{
  if (ta_) ta_->unblock(driver);
  for (VehicleAgent& v : vehicles_) {
    trust::Tpd* tpd = v.tpd();
    if (!tpd || !tpd->knows(driver)) continue;
    const auto u = tpd->unblock(driver);
    logs_.trust.push_back({queue_.now(), driver, v.id(), u.after,
                           trust::classify(u.after, scenario_.vehicle.trust), u.cause, u.after - u.before});
  }
}

}  // namespace vanet
