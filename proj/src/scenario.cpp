#include "vanet/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vanet {

using nlohmann::json;

namespace {

template <class T>
void opt(const json& j, const char* key, T& field)
{
  if (j.contains(key) && !j.at(key).is_null()) j.at(key).get_to(field);
}

json vec(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 to_vec(const json& j)
{
  if (!j.is_array() || j.size() != 2) throw ConfigError("expected [x, y], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

template <class Enum, class Fn>
Enum parse_enum(const json& j, const char* what, Fn&& from_string)
{
  const auto name = j.get<std::string>();
  if (auto v = from_string(name)) return *v;
  throw ConfigError(std::string("unknown ") + what + ": " + name);
}

std::optional<Protocol> protocol_from(std::string_view s)
{
  if (s == "proposed") return Protocol::Proposed;
  if (s == "baseline") return Protocol::Baseline;
  return std::nullopt;
}
std::string protocol_name(Protocol p) { return p == Protocol::Proposed ? "proposed" : "baseline"; }

std::optional<ReporterMode> reporter_from(std::string_view s)
{
  if (s == "none") return ReporterMode::None;
  if (s == "truthful") return ReporterMode::Truthful;
  if (s == "malicious") return ReporterMode::Malicious;
  return std::nullopt;
}
std::string reporter_name(ReporterMode m)
{
  switch (m) {
    case ReporterMode::None: return "none";
    case ReporterMode::Truthful: return "truthful";
    case ReporterMode::Malicious: return "malicious";
  }
  return "?";
}

std::optional<ClarifierMode> clarifier_from(std::string_view s)
{
  if (s == "none") return ClarifierMode::None;
  if (s == "ground_truth") return ClarifierMode::GroundTruth;
  if (s == "probabilistic") return ClarifierMode::Probabilistic;
  if (s == "inverted") return ClarifierMode::Inverted;
  return std::nullopt;
}
std::string clarifier_name(ClarifierMode m)
{
  switch (m) {
    case ClarifierMode::None: return "none";
    case ClarifierMode::GroundTruth: return "ground_truth";
    case ClarifierMode::Probabilistic: return "probabilistic";
    case ClarifierMode::Inverted: return "inverted";
  }
  return "?";
}

std::optional<MobilityKind> mobility_from(std::string_view s)
{
  if (s == "fixed") return MobilityKind::Fixed;
  if (s == "route") return MobilityKind::Route;
  if (s == "waypoints") return MobilityKind::Waypoints;
  if (s == "random_walk") return MobilityKind::RandomWalk;
  return std::nullopt;
}
std::string mobility_name(MobilityKind k)
{
  switch (k) {
    case MobilityKind::Fixed: return "fixed";
    case MobilityKind::Route: return "route";
    case MobilityKind::Waypoints: return "waypoints";
    case MobilityKind::RandomWalk: return "random_walk";
  }
  return "?";
}

json mobility_json(const MobilitySpec& m)
{
  json j{{"type", mobility_name(m.kind)}};
  switch (m.kind) {
    case MobilityKind::Fixed: j["position"] = vec(m.position); break;
    case MobilityKind::Route: {
      if (!m.route.empty()) {
        j["route"] = m.route;
      } else {
        json pts = json::array();
        for (Vec2 p : m.points) pts.push_back(vec(p));
        j["points"] = pts;
      }
      j["speed"] = m.speed;
      j["end"] = m.end == EndPolicy::Loop ? "loop" : "park";
      j["offset"] = m.offset;
      break;
    }
    case MobilityKind::Waypoints: {
      json pts = json::array();
      for (const auto& [t, p] : m.waypoints) pts.push_back(json::array({t, p.x, p.y}));
      j["points"] = pts;
      break;
    }
    case MobilityKind::RandomWalk:
      j["start"] = vec(m.position);
      j["speed"] = json::array({m.speed, m.speed_max});
      j["steps"] = m.walk_steps;
      break;
  }
  return j;
}

MobilitySpec mobility_spec(const json& j)
{
  MobilitySpec m;
  m.kind = parse_enum<MobilityKind>(j.at("type"), "mobility", mobility_from);
  switch (m.kind) {
    case MobilityKind::Fixed: m.position = to_vec(j.at("position")); break;
    case MobilityKind::Route:
      opt(j, "route", m.route);
      if (j.contains("points")) {
        for (const auto& p : j.at("points")) m.points.push_back(to_vec(p));
      }
      if (m.route.empty() && m.points.size() < 2) throw ConfigError("route needs >= 2 points");
      opt(j, "speed", m.speed);
      if (j.contains("end")) m.end = j.at("end").get<std::string>() == "park" ? EndPolicy::Park : EndPolicy::Loop;
      opt(j, "offset", m.offset);
      break;
    case MobilityKind::Waypoints:
      for (const auto& p : j.at("points")) {
        m.waypoints.emplace_back(p.at(0).get<double>(), Vec2{p.at(1).get<double>(), p.at(2).get<double>()});
      }
      break;
    case MobilityKind::RandomWalk:
      m.position = to_vec(j.at("start"));
      if (j.at("speed").is_array()) {
        m.speed = j.at("speed").at(0).get<double>();
        m.speed_max = j.at("speed").at(1).get<double>();
      } else {
        m.speed = m.speed_max = j.at("speed").get<double>();
      }
      opt(j, "steps", m.walk_steps);
      break;
  }
  return m;
}

json behavior_json(const BehaviorPolicy& b)
{
  json announce = json::array();
  for (const auto& a : b.announce_schedule) {
    json e{{"time", a.time},
           {"type", to_string(a.type)},
           {"truthful", a.truthful},
           {"label", a.label},
           {"delay", a.observation_delay}};
    if (a.location) e["location"] = vec(*a.location);
    announce.push_back(e);
  }
  return {{"reporter", reporter_name(b.reporter)},
          {"report_probability", b.report_probability},
          {"report_labels", b.report_labels},
          {"clarifier", clarifier_name(b.clarifier)},
          {"yes_probability", b.clarifier_yes_probability},
          {"silent_labels", b.silent_labels},
          {"announce_observed", b.announce_observed},
          {"attend_events", b.attend_events},
          {"announce", announce}};
}

BehaviorPolicy behavior_spec(const json& j)
{
  BehaviorPolicy b;
  if (j.contains("reporter")) b.reporter = parse_enum<ReporterMode>(j.at("reporter"), "reporter", reporter_from);
  opt(j, "report_probability", b.report_probability);
  opt(j, "report_labels", b.report_labels);
  if (j.contains("clarifier")) {
    b.clarifier = parse_enum<ClarifierMode>(j.at("clarifier"), "clarifier", clarifier_from);
  }
  opt(j, "yes_probability", b.clarifier_yes_probability);
  opt(j, "silent_labels", b.silent_labels);
  opt(j, "announce_observed", b.announce_observed);
  opt(j, "attend_events", b.attend_events);
  if (j.contains("announce")) {
    for (const auto& e : j.at("announce")) {
      ScheduledAnnouncement a;
      a.time = e.at("time").get<double>();
      if (e.contains("type")) a.type = parse_enum<EventType>(e.at("type"), "event type", event_type_from_string);
      opt(e, "truthful", a.truthful);
      opt(e, "label", a.label);
      opt(e, "delay", a.observation_delay);
      if (e.contains("location")) a.location = to_vec(e.at("location"));
      b.announce_schedule.push_back(a);
    }
  }
  b.validate();
  return b;
}

}  // namespace

void Scenario::finalize()
{
  if (duration < 0.0 || warmup < 0.0 || tick <= 0.0 || range <= 0.0) {
    throw ConfigError("duration/warmup must be >= 0; tick and range > 0");
  }
  if (vehicle.t_int <= 0.0 || vehicle.t_dis <= 0.0) throw ConfigError("T_int and T_dis must be positive");
  if (vehicle.hop_limit < 0 || vehicle.retransmit_limit < 0) throw ConfigError("negative hop/retransmit limit");
  if (vehicle.trust.floor >= vehicle.trust.cap) throw ConfigError("trust floor must be below cap");
  vehicle.protocol = protocol;
  rsu.protocol = protocol;
  rsu.hop_limit = vehicle.hop_limit;
  rsu.retransmit_limit = vehicle.retransmit_limit;
  rsu.retransmit_interval = vehicle.retransmit_interval;
  if (!std::isfinite(ta.window)) ta.window = duration;
  for (const auto& v : vehicles) {
    v.behavior.validate();
    if (v.initial_trust && (*v.initial_trust < vehicle.trust.floor || *v.initial_trust > vehicle.trust.cap)) {
      throw ConfigError("initial trust outside [floor, cap] for " + v.name);
    }
  }
}

std::string scenario_to_json_text(const Scenario& s)
{
  const auto& t = s.vehicle.trust;
  json j;
  j["name"] = s.name;
  j["seed"] = s.seed;
  j["duration"] = s.duration;
  j["warmup"] = s.warmup;
  j["tick"] = s.tick;
  j["range"] = s.range;
  j["latency"] = {{"hop", s.hop_latency}, {"rsu", s.rsu_latency}, {"ta", s.ta_latency}};
  j["event_max_age"] = s.event_max_age;
  j["uplink_ttl"] = s.uplink_ttl;
  j["downlink_ttl"] = s.downlink_ttl;
  j["deliver_beacons_to_vehicles"] = s.deliver_beacons_to_vehicles;
  j["protocol"] = protocol_name(s.protocol);
  j["trust"] = {{"floor", t.floor},
                {"cap", t.cap},
                {"initial_trust", t.initial_trust},
                {"withhold_duration", t.withhold_duration},
                {"blocking_check_period", t.blocking_check_period},
                {"beacon_reward", t.beacon_reward},
                {"forward_reward", t.forward_reward},
                {"clarify_reward", t.clarify_reward},
                {"report_reward", t.report_reward}};
  const auto& v = s.vehicle;
  const auto& r = s.rsu;
  j["params"] = {{"hop_limit", v.hop_limit},
                 {"retransmit_limit", v.retransmit_limit},
                 {"retransmit_interval", v.retransmit_interval},
                 {"t_int", v.t_int},
                 {"t_dis", v.t_dis},
                 {"visit_radius", v.visit_radius},
                 {"observe_radius", v.observe_radius},
                 {"beacon_interval", v.beacon_interval},
                 {"sort_duration", v.sort_duration},
                 {"collaboration_timer", r.collaboration_timer},
                 {"rsu_reward", r.rsu_reward},
                 {"ipp", r.ipp},
                 {"share_high", r.share_high},
                 {"share_mid", r.share_mid},
                 {"neighbor_radius", r.neighbor_radius},
                 {"reannounce_interval", r.reannounce_interval},
                 {"confirmation_repeat", r.confirmation_repeat},
                 {"confirmation_repeats", r.confirmation_repeats}};
  j["baseline"] = {{"scheme", baseline::to_string(v.baseline_scheme)},
                   {"timer", v.baseline_timer},
                   {"initial_reputation", v.baseline_initial_reputation},
                   {"reputation_interval", r.reputation_interval},
                   {"reputation_step", r.reputation_step}};
  j["ta"] = {{"enabled", s.has_ta},
             {"window", std::isfinite(s.ta.window) ? json(s.ta.window) : json(nullptr)},
             {"threshold", s.ta.malicious_threshold},
             {"vicinity_radius", s.ta.vicinity_radius}};
  if (s.road.type != RoadSpec::Type::None) {
    j["road"] = {{"type", s.road.type == RoadSpec::Type::Grid ? "grid" : "alternate"},
                 {"width", s.road.width},
                 {"height", s.road.height},
                 {"spacing", s.road.spacing},
                 {"length", s.road.length},
                 {"offset", s.road.offset}};
  }
  j["rsus"] = json::array();
  for (Vec2 p : s.rsus) j["rsus"].push_back(vec(p));
  j["services"] = json::object();
  for (const auto& [name, p] : s.services) j["services"][name] = vec(p);
  j["vehicles"] = json::array();
  for (const auto& veh : s.vehicles) {
    json e{{"name", veh.name},
           {"kind", to_string(veh.kind)},
           {"mobility", mobility_json(veh.mobility)},
           {"enter_at", veh.enter_at},
           {"behavior", behavior_json(veh.behavior)}};
    if (veh.initial_trust) e["initial_trust"] = *veh.initial_trust;
    if (!veh.service_queries.empty()) {
      json q = json::array();
      for (const auto& [time, name] : veh.service_queries) q.push_back(json::array({time, name}));
      e["service_queries"] = q;
    }
    j["vehicles"].push_back(e);
  }
  j["event_sources"] = json::array();
  for (const auto& src : s.event_sources) {
    j["event_sources"].push_back({{"location", vec(src.location)},
                                  {"type", to_string(src.type)},
                                  {"start", src.start},
                                  {"interval", src.interval},
                                  {"count", src.count},
                                  {"real", src.real},
                                  {"announce", src.announce},
                                  {"witness_range", src.witness_range},
                                  {"label", src.label}});
  }
  return j.dump(2);
}

Scenario scenario_from_json_text(const std::string& text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
  Scenario s;
  try {
    opt(j, "name", s.name);
    opt(j, "seed", s.seed);
    opt(j, "duration", s.duration);
    opt(j, "warmup", s.warmup);
    opt(j, "tick", s.tick);
    opt(j, "range", s.range);
    if (j.contains("latency")) {
      opt(j["latency"], "hop", s.hop_latency);
      opt(j["latency"], "rsu", s.rsu_latency);
      opt(j["latency"], "ta", s.ta_latency);
    }
    opt(j, "event_max_age", s.event_max_age);
    opt(j, "uplink_ttl", s.uplink_ttl);
    opt(j, "downlink_ttl", s.downlink_ttl);
    opt(j, "deliver_beacons_to_vehicles", s.deliver_beacons_to_vehicles);
    if (j.contains("protocol")) s.protocol = parse_enum<Protocol>(j.at("protocol"), "protocol", protocol_from);

    if (j.contains("trust")) {
      const json& t = j["trust"];
      auto& c = s.vehicle.trust;
      opt(t, "floor", c.floor);
      opt(t, "cap", c.cap);
      opt(t, "initial_trust", c.initial_trust);
      opt(t, "withhold_duration", c.withhold_duration);
      opt(t, "blocking_check_period", c.blocking_check_period);
      opt(t, "beacon_reward", c.beacon_reward);
      opt(t, "forward_reward", c.forward_reward);
      opt(t, "clarify_reward", c.clarify_reward);
      opt(t, "report_reward", c.report_reward);
    }
    if (j.contains("params")) {
      const json& p = j["params"];
      auto& v = s.vehicle;
      auto& r = s.rsu;
      opt(p, "hop_limit", v.hop_limit);
      opt(p, "retransmit_limit", v.retransmit_limit);
      opt(p, "retransmit_interval", v.retransmit_interval);
      opt(p, "t_int", v.t_int);
      opt(p, "t_dis", v.t_dis);
      opt(p, "visit_radius", v.visit_radius);
      opt(p, "observe_radius", v.observe_radius);
      opt(p, "beacon_interval", v.beacon_interval);
      opt(p, "sort_duration", v.sort_duration);
      opt(p, "collaboration_timer", r.collaboration_timer);
      opt(p, "rsu_reward", r.rsu_reward);
      opt(p, "ipp", r.ipp);
      opt(p, "share_high", r.share_high);
      opt(p, "share_mid", r.share_mid);
      opt(p, "neighbor_radius", r.neighbor_radius);
      opt(p, "reannounce_interval", r.reannounce_interval);
      opt(p, "confirmation_repeat", r.confirmation_repeat);
      opt(p, "confirmation_repeats", r.confirmation_repeats);
    }
    if (j.contains("baseline")) {
      const json& b = j["baseline"];
      if (b.contains("scheme")) {
        s.vehicle.baseline_scheme =
            parse_enum<baseline::Scheme>(b.at("scheme"), "baseline scheme", baseline::scheme_from_string);
      }
      opt(b, "timer", s.vehicle.baseline_timer);
      opt(b, "initial_reputation", s.vehicle.baseline_initial_reputation);
      opt(b, "reputation_interval", s.rsu.reputation_interval);
      opt(b, "reputation_step", s.rsu.reputation_step);
      s.rsu.reputation_initial = s.vehicle.baseline_initial_reputation;
    }
    if (j.contains("ta")) {
      const json& t = j["ta"];
      opt(t, "enabled", s.has_ta);
      opt(t, "window", s.ta.window);
      opt(t, "threshold", s.ta.malicious_threshold);
      opt(t, "vicinity_radius", s.ta.vicinity_radius);
    }
    if (j.contains("road")) {
      const json& r = j["road"];
      const auto type = r.at("type").get<std::string>();
      if (type == "grid") {
        s.road.type = RoadSpec::Type::Grid;
      } else if (type == "alternate") {
        s.road.type = RoadSpec::Type::Alternate;
      } else {
        throw ConfigError("unknown road type: " + type);
      }
      opt(r, "width", s.road.width);
      opt(r, "height", s.road.height);
      opt(r, "spacing", s.road.spacing);
      opt(r, "length", s.road.length);
      opt(r, "offset", s.road.offset);
    }
    if (j.contains("rsus")) {
      for (const auto& p : j["rsus"]) s.rsus.push_back(to_vec(p));
    }
    if (j.contains("services")) {
      for (const auto& [name, p] : j["services"].items()) s.services[name] = to_vec(p);
    }
    if (j.contains("vehicles")) {
      for (const auto& e : j["vehicles"]) {
        VehicleSpec v;
        opt(e, "name", v.name);
        if (e.contains("kind")) v.kind = parse_enum<VehicleKind>(e.at("kind"), "vehicle kind", vehicle_kind_from_string);
        v.mobility = mobility_spec(e.at("mobility"));
        if (e.contains("initial_trust")) v.initial_trust = e.at("initial_trust").get<double>();
        opt(e, "enter_at", v.enter_at);
        if (e.contains("behavior")) v.behavior = behavior_spec(e.at("behavior"));
        if (e.contains("service_queries")) {
          for (const auto& q : e.at("service_queries")) {
            v.service_queries.emplace_back(q.at(0).get<double>(), q.at(1).get<std::string>());
          }
        }
        s.vehicles.push_back(std::move(v));
      }
    }
    if (j.contains("event_sources")) {
      for (const auto& e : j["event_sources"]) {
        EventSourceSpec src;
        src.location = to_vec(e.at("location"));
        if (e.contains("type")) src.type = parse_enum<EventType>(e.at("type"), "event type", event_type_from_string);
        opt(e, "start", src.start);
        opt(e, "interval", src.interval);
        opt(e, "count", src.count);
        opt(e, "real", src.real);
        opt(e, "announce", src.announce);
        opt(e, "witness_range", src.witness_range);
        opt(e, "label", src.label);
        s.event_sources.push_back(src);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
  s.finalize();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

}  // namespace vanet
