#include "vanet/scenarios.hpp"

#include <string>

#include "vanet/rng.hpp"

namespace vanet::scenarios {

namespace {

VehicleSpec parked(std::string name, Vec2 at, double trust)
{
  VehicleSpec v;
  v.name = std::move(name);
  v.mobility.kind = MobilityKind::Fixed;
  v.mobility.position = at;
  v.initial_trust = trust;
  v.behavior.reporter = ReporterMode::None;
  v.behavior.clarifier = ClarifierMode::None;
  return v;
}

std::vector<Vec2> rectangle(double w, double h) { return {{0, 0}, {w, 0}, {w, h}, {0, h}, {0, 0}}; }

Vec2 point_along(const std::vector<Vec2>& line, double d)
{
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const double len = distance(line[i], line[i + 1]);
    if (d <= len) return line[i] + (line[i + 1] - line[i]) * (d / len);
    d -= len;
  }
  return line.back();
}

std::string label_at(double t) { return "a" + std::to_string(static_cast<int>(t)); }

}  // namespace

Scenario fig4_trace()
{
  Scenario s;
  s.name = "fig4";
  s.seed = 4;
  s.duration = 2600.0;
  s.event_max_age = 600.0;
  s.vehicle.visit_radius = 20.0;
  s.vehicle.trust.initial_trust = 0.9;
  s.vehicle.trust.beacon_reward = 0.0;
  s.vehicle.trust.forward_reward = 0.0;
  s.vehicle.trust.clarify_reward = 0.0;
  s.vehicle.trust.report_reward = 0.0;
  s.rsu.rsu_reward = 0.08;
  s.rsu.ipp = {0.1, 0.3, 0.5};
  s.ta.malicious_threshold = 3;
  s.rsus = {{0.0, 0.0}};

  const Vec2 site{0.0, 0.0};
  VehicleSpec v0 = parked("V0", site, 0.9);
  for (double t = 100.0; t < s.duration; t += 200.0) {
    const bool untrue = t == 100.0 || t == 300.0 || t == 1700.0;
    v0.behavior.announce_schedule.push_back({t, EventType::Accident, !untrue, label_at(t), site, 0.0});
  }
  s.vehicles.push_back(v0);

  for (int k = 1; k <= 2; ++k) {
    VehicleSpec v = parked("V" + std::to_string(k), {0.0, 100.0 * k}, 0.9);
    for (double t = 100.0 + 50.0 * k; t < s.duration; t += 200.0) {
      v.behavior.announce_schedule.push_back(
          {t, EventType::Accident, true, "v" + std::to_string(k) + "_" + label_at(t), std::nullopt, 0.0});
    }
    s.vehicles.push_back(v);
  }

  VehicleSpec r1 = parked("R1", site, 0.9);
  r1.behavior.reporter = ReporterMode::Truthful;
  r1.behavior.report_labels = {"a100", "a300", "a1700"};
  s.vehicles.push_back(r1);

  VehicleSpec r2 = parked("R2", site, 0.9);
  r2.behavior.reporter = ReporterMode::Malicious;
  r2.behavior.report_labels = {"a700", "a900"};
  s.vehicles.push_back(r2);

  for (int k = 1; k <= 3; ++k) {
    VehicleSpec c = parked("C" + std::to_string(k), site, 0.9);
    c.behavior.clarifier = ClarifierMode::GroundTruth;
    c.behavior.silent_labels = {"a300", "a1700"};
    s.vehicles.push_back(c);
  }

  // The official waits 250 m down the road and drives to the site twice.
  VehicleSpec o1 = parked("O1", {250.0, 0.0}, 1.0);
  o1.kind = VehicleKind::Police;
  o1.initial_trust.reset();
  o1.mobility.kind = MobilityKind::Waypoints;
  const Vec2 home{250.0, 0.0};
  for (double arrive : {640.0, 2020.0}) {
    o1.mobility.waypoints.push_back({arrive - 10.0, home});
    o1.mobility.waypoints.push_back({arrive, site});
    o1.mobility.waypoints.push_back({arrive + 1.0, site});
    o1.mobility.waypoints.push_back({arrive + 11.0, home});
  }
  s.vehicles.push_back(o1);

  s.finalize();
  return s;
}

Scenario fig5_point(int density, double p_yes, std::uint64_t seed, SenderMode mode)
{
  Scenario s;
  s.name = "fig5";
  s.seed = seed;
  s.duration = 4000.0;
  s.warmup = 700.0;
  s.deliver_beacons_to_vehicles = false;
  s.vehicle.trust.initial_trust = 0.8;

  const double w = 600.0, h = 400.0, perimeter = 2.0 * (w + h);
  const std::vector<Vec2> loop = rectangle(w, h);
  for (int k = 0; k < 12; ++k) s.rsus.push_back(point_along(loop, (k + 0.5) * perimeter / 12.0));

  RngStream rng(seed, 0xF5);
  for (int i = 0; i < density; ++i) {
    VehicleSpec v;
    v.name = "v" + std::to_string(i);
    v.mobility.kind = MobilityKind::Route;
    v.mobility.points = loop;
    v.mobility.speed = rng.uniform(15.0, 25.0);
    v.mobility.offset = perimeter * i / density;
    v.behavior.reporter = mode == SenderMode::AllTrue ? ReporterMode::Malicious : ReporterMode::Truthful;
    v.behavior.report_probability = 0.4;
    v.behavior.clarifier = ClarifierMode::Probabilistic;
    v.behavior.clarifier_yes_probability = p_yes;
    s.vehicles.push_back(v);
  }

  const std::vector<Vec2> sites{{w / 2, 0}, {w, h * 0.75}, {0, h / 2}};
  for (std::size_t k = 0; k < sites.size(); ++k) {
    EventSourceSpec src;
    src.location = sites[k];
    src.start = s.warmup + 100.0 * k / sites.size();
    src.interval = 100.0;
    src.real = mode == SenderMode::AllTrue;
    src.label = "site" + std::to_string(k);
    s.event_sources.push_back(src);
  }
  s.finalize();
  return s;
}

Scenario fig6_point(int density, Protocol protocol, double baseline_timer, std::uint64_t seed)
{
  Scenario s;
  s.name = "fig6";
  s.seed = seed;
  s.duration = 800.0;
  s.protocol = protocol;
  s.deliver_beacons_to_vehicles = false;
  s.vehicle.trust.initial_trust = 0.8;
  s.vehicle.baseline_timer = baseline_timer;
  s.vehicle.baseline_scheme = baseline::Scheme::WeightedByReputation;
  s.vehicle.baseline_initial_reputation = 0.8;
  s.vehicle.observe_radius = 150.0;

  const std::vector<Vec2> loop = rectangle(1500.0, 1000.0);
  const double perimeter = 5000.0;
  for (int k = 0; k < 12; ++k) s.rsus.push_back(point_along(loop, (k + 0.5) * perimeter / 12.0));

  RngStream rng(seed, 0xF6);
  for (int i = 0; i < density; ++i) {
    VehicleSpec v;
    v.name = "v" + std::to_string(i);
    v.mobility.kind = MobilityKind::Route;
    v.mobility.points = loop;
    v.mobility.speed = rng.uniform(15.0, 25.0);
    v.mobility.offset = rng.uniform(0.0, perimeter);
    v.behavior.reporter = ReporterMode::None;
    // Proposed: a passer-by announces only an event it has not heard of.
    // Baseline: every passing observer announces.
    v.behavior.announce_observed = true;
    s.vehicles.push_back(v);
  }

  EventSourceSpec src;
  src.location = {750.0, 0.0};
  src.start = 400.0;
  src.count = 1;
  src.label = "incident";
  s.event_sources.push_back(src);
  s.finalize();
  return s;
}

}  // namespace vanet::scenarios
