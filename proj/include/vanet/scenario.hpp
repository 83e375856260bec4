#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vanet/authority.hpp"
#include "vanet/mobility.hpp"
#include "vanet/rsu.hpp"
#include "vanet/vehicle.hpp"

namespace vanet {

enum class MobilityKind { Fixed, Route, Waypoints, RandomWalk };

struct MobilitySpec {
  MobilityKind kind = MobilityKind::Fixed;
  Vec2 position;                 ///< Fixed; RandomWalk start (snapped to the nearest node)
  std::vector<Vec2> points;      ///< Route polyline
  std::string route;             ///< named road-network route, instead of points
  double speed = 0.0;            ///< Route; RandomWalk lower bound
  double speed_max = 0.0;        ///< RandomWalk upper bound (0: same as speed)
  EndPolicy end = EndPolicy::Loop;
  double offset = 0.0;           ///< Route start offset in meters
  std::vector<std::pair<SimTime, Vec2>> waypoints;
  std::size_t walk_steps = 50;
};

struct VehicleSpec {
  std::string name;
  VehicleKind kind = VehicleKind::Regular;
  MobilitySpec mobility;
  std::optional<double> initial_trust;  ///< default: trust.initial_trust
  SimTime enter_at = 0.0;
  BehaviorPolicy behavior;
  std::vector<std::pair<SimTime, std::string>> service_queries;
};

/// Kernel-driven incidents: registered at fixed times; optionally the
/// nearest eligible vehicle within `witness_range` announces each one.
struct EventSourceSpec {
  Vec2 location;
  EventType type = EventType::Accident;
  SimTime start = 0.0;
  double interval = 0.0;  ///< 0: a single occurrence
  int count = 0;          ///< 0: unbounded until the end of the run
  bool real = true;
  bool announce = true;
  double witness_range = 300.0;
  std::string label;
};

struct RoadSpec {
  enum class Type { None, Grid, Alternate } type = Type::None;
  double width = 2500.0;
  double height = 2500.0;
  double spacing = 500.0;
  double length = 2000.0;  ///< Alternate
  double offset = 400.0;   ///< Alternate
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  double duration = 4000.0;
  double warmup = 0.0;
  double tick = 1.0;
  double range = 300.0;
  double hop_latency = 0.005;
  double rsu_latency = 0.010;
  double ta_latency = 0.020;
  double event_max_age = 600.0;
  double uplink_ttl = 120.0;
  double downlink_ttl = 600.0;
  bool deliver_beacons_to_vehicles = true;
  Protocol protocol = Protocol::Proposed;

  VehicleConfig vehicle;
  RsuConfig rsu;
  TaConfig ta;
  bool has_ta = true;
  RoadSpec road;

  std::vector<Vec2> rsus;
  std::map<std::string, Vec2> services;
  std::vector<VehicleSpec> vehicles;
  std::vector<EventSourceSpec> event_sources;

  /// Propagate shared fields (protocol, hop limit, ...) into the per-agent
  /// configs and check ranges. Throws ConfigError.
  void finalize();
};

Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace vanet
