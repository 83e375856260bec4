#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vanet/rng.hpp"
#include "vanet/types.hpp"

namespace vanet {

/// Shortest distance from `p` to the segment [a, b].
double segment_distance(Vec2 p, Vec2 a, Vec2 b);

struct Segment {
  Vec2 from;
  Vec2 to;
};

/// Synthetic road network: intersections, two-way edges and named routes.
class RoadNetwork {
 public:
  static RoadNetwork grid(double width, double height, double spacing);
  /// A main road with a parallel detour joined at both ends.
  static RoadNetwork alternate_route(double length, double offset);

  std::size_t add_node(Vec2 position);
  void add_edge(std::size_t a, std::size_t b);
  void add_route(std::string name, std::vector<std::size_t> nodes);

  const std::vector<Vec2>& nodes() const { return nodes_; }
  bool has_edge(std::size_t a, std::size_t b) const;
  const std::vector<std::size_t>& neighbors(std::size_t node) const { return adjacency_.at(node); }
  const std::vector<std::size_t>& route(const std::string& name) const;
  std::size_t nearest_node(Vec2 p) const;
  Vec2 area() const { return area_; }

  /// Node sequence -> polyline; throws ConfigError if consecutive nodes are
  /// not joined by an edge.
  std::vector<Vec2> polyline(const std::vector<std::size_t>& node_path) const;
  /// Random walk without immediate U-turns (unless at a dead end).
  std::vector<std::size_t> random_walk(std::size_t start, std::size_t steps, RngStream& rng) const;

 private:
  std::vector<Vec2> nodes_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::map<std::string, std::vector<std::size_t>> routes_;
  Vec2 area_;
};

enum class EndPolicy { Loop, Park };

/// Vehicle movement: parked, following a polyline at constant speed, or
/// following time-stamped waypoints with linear interpolation.
class Mobility {
 public:
  static Mobility fixed(Vec2 position);
  static Mobility route(std::vector<Vec2> polyline, double speed, EndPolicy end,
                        double start_offset = 0.0);
  static Mobility waypoints(std::vector<std::pair<SimTime, Vec2>> points, SimTime start_clock = 0.0);

  Vec2 position() const { return position_; }
  double speed() const { return speed_; }

  /// Advance by dt seconds; returns the path pieces swept during the step.
  std::vector<Segment> step(double dt);

 private:
  enum class Mode { Fixed, Route, Waypoints };

  void advance_route(double distance, std::vector<Segment>& swept);
  Vec2 waypoint_position(SimTime t) const;

  Mode mode_ = Mode::Fixed;
  Vec2 position_;
  double speed_ = 0.0;
  EndPolicy end_ = EndPolicy::Park;
  std::vector<Vec2> polyline_;
  std::size_t segment_ = 0;
  double along_ = 0.0;  ///< distance travelled on the current segment
  bool parked_ = false;
  std::vector<std::pair<SimTime, Vec2>> waypoints_;
  SimTime clock_ = 0.0;
};

}  // namespace vanet
