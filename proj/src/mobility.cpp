#include "vanet/mobility.hpp"

#include <algorithm>
#include <limits>

namespace vanet {

double segment_distance(Vec2 p, Vec2 a, Vec2 b)
{
  const Vec2 ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 == 0.0) return distance(p, a);
  const Vec2 ap = p - a;
  const double t = std::clamp((ap.x * ab.x + ap.y * ab.y) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

RoadNetwork RoadNetwork::grid(double width, double height, double spacing)
{
  if (spacing <= 0.0) throw ConfigError("grid spacing must be positive");
  RoadNetwork net;
  net.area_ = {width, height};
  const auto cols = static_cast<std::size_t>(width / spacing) + 1;
  const auto rows = static_cast<std::size_t>(height / spacing) + 1;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      net.add_node({static_cast<double>(c) * spacing, static_cast<double>(r) * spacing});
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t id = r * cols + c;
      if (c + 1 < cols) net.add_edge(id, id + 1);
      if (r + 1 < rows) net.add_edge(id, id + cols);
    }
  }
  return net;
}

RoadNetwork RoadNetwork::alternate_route(double length, double offset)
{
  RoadNetwork net;
  net.area_ = {length, 2.0 * offset};
  const std::size_t a = net.add_node({0.0, offset});
  const std::size_t b = net.add_node({length, offset});
  const std::size_t c = net.add_node({length * 0.25, 2.0 * offset});
  const std::size_t d = net.add_node({length * 0.75, 2.0 * offset});
  net.add_edge(a, b);
  net.add_edge(a, c);
  net.add_edge(c, d);
  net.add_edge(d, b);
  net.add_route("main", {a, b});
  net.add_route("detour", {a, c, d, b});
  return net;
}

std::size_t RoadNetwork::add_node(Vec2 position)
{
  nodes_.push_back(position);
  adjacency_.emplace_back();
  area_.x = std::max(area_.x, position.x);
  area_.y = std::max(area_.y, position.y);
  return nodes_.size() - 1;
}

void RoadNetwork::add_edge(std::size_t a, std::size_t b)
{
  if (a >= nodes_.size() || b >= nodes_.size()) throw ConfigError("edge references unknown node");
  if (has_edge(a, b)) return;
  adjacency_[a].push_back(b);
  adjacency_[b].push_back(a);
}

void RoadNetwork::add_route(std::string name, std::vector<std::size_t> node_path)
{
  polyline(node_path);  // validates edges
  routes_[std::move(name)] = std::move(node_path);
}

bool RoadNetwork::has_edge(std::size_t a, std::size_t b) const
{
  if (a >= adjacency_.size()) return false;
  const auto& adj = adjacency_[a];
  return std::find(adj.begin(), adj.end(), b) != adj.end();
}

const std::vector<std::size_t>& RoadNetwork::route(const std::string& name) const
{
  auto it = routes_.find(name);
  if (it == routes_.end()) throw ConfigError("unknown route: " + name);
  return it->second;
}

std::size_t RoadNetwork::nearest_node(Vec2 p) const
{
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double d = distance(p, nodes_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::vector<Vec2> RoadNetwork::polyline(const std::vector<std::size_t>& node_path) const
{
  std::vector<Vec2> out;
  out.reserve(node_path.size());
  for (std::size_t i = 0; i < node_path.size(); ++i) {
    if (node_path[i] >= nodes_.size()) throw ConfigError("route references unknown node");
    if (i > 0 && !has_edge(node_path[i - 1], node_path[i])) {
      throw ConfigError("route uses a missing edge");
    }
    out.push_back(nodes_[node_path[i]]);
  }
  return out;
}

std::vector<std::size_t> RoadNetwork::random_walk(std::size_t start, std::size_t steps,
                                                  RngStream& rng) const
{
  std::vector<std::size_t> path{start};
  std::size_t prev = start;
  std::size_t cur = start;
  for (std::size_t i = 0; i < steps; ++i) {
    const auto& adj = adjacency_.at(cur);
    if (adj.empty()) break;
    std::vector<std::size_t> choices;
    for (std::size_t n : adj) {
      if (n != prev || adj.size() == 1) choices.push_back(n);
    }
    const std::size_t next = choices[rng.below(choices.size())];
    prev = cur;
    cur = next;
    path.push_back(cur);
  }
  return path;
}

Mobility Mobility::fixed(Vec2 position)
{
  Mobility m;
  m.mode_ = Mode::Fixed;
  m.position_ = position;
  return m;
}

Mobility Mobility::route(std::vector<Vec2> polyline, double speed, EndPolicy end,
                         double start_offset)
{
  if (polyline.empty()) throw ConfigError("empty route");
  if (speed < 0.0) throw ConfigError("negative speed");
  Mobility m;
  m.mode_ = Mode::Route;
  m.polyline_ = std::move(polyline);
  m.speed_ = speed;
  m.end_ = end;
  m.position_ = m.polyline_.front();
  if (m.polyline_.size() < 2) {
    m.parked_ = true;
  } else if (start_offset > 0.0) {
    std::vector<Segment> ignored;
    m.advance_route(start_offset, ignored);
  }
  return m;
}

Mobility Mobility::waypoints(std::vector<std::pair<SimTime, Vec2>> points, SimTime start_clock)
{
  if (points.empty()) throw ConfigError("empty waypoint list");
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Mobility m;
  m.mode_ = Mode::Waypoints;
  m.waypoints_ = std::move(points);
  m.clock_ = start_clock;
  m.position_ = m.waypoint_position(start_clock);
  return m;
}

Vec2 Mobility::waypoint_position(SimTime t) const
{
  if (t <= waypoints_.front().first) return waypoints_.front().second;
  if (t >= waypoints_.back().first) return waypoints_.back().second;
  auto hi = std::upper_bound(waypoints_.begin(), waypoints_.end(), t,
                             [](SimTime v, const auto& w) { return v < w.first; });
  auto lo = hi - 1;
  const double span = hi->first - lo->first;
  const double f = span > 0.0 ? (t - lo->first) / span : 1.0;
  return lo->second + (hi->second - lo->second) * f;
}

void Mobility::advance_route(double dist, std::vector<Segment>& swept)
{
  const bool closed = polyline_.front() == polyline_.back();
  while (dist > 0.0 && !parked_) {
    const Vec2 a = polyline_[segment_];
    const Vec2 b = polyline_[segment_ + 1];
    const double seg_len = distance(a, b);
    const double remaining = seg_len - along_;
    const Vec2 start = position_;
    if (dist < remaining) {
      along_ += dist;
      position_ = seg_len > 0.0 ? a + (b - a) * (along_ / seg_len) : b;
      swept.push_back({start, position_});
      return;
    }
    dist -= remaining;
    position_ = b;
    swept.push_back({start, b});
    along_ = 0.0;
    if (++segment_ + 1 >= polyline_.size()) {
      if (end_ == EndPolicy::Park) {
        parked_ = true;
        segment_ = polyline_.size() - 2;
        along_ = distance(polyline_[segment_], polyline_.back());
        return;
      }
      segment_ = 0;
      position_ = polyline_.front();
      if (!closed) swept.push_back({position_, position_});
    }
  }
}

std::vector<Segment> Mobility::step(double dt)
{
  std::vector<Segment> swept;
  if (dt <= 0.0) throw ConfigError("mobility step must be positive");
  switch (mode_) {
    case Mode::Fixed: swept.push_back({position_, position_}); break;
    case Mode::Route:
      if (parked_ || speed_ == 0.0) {
        swept.push_back({position_, position_});
      } else {
        advance_route(speed_ * dt, swept);
      }
      break;
    case Mode::Waypoints: {
      const Vec2 start = position_;
      clock_ += dt;
      position_ = waypoint_position(clock_);
      swept.push_back({start, position_});
      break;
    }
  }
  return swept;
}

}  // namespace vanet
