#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "vanet/channel.hpp"
#include "vanet/event_queue.hpp"
#include "vanet/ground_truth.hpp"
#include "vanet/mobility.hpp"
#include "vanet/rng.hpp"

using namespace vanet;

TEST_CASE("event queue pops 1e5 random events in (time, insertion) order")
{
  std::mt19937_64 rng(1);
  EventQueue<int> q;
  struct Ref {
    double time;
    int index;
  };
  std::vector<Ref> ref;
  for (int i = 0; i < 100000; ++i) {
    // Coarse times so that many ties occur.
    const double t = double(rng() % 5000) / 4.0;
    q.schedule(t, EntityId{0}, i);
    ref.push_back({t, i});
  }
  std::stable_sort(ref.begin(), ref.end(), [](const Ref& a, const Ref& b) { return a.time < b.time; });
  bool same = true;
  for (const Ref& r : ref) {
    const auto ev = q.pop();
    if (ev.time != r.time || ev.payload != r.index) {
      same = false;
      break;
    }
  }
  CHECK(same);
  CHECK(q.empty());
  CHECK(q.executed() == 100000);
}

TEST_CASE("event queue rejects scheduling into the past")
{
  EventQueue<int> q;
  q.schedule(5.0, EntityId{0}, 1);
  q.pop();
  CHECK(q.now() == 5.0);
  CHECK_THROWS_AS(q.schedule(4.0, EntityId{0}, 2), CausalityError);
  CHECK_NOTHROW(q.schedule(5.0, EntityId{0}, 3));
  CHECK(q.next_time() == 5.0);
}

TEST_CASE("rng streams are reproducible and independent")
{
  RngStream a(9, 1), b(9, 1), c(9, 2);
  bool same = true, differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform01();
    same = same && x == b.uniform01();
    differs = differs || x != c.uniform01();
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("bernoulli counts stay within 3 sigma of the binomial mean")
{
  for (double p : {0.05, 0.2, 0.4, 0.5, 0.8}) {
    RngStream r(123, static_cast<std::uint64_t>(p * 100));
    const int n = 20000;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += r.bernoulli(p);
    const double mean = n * p, sigma = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(hits - mean) <= 3 * sigma);
  }
  RngStream r(5, 5);
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(r.bernoulli(0.0));
    CHECK(r.bernoulli(1.0));
  }
}

TEST_CASE("unit disk neighbors match a brute-force scan")
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(0, 2000);
  const UnitDiskChannel ch(300.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RadioNode> nodes;
    for (std::uint32_t i = 0; i < 80; ++i) nodes.push_back({EntityId{i}, {coord(rng), coord(rng)}});
    // One node exactly at range.
    nodes.push_back({EntityId{80}, {nodes[0].position.x + 300.0, nodes[0].position.y}});
    for (const RadioNode& c : nodes) {
      std::vector<EntityId> expected;
      for (const RadioNode& n : nodes) {
        if (n.id != c.id && std::hypot(n.position.x - c.position.x, n.position.y - c.position.y) <= 300.0) {
          expected.push_back(n.id);
        }
      }
      CHECK(ch.neighbors(nodes, c.position, c.id) == expected);
    }
  }
}

TEST_CASE("segment distance matches dense sampling")
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-500, 500);
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec2 p{coord(rng), coord(rng)}, a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
    double best = 1e18;
    for (int k = 0; k <= 20000; ++k) best = std::min(best, distance(p, a + (b - a) * (k / 20000.0)));
    const double got = segment_distance(p, a, b);
    CHECK(got <= best + 1e-9);
    CHECK(got >= best - 0.1);
  }
  CHECK(segment_distance({3, 4}, {0, 0}, {0, 0}) == doctest::Approx(5.0));
}

TEST_CASE("route mobility loops and parks")
{
  auto loop = Mobility::route({{0, 0}, {100, 0}, {100, 100}, {0, 0}}, 10.0, EndPolicy::Loop);
  for (int i = 0; i < 5; ++i) loop.step(1.0);
  CHECK(loop.position() == Vec2{50, 0});
  const auto swept = loop.step(6.0);  // crosses the first corner
  CHECK(swept.size() == 2);
  CHECK(loop.position().x == doctest::Approx(100.0));
  CHECK(loop.position().y == doctest::Approx(10.0));

  auto park = Mobility::route({{0, 0}, {10, 0}}, 4.0, EndPolicy::Park);
  for (int i = 0; i < 10; ++i) park.step(1.0);
  CHECK(park.position() == Vec2{10, 0});
}

TEST_CASE("route start offset")
{
  auto m = Mobility::route({{0, 0}, {100, 0}, {100, 100}}, 10.0, EndPolicy::Park, 150.0);
  CHECK(m.position().x == doctest::Approx(100.0));
  CHECK(m.position().y == doctest::Approx(50.0));
}

TEST_CASE("waypoints interpolate linearly")
{
  auto m = Mobility::waypoints({{10.0, {0, 0}}, {20.0, {100, 0}}});
  m.step(5.0);
  CHECK(m.position() == Vec2{0, 0});
  m.step(10.0);
  CHECK(m.position().x == doctest::Approx(50.0));
  m.step(100.0);
  CHECK(m.position() == Vec2{100, 0});
}

TEST_CASE("grid random walk follows edges")
{
  const auto grid = RoadNetwork::grid(2500, 2500, 500);
  CHECK(grid.nodes().size() == 36);
  RngStream rng(1, 1);
  const auto path = grid.random_walk(grid.nearest_node({1200, 1300}), 200, rng);
  CHECK(path.size() == 201);
  for (std::size_t i = 1; i < path.size(); ++i) CHECK(grid.has_edge(path[i - 1], path[i]));
  CHECK_NOTHROW(grid.polyline(path));
  CHECK_THROWS_AS(grid.polyline({0, 7}), ConfigError);
}

TEST_CASE("alternate route network has two named routes joining the same ends")
{
  const auto net = RoadNetwork::alternate_route(2000, 400);
  CHECK(net.nodes().size() >= 4);
  CHECK_THROWS(net.route("no-such-route"));
}

TEST_CASE("ground truth activity windows")
{
  GroundTruth gt;
  const EventId real = gt.register_event(EventType::Accident, {0, 0}, 100.0, true);
  const EventId fake = gt.register_event(EventType::Accident, {0, 0}, 100.0, false);
  CHECK(gt.is_real(real));
  CHECK_FALSE(gt.is_real(fake));
  auto ids = [&](SimTime now) {
    std::set<EventId> out;
    for (auto* e : gt.active(now, 600.0)) out.insert(e->event_id);
    return out;
  };
  CHECK(ids(150.0) == std::set<EventId>{real});  // fabricated site appears once announced
  gt.mark_announced(fake, 160.0);
  CHECK(ids(170.0) == std::set<EventId>{real, fake});
  CHECK(ids(800.0).empty());
  gt.resolve(real);
  CHECK(ids(170.0) == std::set<EventId>{fake});
}
