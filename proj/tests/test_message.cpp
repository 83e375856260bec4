#include <doctest.h>

#include <random>

#include "vanet/message.hpp"

using namespace vanet;

namespace {

// Threshold table written out independently of the implementation.
bool oracle_permitted(EventType type, double trust, bool blocked)
{
  if (type == EventType::Beacon) return true;
  if (blocked || trust <= 0.05) return false;
  switch (type) {
    case EventType::WaveService: return true;
    case EventType::PoorRoadCondition:
    case EventType::Debris:
    case EventType::RoadDefect: return trust > 0.25;
    default: return trust >= 0.5;
  }
}

VanetMessage announcement(int hops, int hop_limit = 4)
{
  VanetMessage m;
  m.kind = MessageKind::EventAnnouncement;
  m.hops = hops;
  m.hop_limit = hop_limit;
  m.payload = EventBody{};
  return m;
}

}  // namespace

TEST_CASE("class mapping")
{
  CHECK(class_of(EventType::WaveService) == MessageClass::Low);
  CHECK(class_of(EventType::Debris) == MessageClass::Mid);
  CHECK(class_of(EventType::Accident) == MessageClass::High);
  CHECK(class_of(EventType::UntrueAttackReport) == MessageClass::High);
}

TEST_CASE("sender-side gate boundaries")
{
  CHECK_FALSE(permitted(EventType::Debris, 0.25, false));
  CHECK(permitted(EventType::Debris, 0.26, false));
  CHECK_FALSE(permitted(EventType::Accident, 0.49, false));
  CHECK(permitted(EventType::Accident, 0.5, false));
  CHECK_FALSE(permitted(EventType::WaveService, 0.05, false));
  CHECK(permitted(EventType::Beacon, 0.05, true));
  CHECK_FALSE(permitted(EventType::Accident, 0.9, true));
}

TEST_CASE("sender-side gate matches the threshold table")
{
  const EventType types[] = {EventType::Beacon,     EventType::WaveService, EventType::PoorRoadCondition,
                             EventType::Debris,     EventType::RoadDefect,  EventType::Accident,
                             EventType::TrafficJam, EventType::RoadClosure, EventType::UntrueAttackReport};
  int mismatches = 0;
  for (EventType t : types) {
    for (int k = 0; k <= 1000; ++k) {
      const double trust = k / 1000.0;
      for (bool blocked : {false, true}) {
        if (permitted(t, trust, blocked) != oracle_permitted(t, trust, blocked)) ++mismatches;
      }
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("relay decision order")
{
  CHECK(relay_eligible(announcement(0), 0.9, true, false) == RelayDecision::Drop);
  CHECK(relay_eligible(announcement(0), 0.9, false, true) == RelayDecision::Drop);
  CHECK(relay_eligible(announcement(0), 0.05, false, false) == RelayDecision::Drop);
  CHECK(relay_eligible(announcement(0), 0.2, false, false) == RelayDecision::LowTrustNotice);
  // Low trust is noticed before the hop limit is considered.
  CHECK(relay_eligible(announcement(4), 0.2, false, false) == RelayDecision::LowTrustNotice);
  CHECK(relay_eligible(announcement(4), 0.6, false, false) == RelayDecision::Drop);
  CHECK(relay_eligible(announcement(3), 0.26, false, false) == RelayDecision::Relay);
}

TEST_CASE("relayed copies advance the hop count and keep the id")
{
  VanetMessage m = announcement(1);
  m.id = make_message_id(EntityId{5}, 9);
  const VanetMessage r = relayed(m);
  CHECK(r.hops == 2);
  CHECK(r.id == m.id);
  CHECK(message_origin(r.id) == EntityId{5});
}

TEST_CASE("serialization is non-empty, deterministic and grows with optional fields")
{
  VanetMessage a = announcement(0);
  a.id = make_message_id(EntityId{1}, 1);
  VanetMessage b = a;
  b.event_id = EventId{3};
  b.event_location = Vec2{120.5, 7.25};
  CHECK(serialize(a) == serialize(a));
  CHECK(serialize(b).size() > serialize(a).size());
}

TEST_CASE("names round-trip")
{
  for (auto t : {EventType::Accident, EventType::Debris, EventType::WaveService}) {
    const auto back = event_type_from_string(to_string(t));
    REQUIRE(back);
    CHECK(*back == t);
  }
  CHECK_FALSE(event_type_from_string("meteor"));
}
