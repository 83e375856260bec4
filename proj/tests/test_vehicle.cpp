#include <doctest.h>

#include "vanet/vehicle.hpp"

using namespace vanet;

namespace {

struct Fixture {
  VehicleConfig cfg;
  GroundTruth truth;

  VehicleAgent make(std::uint32_t id, double trust, BehaviorPolicy policy = {}, Vec2 at = {0, 0},
                    VehicleKind kind = VehicleKind::Regular)
  {
    return VehicleAgent(EntityId{id}, kind, Mobility::fixed(at), std::move(policy), trust, cfg,
                        RngStream(1, id));
  }
};

std::size_t count(const Effects& fx, MessageKind kind, std::optional<bool> relay = std::nullopt)
{
  std::size_t n = 0;
  for (const auto& s : fx.sends) {
    if (s.msg.kind == kind && (!relay || s.relay == *relay)) ++n;
  }
  return n;
}

VanetMessage query_for(const VanetMessage& announcement, EntityId reporter, SimTime deadline)
{
  VanetMessage q;
  q.id = make_message_id(EntityId{50}, 1);
  q.kind = MessageKind::ClarificationQuery;
  q.origin = EntityId{50};
  q.event_id = announcement.event_id;
  q.event_location = announcement.event_location;
  q.payload = QueryBody{EntityId{50}, announcement.id, announcement.origin, {reporter}, deadline, ""};
  return q;
}

}  // namespace

TEST_CASE("announcement gate follows trust")
{
  Fixture f;
  const auto accident = f.truth.register_event(EventType::Accident, {0, 0}, 0.0, true);
  const auto debris = f.truth.register_event(EventType::Debris, {0, 0}, 0.0, true);
  auto low = f.make(1, 0.4);
  Effects fx;
  CHECK_FALSE(low.announce_event(*f.truth.find(accident), 1.0, fx));
  CHECK(fx.sends.empty());
  const auto msg = low.announce_event(*f.truth.find(debris), 1.0, fx);
  REQUIRE(msg);
  CHECK(count(fx, MessageKind::EventAnnouncement) == 1);
  // Reward release plus two retransmissions.
  CHECK(fx.timers.size() == 3);
}

TEST_CASE("flooding relays each message once and notices low trust")
{
  Fixture f;
  const auto ev = f.truth.register_event(EventType::Accident, {0, 0}, 0.0, true);
  auto sender = f.make(1, 0.8);
  Effects fx;
  const auto msg = *sender.announce_event(*f.truth.find(ev), 1.0, fx);

  auto relay = f.make(2, 0.8, {}, {100, 0});
  Effects rx;
  relay.on_message(msg, 1.005, f.truth, rx);
  relay.on_message(msg, 1.010, f.truth, rx);
  CHECK(count(rx, MessageKind::EventAnnouncement, true) == 1);
  CHECK(rx.responses.size() == 1);

  auto weak = f.make(3, 0.2, {}, {100, 0});
  Effects wx;
  weak.on_message(msg, 1.005, f.truth, wx);
  CHECK(count(wx, MessageKind::EventAnnouncement) == 0);
  CHECK(count(wx, MessageKind::LowTrustNotice) == 1);
}

TEST_CASE("truthful reporter waits for a visit before reporting a fabricated event")
{
  Fixture f;
  f.cfg.visit_radius = 50.0;
  const auto fake = f.truth.register_event(EventType::Accident, {1000, 0}, 0.0, false);
  auto liar = f.make(1, 0.8, {}, {1000, 0});
  Effects fx;
  const auto msg = *liar.announce_event(*f.truth.find(fake), 1.0, fx);
  f.truth.mark_announced(fake, 1.0);

  BehaviorPolicy p;
  p.reporter = ReporterMode::Truthful;
  auto far = VehicleAgent(EntityId{2}, VehicleKind::Regular,
                          Mobility::route({{0, 0}, {2000, 0}}, 100.0, EndPolicy::Park), p, 0.8, f.cfg,
                          RngStream(1, 2));
  Effects rx;
  far.on_message(msg, 1.005, f.truth, rx);
  CHECK(count(rx, MessageKind::UntrueReport) == 0);
  Effects later;
  for (int t = 2; t <= 12; ++t) far.tick(1.0, t, f.truth, f.truth.active(t, 600.0), later);
  CHECK(count(later, MessageKind::UntrueReport) == 1);

  // Reporting a real event never happens for a truthful reporter.
  const auto real = f.truth.register_event(EventType::Accident, {0, 0}, 0.0, true);
  auto honest = f.make(3, 0.8, p);
  auto announcer = f.make(4, 0.8);
  Effects ax, hx;
  honest.on_message(*announcer.announce_event(*f.truth.find(real), 1.0, ax), 1.005, f.truth, hx);
  CHECK(count(hx, MessageKind::UntrueReport) == 0);
}

TEST_CASE("clarifiers need trust above one half and a recent visit")
{
  Fixture f;
  // Relaying and reporting would otherwise lift 0.5 above the threshold.
  f.cfg.trust.forward_reward = 0.0;
  f.cfg.trust.report_reward = 0.0;
  const auto fake = f.truth.register_event(EventType::Accident, {0, 0}, 0.0, false);
  auto liar = f.make(1, 0.8);
  Effects fx;
  const auto msg = *liar.announce_event(*f.truth.find(fake), 1.0, fx);
  const auto q = query_for(msg, EntityId{9}, 200.0);

  auto at_half = f.make(2, 0.5);
  Effects hx;
  at_half.on_message(msg, 2.0, f.truth, hx);
  CHECK_FALSE(at_half.answer_clarification(q, 3.0, f.truth, hx));

  auto good = f.make(3, 0.6);
  Effects gx;
  good.on_message(msg, 2.0, f.truth, gx);  // received at the site
  const auto answer = good.answer_clarification(q, 3.0, f.truth, gx);
  REQUIRE(answer);
  CHECK(answer->body<FeedbackBody>().vote == -1);
  CHECK(answer->destination == EntityId{50});
  // The same query is answered once.
  CHECK_FALSE(good.answer_clarification(q, 4.0, f.truth, gx));
  // Parties to the dispute do not clarify.
  auto reporter = f.make(9, 0.9);
  Effects rx;
  CHECK_FALSE(reporter.answer_clarification(q, 3.0, f.truth, rx));
}

TEST_CASE("an official away from the site says so")
{
  Fixture f;
  const auto fake = f.truth.register_event(EventType::Accident, {0, 0}, 0.0, false);
  auto liar = f.make(1, 0.8);
  Effects fx;
  const auto msg = *liar.announce_event(*f.truth.find(fake), 1.0, fx);
  auto police = f.make(5, 0.9, {}, {5000, 0}, VehicleKind::Police);
  Effects px;
  const auto far = police.answer_clarification(query_for(msg, EntityId{9}, 200.0), 3.0, f.truth, px);
  REQUIRE(far);
  CHECK(far->kind == MessageKind::FarFromEvent);
}

TEST_CASE("RSU punishment addressed to another driver is ignored")
{
  Fixture f;
  auto v = f.make(1, 0.8);
  VanetMessage pun;
  pun.id = make_message_id(EntityId{50}, 3);
  pun.kind = MessageKind::PunishmentMsg;
  pun.origin = EntityId{50};
  pun.destination = EntityId{1};
  pun.payload = AdjustBody{EntityId{1}, DriverId{77}, -0.3, MessageId{}};
  Effects fx;
  v.on_message(pun, 1.0, f.truth, fx);
  CHECK(v.trust() == doctest::Approx(0.8));
  pun.id = make_message_id(EntityId{50}, 4);
  pun.payload = AdjustBody{EntityId{1}, v.driver(), -0.3, MessageId{}};
  v.on_message(pun, 2.0, f.truth, fx);
  CHECK(v.trust() == doctest::Approx(0.5));
}

TEST_CASE("blocked vehicle is silent except for beacons")
{
  Fixture f;
  const auto ev = f.truth.register_event(EventType::WaveService, {0, 0}, 0.0, true);
  auto v = f.make(1, 0.8);
  v.tpd()->confirm_block(v.driver());
  Effects fx;
  CHECK_FALSE(v.announce_event(*f.truth.find(ev), 1.0, fx));
  CHECK(fx.sends.empty());
}
