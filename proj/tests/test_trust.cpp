#include <doctest.h>

#include "vanet/trust.hpp"

using namespace vanet;
using namespace vanet::trust;

namespace {

DriverProfile fresh(double trust)
{
  DriverProfile p;
  p.driver_id = DriverId{1};
  p.trust = trust;
  p.initial_trust = trust;
  return p;
}

}  // namespace

TEST_CASE("reward tiers: documented examples")
{
  auto a = assess_reward({100.0, 10.0});
  CHECK(a.amount == doctest::Approx(0.08));
  CHECK_FALSE(a.long_delayed);

  a = assess_reward({0.0, 0.0});
  CHECK(a.amount == doctest::Approx(0.08));

  a = assess_reward({100.0, 140.0});
  CHECK(a.amount == doctest::Approx(-0.01));
  CHECK(a.long_delayed);

  a = assess_reward({2000.0, 0.0});
  CHECK(a.amount == doctest::Approx(-0.05));
  CHECK(a.long_delayed);
}

TEST_CASE("bands")
{
  CHECK(classify(0.05) == TrustBand::Blocked);
  CHECK(classify(0.25) == TrustBand::NotTrusted);
  CHECK(classify(0.26) == TrustBand::LowlyTrusted);
  CHECK(classify(0.49) == TrustBand::LowlyTrusted);
  CHECK(classify(0.5) == TrustBand::Trusted);
  CHECK(classify(0.9) == TrustBand::HighlyTrusted);
}

TEST_CASE("reaching the floor arms the blocking check, which re-arms until blocked")
{
  TrustConfig cfg;
  DriverProfile p = fresh(0.2);
  apply_reward_or_punishment(p, -0.5, 100.0, cfg);
  CHECK(p.trust == cfg.floor);
  REQUIRE(p.blocking_check_at);
  CHECK(*p.blocking_check_at == doctest::Approx(110.0));

  CHECK_FALSE(check_blocking(p, 105.0, cfg));
  auto req = check_blocking(p, 110.0, cfg);
  REQUIRE(req);
  CHECK(req->driver == DriverId{1});
  CHECK(*p.blocking_check_at == doctest::Approx(120.0));

  // Recovering above the floor cancels the check.
  apply_reward_or_punishment(p, 0.3, 115.0, cfg);
  CHECK_FALSE(check_blocking(p, 120.0, cfg));
  CHECK_FALSE(p.blocking_check_at);
}

TEST_CASE("withheld reward released after the withhold period")
{
  Tpd tpd(EntityId{0}, DriverId{0}, 0.5, TrustConfig{});
  const MessageId m = make_message_id(EntityId{0}, 1);
  auto out = tpd.on_announcement(m, {10.0, 1.0}, 100.0);
  REQUIRE(out.release_at);
  CHECK(*out.release_at == doctest::Approx(220.0));
  CHECK(tpd.release_due(219.0).empty());
  auto rel = tpd.release_due(220.0);
  REQUIRE(rel.size() == 1);
  CHECK_FALSE(rel[0].discarded);
  CHECK(tpd.trust() == doctest::Approx(0.58));
}

TEST_CASE("long-delayed announcement is punished immediately")
{
  Tpd tpd(EntityId{0}, DriverId{0}, 0.5, TrustConfig{});
  auto out = tpd.on_announcement(make_message_id(EntityId{0}, 1), {10.0, 151.0}, 5.0);
  CHECK_FALSE(out.release_at);
  REQUIRE(out.immediate);
  CHECK(tpd.trust() == doctest::Approx(0.45));
  CHECK(tpd.current().pending_rewards.empty());
}

TEST_CASE("duplicate withhold is a protocol error")
{
  DriverProfile p = fresh(0.5);
  withhold_reward(p, MessageId{7}, 0.08, 0.0, 120.0);
  CHECK_THROWS_AS(withhold_reward(p, MessageId{7}, 0.08, 1.0, 120.0), ProtocolError);
}

TEST_CASE("complaints about messages the driver never sent are ignored")
{
  Tpd tpd(EntityId{0}, DriverId{0}, 0.5, TrustConfig{});
  CHECK_FALSE(tpd.complain(MessageId{99}));
  CHECK(tpd.current().complaint_list.empty());
}

TEST_CASE("driver switching keeps separate profiles")
{
  TrustConfig cfg;
  cfg.initial_trust = 0.45;
  Tpd tpd(EntityId{3}, DriverId{3}, 0.8, cfg);
  tpd.adjust(-0.3, 0.0, TrustCause::RsuPunishment);
  CHECK(tpd.trust() == doctest::Approx(0.5));
  tpd.switch_driver(DriverId{40});
  CHECK(tpd.trust() == doctest::Approx(0.8));  // first driver's initial trust is the device default
  tpd.switch_driver(DriverId{3});
  CHECK(tpd.trust() == doctest::Approx(0.5));
}

TEST_CASE("confirm_block and unblock")
{
  Tpd tpd(EntityId{0}, DriverId{0}, 0.6, TrustConfig{});
  tpd.on_announcement(make_message_id(EntityId{0}, 0), {0, 0}, 0.0);
  const auto u = tpd.confirm_block(DriverId{0});
  CHECK(u.after == doctest::Approx(0.05));
  CHECK(tpd.blocked());
  CHECK(tpd.current().pending_rewards.empty());
  tpd.unblock(DriverId{0});
  CHECK_FALSE(tpd.blocked());
  CHECK(tpd.trust() == doctest::Approx(0.6));
}

TEST_CASE("repeated 0.08 steps land exactly on the cap")
{
  Tpd tpd(EntityId{0}, DriverId{0}, 0.1, TrustConfig{});
  for (int i = 0; i < 5; ++i) tpd.adjust(0.08, i, TrustCause::TpdReward);
  CHECK(tpd.trust() == 0.5);
  CHECK(classify(tpd.trust()) == TrustBand::Trusted);
}
