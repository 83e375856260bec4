#include <doctest.h>

#include <random>

#include "vanet/baseline.hpp"

using namespace vanet;
using namespace vanet::baseline;

namespace {

EventBuffer buffer(std::initializer_list<std::pair<double, int>> claims)
{
  EventBuffer b;
  std::uint32_t id = 0;
  for (auto [rep, claim] : claims) b.messages.push_back({EntityId{id++}, rep, claim});
  return b;
}

}  // namespace

TEST_CASE("empty buffer is undecided under every scheme")
{
  for (auto s : {Scheme::MajorityVote, Scheme::WeightedByReputation, Scheme::HighestReputation}) {
    CHECK(decide(EventBuffer{}, s) == Verdict::Undecided);
  }
}

TEST_CASE("majority vote")
{
  CHECK(decide(buffer({{0.1, 1}, {0.1, 1}, {0.9, -1}}), Scheme::MajorityVote) == Verdict::True);
  CHECK(decide(buffer({{0.1, 1}, {0.9, -1}}), Scheme::MajorityVote) == Verdict::Undecided);
}

TEST_CASE("weighted vote")
{
  CHECK(decide(buffer({{0.1, 1}, {0.1, 1}, {0.9, -1}}), Scheme::WeightedByReputation) == Verdict::False);
  // 0.3 + 0.3 against 0.6 is an exact tie on the lattice.
  CHECK(decide(buffer({{0.3, 1}, {0.3, 1}, {0.6, -1}}), Scheme::WeightedByReputation) == Verdict::Undecided);
}

TEST_CASE("weighted vote matches an integer oracle on random buffers")
{
  std::mt19937_64 rng(17);
  int bad = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    EventBuffer b;
    long sum = 0;
    const int n = 1 + static_cast<int>(rng() % 9);
    for (int i = 0; i < n; ++i) {
      const int k = static_cast<int>(rng() % 11);  // reputation k/10
      const int claim = rng() % 2 ? 1 : -1;
      b.messages.push_back({EntityId{0}, k / 10.0, claim});
      sum += claim * k;
    }
    const Verdict expected = sum > 0 ? Verdict::True : sum < 0 ? Verdict::False : Verdict::Undecided;
    if (decide(b, Scheme::WeightedByReputation) != expected) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("highest reputation follows the top sender; split top is undecided")
{
  CHECK(decide(buffer({{0.2, 1}, {0.8, -1}, {0.5, 1}}), Scheme::HighestReputation) == Verdict::False);
  CHECK(decide(buffer({{0.8, 1}, {0.8, -1}}), Scheme::HighestReputation) == Verdict::Undecided);
  CHECK(decide(buffer({{0.8, 1}, {0.8, 1}, {0.9, 1}}), Scheme::HighestReputation) == Verdict::True);
}

TEST_CASE("scheme names round-trip")
{
  for (auto s : {Scheme::MajorityVote, Scheme::WeightedByReputation, Scheme::HighestReputation}) {
    CHECK(scheme_from_string(to_string(s)) == s);
  }
  CHECK_FALSE(scheme_from_string("coin"));
}

TEST_CASE("reputation table clamps and reports changes once")
{
  ReputationTable t(0.8, 0.1, 1.0);
  CHECK(t.reputation(DriverId{1}) == doctest::Approx(0.8));
  for (int i = 0; i < 5; ++i) t.feedback(DriverId{1}, 1);
  CHECK(t.reputation(DriverId{1}) == doctest::Approx(1.0));
  for (int i = 0; i < 20; ++i) t.feedback(DriverId{2}, -1);
  CHECK(t.reputation(DriverId{2}) == doctest::Approx(0.0));
  const auto updates = t.take_updates();
  CHECK(updates.size() == 2);
  CHECK(t.take_updates().empty());
}
