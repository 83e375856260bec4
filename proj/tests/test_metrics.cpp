#include <doctest.h>

#include <atomic>
#include <random>

#include "vanet/metrics.hpp"

using namespace vanet;
using namespace vanet::metrics;

namespace {

DisputeRecord ruling(EventId event, Decision d, SimTime t)
{
  DisputeRecord r;
  r.event_id = event;
  r.decision = d;
  r.time = t;
  return r;
}

}  // namespace

TEST_CASE("confusion cells")
{
  ClassificationMatrix m;
  m.add(true, Decision::DecidedTrue);
  m.add(true, Decision::DecidedFalse);
  m.add(false, Decision::DecidedTrue);
  m.add(false, Decision::DecidedFalse);
  m.add(false, Decision::Unresolved);
  CHECK(m.tn == 1);
  CHECK(m.fp == 1);
  CHECK(m.fn == 1);
  CHECK(m.tp == 1);
  CHECK(m.decided() == 4);
}

TEST_CASE("normalized likelihood")
{
  ClassificationMatrix m;
  for (int i = 0; i < 8; ++i) m.add(true, Decision::DecidedTrue);
  for (int i = 0; i < 2; ++i) m.add(true, Decision::DecidedFalse);
  CHECK(*normalized_likelihood(m, Cell::TN) == doctest::Approx(0.8));
  CHECK(*normalized_likelihood(m, Cell::FP) == doctest::Approx(0.2));
  CHECK(*normalized_likelihood(m, Cell::TP) == 0.0);
  CHECK_FALSE(normalized_likelihood(ClassificationMatrix{}, Cell::TN));
}

TEST_CASE("likelihoods sum to one over random matrices")
{
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    ClassificationMatrix m{rng() % 50, rng() % 50, rng() % 50, rng() % 50};
    if (m.decided() == 0) continue;
    double sum = 0;
    for (Cell c : {Cell::TN, Cell::FP, Cell::FN, Cell::TP}) sum += *normalized_likelihood(m, c);
    CHECK(sum == doctest::Approx(1.0));
  }
}

TEST_CASE("classification uses the final ruling per event and skips warm-up events")
{
  GroundTruth truth;
  const EventId early = truth.register_event(EventType::Accident, {0, 0}, 10.0, true);
  const EventId real = truth.register_event(EventType::Accident, {0, 0}, 200.0, true);
  const EventId fake = truth.register_event(EventType::Accident, {0, 0}, 300.0, false);
  const EventId open = truth.register_event(EventType::Accident, {0, 0}, 300.0, false);
  const std::vector<DisputeRecord> d{
      ruling(early, Decision::DecidedFalse, 150.0),  // before warm-up
      ruling(real, Decision::Unresolved, 320.0),
      ruling(real, Decision::DecidedTrue, 500.0),  // official settles it later
      ruling(fake, Decision::DecidedFalse, 420.0),
      ruling(open, Decision::Unresolved, 420.0),
  };
  std::uint64_t unresolved = 0, opened = 0;
  const auto m = classify(d, truth, 100.0, &unresolved, &opened);
  CHECK(m.tn == 1);
  CHECK(m.tp == 1);
  CHECK(m.fp == 0);
  CHECK(m.decided() == 2);
  CHECK(unresolved == 1);
  CHECK(opened == 3);
}

TEST_CASE("overhead counts transmissions of announced post-warm-up events")
{
  GroundTruth truth;
  const EventId a = truth.register_event(EventType::Accident, {0, 0}, 50.0, true);
  const EventId b = truth.register_event(EventType::Accident, {0, 0}, 150.0, true);
  const EventId silent = truth.register_event(EventType::Accident, {0, 0}, 150.0, true);
  truth.mark_announced(a, 51.0);
  truth.mark_announced(b, 151.0);
  RunLogs logs;
  auto tx = [&](std::optional<EventId> e) {
    TransmissionRecord t;
    t.event_id = e;
    logs.transmissions.push_back(t);
  };
  for (int i = 0; i < 3; ++i) tx(a);
  for (int i = 0; i < 7; ++i) tx(b);
  tx(silent);
  tx(std::nullopt);
  logs.responses.push_back({EntityId{1}, b, 151.0, 151.5});
  logs.responses.push_back({EntityId{2}, a, 51.0, 52.0});
  const auto m = compute(logs, truth, 100.0);
  CHECK(m.events == 1);
  CHECK(m.event_messages == 7);
  CHECK(m.messages_per_event == doctest::Approx(7.0));
  REQUIRE(m.mean_response());
  CHECK(*m.mean_response() == doctest::Approx(0.5));
}

TEST_CASE("parallel_for runs every job once and rethrows")
{
  std::vector<std::atomic<int>> hits(200);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("sweep aggregation pools seeds")
{
  std::vector<SweepRow> rows;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    SweepRow r;
    r.density = 30;
    r.p_yes = 0.4;
    r.seed = seed;
    r.matrix.tn = seed;
    r.matrix.fp = 1;
    rows.push_back(r);
  }
  const auto cells = aggregate(rows);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].matrix.tn == 6);
  CHECK(cells[0].matrix.fp == 3);
  CHECK(cells[0].runs == 3);
  CHECK(sweep_summary_csv(cells).find("30") != std::string::npos);
}
