#include <doctest.h>

#include "vanet/audit.hpp"
#include "vanet/scenarios.hpp"
#include "vanet/simulation.hpp"

using namespace vanet;

namespace {

double trust_at(const RunLogs& logs, EntityId vehicle, SimTime t)
{
  double value = -1.0;
  for (const auto& r : logs.trust) {
    if (r.vehicle == vehicle && r.time <= t + 1e-9) value = r.trust;
  }
  return value;
}

}  // namespace

TEST_CASE("scripted trace: inconsistent sender is punished with escalating steps and blocked")
{
  Simulation sim(scenarios::fig4_trace());
  sim.run();
  CHECK(audit::run_all(sim).empty());
  const RunLogs& logs = sim.logs();
  const EntityId v0{0};
  struct Point {
    SimTime t;
    double trust;
  };
  const Point expected[] = {{0.0, 0.9},      {220.0, 0.9},      {220.015, 0.8}, {620.0, 0.88},
                            {640.01, 0.58},  {820.015, 0.66},   {1020.015, 0.74}, {1220.0, 0.82},
                            {1420.0, 0.9},   {1820.0, 0.9},     {2020.01, 0.4},  {2020.05, 0.05}};
  for (const auto& p : expected) {
    CAPTURE(p.t);
    CHECK(trust_at(logs, v0, p.t) == doctest::Approx(p.trust).epsilon(1e-9));
  }
  CHECK(sim.vehicle(v0).blocked());
  // Consistent senders climb to the cap and are never punished.
  for (EntityId v : {EntityId{1}, EntityId{2}}) {
    CHECK(trust_at(logs, v, 1e9) == doctest::Approx(0.9));
    for (const auto& r : logs.trust) {
      if (r.vehicle == v) CHECK(r.cause != trust::TrustCause::RsuPunishment);
    }
  }
  // Punishment magnitudes escalate along the IPP.
  std::vector<double> punishments;
  for (const auto& r : logs.trust) {
    if (r.vehicle == v0 && r.cause == trust::TrustCause::RsuPunishment) punishments.push_back(-r.delta);
  }
  REQUIRE(punishments.size() == 3);
  CHECK(punishments[0] == doctest::Approx(0.1));
  CHECK(punishments[1] == doctest::Approx(0.3));
  CHECK(punishments[2] == doctest::Approx(0.5));
}
