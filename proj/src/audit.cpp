#include "vanet/audit.hpp"

#include <cmath>
#include <map>

#include "vanet/simulation.hpp"

namespace vanet::audit {

namespace {

std::string at(SimTime t) { return "t=" + format_time(t); }

bool contains(const std::vector<Party>& parties, EntityId id)
{
  for (const Party& p : parties) {
    if (p.vehicle == id) return true;
  }
  return false;
}

}  // namespace

std::vector<Violation> sender_gating(const RunLogs& logs)
{
  std::vector<Violation> out;
  for (const TransmissionRecord& t : logs.transmissions) {
    if (!t.sender_is_vehicle || t.sender_official) continue;
    const bool relay = t.sender != t.origin;
    bool ok = true;
    if (relay) {
      ok = forwarding_permitted(t.sender_trust, t.sender_blocked);
    } else if (t.kind == MessageKind::EventAnnouncement && t.event_type) {
      ok = permitted(*t.event_type, t.sender_trust, t.sender_blocked);
    } else if (t.kind == MessageKind::UntrueReport) {
      ok = permitted(EventType::UntrueAttackReport, t.sender_trust, t.sender_blocked);
    }
    if (!ok) {
      out.push_back({"sender_gating", at(t.time) + " vehicle " + std::to_string(raw(t.sender)) + " sent " +
                                          std::string(to_string(t.kind)) + " at trust " +
                                          std::to_string(t.sender_trust)});
    }
  }
  return out;
}

std::vector<Violation> blocked_silence(const RunLogs& logs)
{
  std::vector<Violation> out;
  for (const TransmissionRecord& t : logs.transmissions) {
    if (!t.sender_is_vehicle || !t.sender_blocked) continue;
    if (t.kind == MessageKind::Beacon || t.kind == MessageKind::BlockingAck) continue;
    out.push_back({"blocked_silence", at(t.time) + " blocked vehicle " + std::to_string(raw(t.sender)) +
                                          " sent " + std::string(to_string(t.kind))});
  }
  return out;
}

std::vector<Violation> non_participation(const RunLogs& logs)
{
  std::vector<Violation> out;
  for (const DisputeRecord& d : logs.disputes) {
    for (EntityId c : d.feedback_from) {
      const bool sender = contains(d.rewarded, c) || contains(d.punished, c);
      if (sender) {
        out.push_back({"non_participation", at(d.time) + " event " + std::to_string(raw(d.event_id)) +
                                                ": party " + std::to_string(raw(c)) + " also clarified"});
      }
    }
  }
  return out;
}

std::vector<Violation> official_precedence(const RunLogs& logs, const std::set<EntityId>& officials)
{
  std::vector<Violation> out;
  for (const DisputeRecord& d : logs.disputes) {
    for (EntityId c : d.feedback_from) {
      if (officials.contains(c) && d.method != DecisionMethod::Official) {
        out.push_back({"official_precedence", at(d.time) + " event " + std::to_string(raw(d.event_id)) +
                                                  " counted official feedback in a vote"});
      }
    }
  }
  return out;
}

std::vector<Violation> dispute_uniqueness(const RunLogs& logs)
{
  std::vector<Violation> out;
  std::map<EventId, int> decided;
  for (const DisputeRecord& d : logs.disputes) {
    if (d.decision != Decision::DecidedTrue && d.decision != Decision::DecidedFalse) continue;
    if (++decided[d.event_id] == 2) {
      out.push_back({"dispute_uniqueness", at(d.time) + " event " + std::to_string(raw(d.event_id)) +
                                               " ruled more than once"});
    }
  }
  return out;
}

std::vector<Violation> ipp_monotonic(const RunLogs& logs, double floor)
{
  std::vector<Violation> out;
  std::map<DriverId, double> last;
  for (const TrustRecord& r : logs.trust) {
    if (r.cause == trust::TrustCause::Unblocked) last.erase(r.driver);
    if (r.cause != trust::TrustCause::RsuPunishment) continue;
    const double magnitude = -r.delta;
    auto it = last.find(r.driver);
    // The applied delta may be clipped by the floor, so only a strict
    // shrink above the floor is a violation.
    const bool clipped = std::abs(r.trust - floor) < 1e-9;
    if (it != last.end() && magnitude + 1e-9 < it->second && !clipped) {
      out.push_back({"ipp_monotonic", at(r.time) + " driver " + std::to_string(raw(r.driver)) +
                                          " punished less than before"});
    }
    if (!clipped) last[r.driver] = magnitude;
  }
  return out;
}

std::vector<Violation> causality(const RunLogs& logs)
{
  std::vector<Violation> out;
  SimTime prev = 0.0;
  for (const TransmissionRecord& t : logs.transmissions) {
    if (t.time < prev) out.push_back({"causality", at(t.time) + " transmission logged out of order"});
    prev = t.time;
  }
  for (const ResponseRecord& r : logs.responses) {
    if (r.decided_at < r.injected_at) {
      out.push_back({"causality", at(r.decided_at) + " response precedes injection"});
    }
  }
  for (const DisputeRecord& d : logs.disputes) {
    if (d.time < d.opened_at) out.push_back({"causality", at(d.time) + " ruling precedes dispute"});
  }
  return out;
}

std::vector<Violation> run_all(const Simulation& sim)
{
  const RunLogs& logs = sim.logs();
  std::set<EntityId> officials;
  for (const VehicleAgent& v : sim.vehicles()) {
    if (v.official()) officials.insert(v.id());
  }
  std::vector<Violation> out;
  const double floor = sim.scenario().vehicle.trust.floor;
  for (auto part : {sender_gating(logs), blocked_silence(logs), non_participation(logs),
                    official_precedence(logs, officials), dispute_uniqueness(logs),
                    ipp_monotonic(logs, floor), causality(logs)}) {
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string format(const std::vector<Violation>& violations)
{
  std::string out;
  for (const Violation& v : violations) out += v.check + ": " + v.detail + '\n';
  return out;
}

}  // namespace vanet::audit
