#pragma once

#include <set>
#include <string>
#include <vector>

#include "vanet/logs.hpp"

namespace vanet {
class Simulation;
}

namespace vanet::audit {

struct Violation {
  std::string check;
  std::string detail;
};

/// Sender-side gating: every vehicle-originated announcement or untrue
/// report passed the class gate, and every vehicle relay passed the
/// forwarding gate, at the trust held when it was sent.
std::vector<Violation> sender_gating(const RunLogs& logs);

/// A blocked driver sends beacons and block acknowledgements only.
std::vector<Violation> blocked_silence(const RunLogs& logs);

/// Neither the disputed sender nor a reporter is counted as a clarifier.
std::vector<Violation> non_participation(const RunLogs& logs);

/// A ruling that counted an official's feedback is an official ruling.
std::vector<Violation> official_precedence(const RunLogs& logs, const std::set<EntityId>& officials);

/// At most one decided ruling per event.
std::vector<Violation> dispute_uniqueness(const RunLogs& logs);

/// Successive RSU punishments of one driver never shrink.
std::vector<Violation> ipp_monotonic(const RunLogs& logs, double floor = 0.05);

/// Log times never run backwards; responses and rulings follow their causes.
std::vector<Violation> causality(const RunLogs& logs);

/// Every check above.
std::vector<Violation> run_all(const Simulation& sim);

std::string format(const std::vector<Violation>& violations);

}  // namespace vanet::audit
