#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "vanet/types.hpp"

namespace vanet::baseline {

// Receiver-side reputation scheme used as the comparison point: every
// observer announces, receivers buffer claims until a timer fires, then vote.

enum class Scheme { MajorityVote, WeightedByReputation, HighestReputation };
std::string_view to_string(Scheme scheme);
std::optional<Scheme> scheme_from_string(std::string_view name);

enum class Verdict { True, False, Undecided };

struct BufferedClaim {
  EntityId sender{};
  double reputation = 0.0;
  int claim = 1;  ///< +1 event is real, -1 event is false
};

struct EventBuffer {
  EventId event_id{};
  std::vector<BufferedClaim> messages;
  SimTime timer_deadline = 0.0;
  SimTime first_injected = 0.0;
  bool decided = false;
};

/// Ties and empty buffers are Undecided.
Verdict decide(const EventBuffer& buffer, Scheme scheme);

/// RSU-side reputation store fed by receiver feedback.
class ReputationTable {
 public:
  ReputationTable(double initial, double step, double cap) : initial_(initial), step_(step), cap_(cap) {}

  double reputation(DriverId driver) const;
  void feedback(DriverId driver, int vote);
  /// Entries changed since the last call.
  std::vector<std::pair<DriverId, double>> take_updates();

 private:
  double initial_;
  double step_;
  double cap_;
  std::map<DriverId, double> table_;
  std::map<DriverId, double> dirty_;
};

}  // namespace vanet::baseline
