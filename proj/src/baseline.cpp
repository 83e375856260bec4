#include "vanet/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace vanet::baseline {

std::string_view to_string(Scheme scheme)
{
  switch (scheme) {
    case Scheme::MajorityVote: return "majority";
    case Scheme::WeightedByReputation: return "weighted";
    case Scheme::HighestReputation: return "highest";
  }
  return "?";
}

std::optional<Scheme> scheme_from_string(std::string_view name)
{
  for (Scheme s : {Scheme::MajorityVote, Scheme::WeightedByReputation, Scheme::HighestReputation}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

namespace {
Verdict sign_verdict(double v)
{
  if (v > 0.0) return Verdict::True;
  if (v < 0.0) return Verdict::False;
  return Verdict::Undecided;
}
}  // namespace

Verdict decide(const EventBuffer& buffer, Scheme scheme)
{
  if (buffer.messages.empty()) return Verdict::Undecided;
  switch (scheme) {
    case Scheme::MajorityVote: {
      int sum = 0;
      for (const auto& m : buffer.messages) sum += m.claim;
      return sign_verdict(sum);
    }
    case Scheme::WeightedByReputation: {
      std::int64_t nano = 0;
      for (const auto& m : buffer.messages) nano += m.claim * std::llround(m.reputation * 1e9);
      return sign_verdict(static_cast<double>(nano));
    }
    case Scheme::HighestReputation: {
      const double best = std::max_element(buffer.messages.begin(), buffer.messages.end(),
                                           [](const auto& a, const auto& b) {
                                             return a.reputation < b.reputation;
                                           })->reputation;
      int claim = 0;
      for (const auto& m : buffer.messages) {
        if (m.reputation != best) continue;
        if (claim != 0 && claim != m.claim) return Verdict::Undecided;
        claim = m.claim;
      }
      return sign_verdict(claim);
    }
  }
  return Verdict::Undecided;
}

double ReputationTable::reputation(DriverId driver) const
{
  auto it = table_.find(driver);
  return it == table_.end() ? initial_ : it->second;
}

void ReputationTable::feedback(DriverId driver, int vote)
{
  const double next = std::clamp(reputation(driver) + step_ * vote, 0.0, cap_);
  table_[driver] = next;
  dirty_[driver] = next;
}

std::vector<std::pair<DriverId, double>> ReputationTable::take_updates()
{
  std::vector<std::pair<DriverId, double>> out(dirty_.begin(), dirty_.end());
  dirty_.clear();
  return out;
}

}  // namespace vanet::baseline
