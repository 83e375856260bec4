#include "vanet/ground_truth.hpp"

namespace vanet {

EventId GroundTruth::register_event(EventType type, Vec2 location, SimTime observed_at, bool real,
                                    std::string label)
{
  const EventId id{next_id_++};
  events_.emplace(id, EventRecord{id, type, location, observed_at, std::nullopt, real, false,
                                  std::move(label)});
  return id;
}

const EventRecord* GroundTruth::find(EventId id) const
{
  auto it = events_.find(id);
  return it == events_.end() ? nullptr : &it->second;
}

bool GroundTruth::is_real(EventId id) const
{
  const EventRecord* rec = find(id);
  return rec != nullptr && rec->real;
}

void GroundTruth::mark_announced(EventId id, SimTime when)
{
  auto it = events_.find(id);
  if (it != events_.end() && !it->second.announced_at) it->second.announced_at = when;
}

void GroundTruth::resolve(EventId id)
{
  auto it = events_.find(id);
  if (it != events_.end()) it->second.resolved = true;
}

std::vector<const EventRecord*> GroundTruth::active(SimTime now, double max_age) const
{
  std::vector<const EventRecord*> out;
  for (const auto& [id, rec] : events_) {
    if (rec.resolved) continue;
    const SimTime since = rec.real ? rec.observed_at : rec.announced_at.value_or(now + 1.0);
    if (since <= now && now - since <= max_age) out.push_back(&rec);
  }
  return out;
}

}  // namespace vanet
