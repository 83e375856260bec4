#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vanet/types.hpp"

namespace vanet {

template <class Payload>
struct SimEvent {
  SimTime time = 0.0;
  std::uint64_t sequence = 0;
  EntityId target{};
  Payload payload{};
};

/// Discrete-event queue ordered by (time, sequence). Equal timestamps run in
/// insertion order; the clock never moves backwards.
template <class Payload>
class EventQueue {
 public:
  SimTime now() const { return now_; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  std::uint64_t executed() const { return executed_; }

  std::optional<SimTime> next_time() const
  {
    if (heap_.empty()) return std::nullopt;
    return heap_.front().time;
  }

  std::uint64_t schedule(SimTime time, EntityId target, Payload payload)
  {
    if (time < now_) {
      throw CausalityError("event scheduled at " + std::to_string(time) +
                           " before current clock " + std::to_string(now_));
    }
    const std::uint64_t seq = next_sequence_++;
    heap_.push_back({time, seq, target, std::move(payload)});
    std::push_heap(heap_.begin(), heap_.end(), Later{});
    return seq;
  }

  SimEvent<Payload> pop()
  {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    SimEvent<Payload> ev = std::move(heap_.back());
    heap_.pop_back();
    now_ = ev.time;
    ++executed_;
    return ev;
  }

 private:
  struct Later {
    bool operator()(const SimEvent<Payload>& a, const SimEvent<Payload>& b) const
    {
      if (a.time != b.time) return a.time > b.time;
      return a.sequence > b.sequence;
    }
  };

  std::vector<SimEvent<Payload>> heap_;
  SimTime now_ = 0.0;
  std::uint64_t next_sequence_ = 0;
  std::uint64_t executed_ = 0;
};

}  // namespace vanet
