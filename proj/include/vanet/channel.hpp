#pragma once

#include <span>
#include <vector>

#include "vanet/types.hpp"

namespace vanet {

struct RadioNode {
  EntityId id{};
  Vec2 position;
};

/// Ideal unit-disk channel: a receiver hears a transmission iff it lies
/// within `range` meters of the sender (inclusive). No loss, no contention.
class UnitDiskChannel {
 public:
  explicit UnitDiskChannel(double range) : range_(range) {}

  double range() const { return range_; }
  bool hears(Vec2 a, Vec2 b) const { return distance(a, b) <= range_; }

  /// Every node within range of `center` except `exclude`, in input order.
  std::vector<EntityId> neighbors(std::span<const RadioNode> nodes, Vec2 center,
                                  EntityId exclude) const
  {
    std::vector<EntityId> out;
    const double r2 = range_ * range_;
    for (const RadioNode& n : nodes) {
      if (n.id == exclude) continue;
      const double dx = n.position.x - center.x;
      const double dy = n.position.y - center.y;
      if (dx * dx + dy * dy <= r2) out.push_back(n.id);
    }
    return out;
  }

 private:
  double range_;
};

}  // namespace vanet
