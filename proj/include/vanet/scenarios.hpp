#pragma once

#include <cstdint>

#include "vanet/scenario.hpp"

namespace vanet::scenarios {

/// Scripted single-sender trace: V0 parked at the origin announces every
/// 200 s from t=100; a100, a300 and a1700 are fabricated. Vehicle ids:
/// 0 = V0, 1 = V1, 2 = V2, 3 = R1, 4 = R2, 5..7 = C1..C3, 8 = O1.
Scenario fig4_trace();

enum class SenderMode { AllTrue, AllUntrue };

/// Loop road with periodic incidents; every vehicle may report (p = 0.4)
/// and clarifies YES with probability `p_yes`.
Scenario fig5_point(int density, double p_yes, std::uint64_t seed, SenderMode mode);

/// Grid with one real incident at 400 s that passing vehicles announce.
Scenario fig6_point(int density, Protocol protocol, double baseline_timer, std::uint64_t seed);

}  // namespace vanet::scenarios
