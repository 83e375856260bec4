#pragma once

#include <cstdint>
#include <random>

namespace vanet {

inline std::uint64_t splitmix64(std::uint64_t& state)
{
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent per-entity stream derived from one root seed, so adding an
/// agent does not perturb the draws of the others.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t root_seed, std::uint64_t stream_id)
  {
    std::uint64_t state = root_seed ^ (stream_id * 0xd1b54a32d192ed03ULL);
    splitmix64(state);
    engine_.seed(splitmix64(state));
  }

  /// Uniform in [0, 1) from the top 53 bits; portable across standard libraries.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  bool bernoulli(double p) { return uniform01() < p; }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vanet
