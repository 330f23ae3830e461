#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hawkes/events.hpp"
#include "hawkes/params.hpp"

namespace hawkes {

/// 64-bit Mersenne Twister; the stream is fixed by the C++ standard for a
/// given seed.  Uniforms use the top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Exponential with the given rate.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finaliser over (seed, replication).
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t replication);

/// One realisation on [0, horizon] by Ogata thinning.  Throws
/// ExplosiveProcess when the branching radius is >= 1.
EventSequence simulate(const ModelParams& params, double horizon, std::uint64_t seed);

/// Replication r is simulate(params, horizon, child_seed(seed, r)).
std::vector<EventSequence> simulate_many(const ModelParams& params, double horizon, int n_reps,
                                         std::uint64_t seed);

}  // namespace hawkes
