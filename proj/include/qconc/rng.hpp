// Seedable random streams with counter-based substream derivation.
//
// Every sampling operation in the library takes an explicit RngStream; there
// is no hidden global generator. Substreams derived from (master seed, trial
// index) are stable regardless of execution order, so parallel and sequential
// runs of the same configuration produce identical results.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace qconc {

/// SplitMix64 generator. Small state, full 64-bit output mixing; more than
/// adequate for Born-rule sampling at desk scale.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  /// Derives the stream for one trial from a master seed and a trial index.
  /// The construction is a hash of (seed, index), not an advance of a shared
  /// stream, so trial k's randomness never depends on scheduling.
  static RngStream for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    return RngStream(mix(master_seed + 0x9E3779B97F4A7C15ULL * (trial_index + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Samples an index from a discrete distribution given by `probs`.
  /// Probabilities are assumed to sum to ~1; any tail rounding slack is
  /// assigned to the last entry.
  std::size_t pick(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("pick: empty distribution");
    const double u = next_unit();
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cumulative += probs[i];
      if (u < cumulative) return i;
    }
    return probs.size() - 1;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace qconc
