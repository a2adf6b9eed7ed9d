#pragma once

#include <cstdint>
#include <vector>

#include "lienard/model.hpp"

namespace lienard {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// 64-bit linear congruential generator (Knuth's MMIX multiplier and
/// increment). Deterministic across platforms.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed = kDefaultSeed) : state_(seed) {}

  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }
  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

struct PhasePoint {
  double t;
  double x;
  double v;
};

/// Pre-generated sample list: t in [0, 2 pi / omega), x in the central 90%
/// of the domain, v in [-2, 2].
std::vector<PhasePoint> sample_phase_points(const LienardModel& m, int count, std::uint64_t seed = kDefaultSeed);

}  // namespace lienard
