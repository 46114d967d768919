#pragma once

#include <cstdint>
#include <random>

namespace isoflow {

// mt19937_64 with a fixed 53-bit mapping to [0,1), so sequences do not depend
// on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Integer in [lo, hi].
  long integer(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace isoflow
