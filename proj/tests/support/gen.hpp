#pragma once

// Hand-rolled generators for property tests. splitmix64 keeps the test
// streams independent of the library's own RNG.

#include <cmath>
#include <cstdint>
#include <vector>

#include "isoflow/higher_rank.hpp"

namespace testgen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  long integer(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  int sign() { return (next() & 1) ? 1 : -1; }

  // Chain state with s in [-1, 1] and r in [0.4, 1.6].
  isoflow::ChainState chain(std::size_t d) {
    isoflow::ChainState st;
    for (std::size_t i = 0; i < d; ++i) {
      st.s.push_back(uniform(-1.0, 1.0));
      st.r.push_back(uniform(0.4, 1.6));
    }
    return st;
  }

 private:
  std::uint64_t state_;
};

constexpr int kCases = 40;

}  // namespace testgen
