#pragma once
#include <cstdint>

namespace lab {

// splitmix64: same seed gives the same stream on every platform.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return (next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

    // Uniform in [-1, 1].
    double next_signed() { return 2.0 * next_double() - 1.0; }

  private:
    std::uint64_t state_;
};

}  // namespace lab
