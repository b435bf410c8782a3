#pragma once

#include <cstdint>

namespace cyclap {

/// Small deterministic generator (splitmix64). All randomized machinery in the
/// library takes one of these explicitly, so every result is a pure function
/// of its seed and identical across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform-ish value in [0, bound). bound = 0 yields 0.
    std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

    /// Signed value in [-magnitude, magnitude].
    std::int64_t small_int(std::uint64_t magnitude) {
        return static_cast<std::int64_t>(below(2 * magnitude + 1)) - static_cast<std::int64_t>(magnitude);
    }

    bool coin() { return (next() & 1) != 0; }

    /// Independent child stream; used to fan property iterations out of one seed.
    Rng split() { return Rng(next() ^ 0x5851f42d4c957f2dULL); }

  private:
    std::uint64_t state_;
};

}  // namespace cyclap
