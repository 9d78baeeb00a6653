#pragma once

#include <cstdint>

namespace sscfl {

// Small splitmix64-based generator. Unlike the <random> distributions, the
// output stream is identical across standard library implementations, which
// keeps seeded runs reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    // Rejection sampling keeps the distribution exactly uniform.
    const std::uint64_t limit = span * (UINT64_MAX / span);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit && limit != 0);
    return lo + static_cast<std::int64_t>(v % span);
  }

  // Independent stream derived from this seed and a tag; used so that
  // logically parallel draws do not depend on evaluation order.
  Rng substream(std::uint64_t tag) const {
    Rng r(state_ ^ (0x517cc1b727220a95ULL * (tag + 1)));
    r.next_u64();
    return r;
  }

 private:
  std::uint64_t state_;
};

}  // namespace sscfl
