#ifndef SGL_RNG_HPP
#define SGL_RNG_HPP

#include <cstdint>

namespace sgl {

/**
 * Splittable deterministic generator (splitmix64 core).
 *
 * All randomness in the artifact flows from a single 64-bit seed; per-shard
 * streams are derived by index, so results are independent of worker count.
 */
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Derived independent stream; split(i) != split(j) streams for i != j.
  SplitRng split(std::uint64_t index) const {
    SplitRng probe(state_ ^ (0xd1342543de82ef95ULL * (index + 1)));
    probe.next();
    return probe;
  }

  // Uniform in [0, n); modulo bias removed by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t threshold = (~n + 1) % n;  // (2^64 - n) mod n
    for (;;) {
      std::uint64_t x = next();
      if (x >= threshold) return x % n;
    }
  }

  double uniform01() { return (next() >> 11) * (1.0 / 9007199254740992.0); }

 private:
  std::uint64_t state_;
};

}  // namespace sgl

#endif
