#pragma once

#include <cstdint>
#include <vector>

namespace mwdisc {

// Counter-based pseudorandom generator (SplitMix64 output function over
// seed + counter * golden ratio). Fully specified here so that streams are
// bit-reproducible across platforms and compilers; std:: distributions are
// implementation-defined and must not be used where reproducibility matters.
//
// split(stream) derives an independent child generator from the original
// seed and a stream label, so sub-tasks can draw without consuming from (or
// depending on the draw count of) the parent.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : origin_(seed) {}

  std::uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ULL;
    return mix(origin_ + counter_);
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1); never returns an exact 0 or 1.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n); n must be positive.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  SplitRng split(std::uint64_t stream) {
    return SplitRng(mix(origin_ ^ mix(stream + 0x632BE59BD9B4E019ULL)));
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

 private:
  std::uint64_t origin_;
  std::uint64_t counter_ = 0;
};

}  // namespace mwdisc
