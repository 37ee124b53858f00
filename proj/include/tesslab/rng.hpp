// Seeded, stream-splittable RNG for replication-parallel simulation.
//
// mt19937_64 output is fully specified by the standard, and every variate
// below is derived from raw engine words with fixed arithmetic, so a given
// (seed, stream_id) reproduces the same sequence bit for bit; distinct
// stream ids give decorrelated streams.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace tesslab {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {
    std::uint64_t x = seed;
    const std::uint64_t a = mix(x);
    const std::uint64_t b = mix(x);
    x ^= stream_id * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL;
    const std::uint64_t c = mix(x);
    const std::uint64_t d = mix(x);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                      static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
    return -std::log(1.0 - uniform01()) / rate;
  }

  // Poisson count via unit-exponential arrivals; exact for the mean sizes
  // used here (hundreds to a few thousand).
  long poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be nonnegative");
    long n = 0;
    double acc = exponential(1.0);
    while (acc <= mean) {
      ++n;
      acc += exponential(1.0);
    }
    return n;
  }

 private:
  static std::uint64_t mix(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace tesslab
