#pragma once

#include <cstdint>
#include <random>

namespace jcir {

/// Deterministic random stream addressed by (seed, stream_id).
/// Streams with distinct ids are independent for practical purposes; the
/// mapping (seed, stream_id) -> draw sequence is fixed, so any computation
/// that assigns one stream per work item reproduces bit-identically no
/// matter how the items are scheduled across threads.
class RandomStream {
public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t s = seed ^ 0x9e3779b97f4a7c15ull;
    std::uint64_t w0 = mix(s += stream_id * 0xbf58476d1ce4e5b9ull);
    std::uint64_t w1 = mix(s += 0x9e3779b97f4a7c15ull);
    std::uint64_t w2 = mix(s += 0x9e3779b97f4a7c15ull);
    std::uint64_t w3 = mix(s += 0x9e3779b97f4a7c15ull);
    std::seed_seq seq{w0, w1, w2, w3};
    engine_.seed(seq);
  }

  double uniform() {  // U(0,1), never exactly 0
    return std::uniform_real_distribution<double>(
        std::numeric_limits<double>::min(), 1.0)(engine_);
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  double exponential(double mean) {
    return std::exponential_distribution<double>(1.0 / mean)(engine_);
  }

  long poisson(double mean) {
    return std::poisson_distribution<long>(mean)(engine_);
  }

  /// Gamma(shape, scale); shape == 0 is the unit mass at 0.
  double gamma(double shape, double scale) {
    if (shape == 0.0) return 0.0;
    return std::gamma_distribution<double>(shape, scale)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

private:
  static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace jcir
