// Named deterministic random streams.
//
// Each stochastic component of a run owns a stream keyed by (run seed,
// stream id), e.g. "mac.A.VO.backoff" or "defense.ackdrop". Identical
// (seed, id) pairs yield identical draw sequences on every platform, and
// draws on one stream never perturb another, so changing one stochastic
// component leaves the rest of the run untouched.
//
// Core generator is splitmix64; bounded draws use Lemire's unbiased
// multiply-shift rejection so every value in [lo, hi] is exactly
// equiprobable.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string_view>

#include "relaysim/hash.hpp"

namespace relaysim {

class RngStream {
 public:
  RngStream() : RngStream(0, "default") {}

  RngStream(std::uint64_t seed, std::string_view stream_id) {
    state_ = mix(seed * 0x9e3779b97f4a7c15ull ^ fnv1a64(stream_id));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform integer in [lo, hi], unbiased. lo > hi is a contract violation.
  int uniform_int(int lo, int hi) {
    if (lo > hi) {
      std::fprintf(stderr, "rng: uniform_int with lo=%d > hi=%d\n", lo, hi);
      std::abort();
    }
    std::uint64_t range = static_cast<std::uint64_t>(hi) - lo + 1;
    if (range == 0) return lo;  // full 64-bit span (unused in practice)
    unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
      std::uint64_t threshold = (0 - range) % range;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * range;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return lo + static_cast<int>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 bits of mantissa.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Box-Muller; draws two uniforms per call, used by tests only.
  double normal(double mean, double sd) {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    double z = std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + z * sd;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace relaysim
