// FNV-1a 64-bit hashing, used for RNG stream labels, config fingerprints
// and the dispatch-trace hash.
#pragma once

#include <cstdint>
#include <string_view>

namespace relaysim {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x00000100000001b3ull;

constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t h = kFnvOffset) {
  for (char c : data) {
    h ^= static_cast<std::uint8_t>(c);
    h *= kFnvPrime;
  }
  return h;
}

// Incremental variant for streams of mixed integers/strings.
class Fnv1a {
 public:
  void mix(std::string_view s) { h_ = fnv1a64(s, h_); }
  void mix_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xff;
      h_ *= kFnvPrime;
    }
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = kFnvOffset;
};

}  // namespace relaysim
