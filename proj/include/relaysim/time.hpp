// Simulation time base: integer nanoseconds since run start. Integer slots
// (20 us) and SIFS (10 us) divide exactly, so MAC timing needs no floats.
#pragma once

#include <cstdint>

namespace relaysim {

using SimTime = std::int64_t;  // nanoseconds, never negative

constexpr SimTime from_ns(std::int64_t v) { return v; }
constexpr SimTime from_us(std::int64_t v) { return v * 1'000; }
constexpr SimTime from_ms(std::int64_t v) { return v * 1'000'000; }
constexpr SimTime from_sec(std::int64_t v) { return v * 1'000'000'000; }

constexpr double to_sec(SimTime t) { return static_cast<double>(t) * 1e-9; }
constexpr double to_ms(SimTime t) { return static_cast<double>(t) * 1e-6; }

}  // namespace relaysim
