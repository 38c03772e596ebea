// PHY timing for the 802.11b (long preamble) air interface: 20 us slots,
// 10 us SIFS, 192 us PLCP preamble+header per frame, 11 Mb/s data rate and
// 2 Mb/s control rate. All exposed through configuration.
#pragma once

#include <cstdint>

#include "relaysim/time.hpp"

namespace relaysim {

struct PhyParams {
  SimTime slot = from_us(20);
  SimTime sifs = from_us(10);
  SimTime plcp_overhead = from_us(192);
  std::int64_t data_rate_bps = 11'000'000;
  std::int64_t control_rate_bps = 2'000'000;

  // Frame airtime: PLCP preamble+header plus payload bits at `rate`,
  // rounded up to whole nanoseconds.
  SimTime airtime(int bytes, std::int64_t rate_bps) const {
    std::int64_t bits = static_cast<std::int64_t>(bytes) * 8;
    std::int64_t ns = (bits * 1'000'000'000 + rate_bps - 1) / rate_bps;
    return plcp_overhead + ns;
  }

  SimTime aifs(int aifsn) const { return sifs + aifsn * slot; }
};

// 802.11 control/management frame sizes (bytes, including FCS) and the
// per-frame MAC overhead added to an IP packet in a data frame.
constexpr int kRtsBytes = 20;
constexpr int kCtsBytes = 14;
constexpr int kMacAckBytes = 14;
constexpr int kMacDataOverhead = 28;

}  // namespace relaysim
