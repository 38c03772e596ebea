// DSCP -> access category classification.
//
// Normative map: EF (46) -> VO, AF4x/CS4 (32..39) -> VI, CS1 (8) -> BK,
// everything else (including CS0/default) -> BE. The table is part of the
// run configuration and echoed into run metadata.
#pragma once

#include <utility>
#include <vector>

#include "relaysim/types.hpp"

namespace relaysim {

constexpr int kDscpEf = 46;       // expedited forwarding -> VO
constexpr int kDscpDefault = 0;   // best effort

struct DscpRange {
  int lo;
  int hi;
  AcLabel ac;
};

struct DscpMap {
  std::vector<DscpRange> ranges = {
      {46, 46, AcLabel::VO},
      {32, 39, AcLabel::VI},
      {8, 8, AcLabel::BK},
  };
  AcLabel fallback = AcLabel::BE;

  AcLabel classify(int dscp) const {
    for (const auto& r : ranges) {
      if (dscp >= r.lo && dscp <= r.hi) return r.ac;
    }
    return fallback;
  }

  // Canonical code a flow re-designated to `ac` is marked with.
  static int canonical_dscp(AcLabel ac) {
    switch (ac) {
      case AcLabel::VO: return 46;
      case AcLabel::VI: return 34;
      case AcLabel::BE: return 0;
      case AcLabel::BK: return 8;
    }
    return 0;
  }
};

}  // namespace relaysim
