// EDCA access-category contention parameters and the bounded transmit queue.
//
// Defaults follow the 802.11 EDCA parameter set for a DSSS PHY
// (aCWmin = 31, aCWmax = 1023):
//   VO {AIFSN 2, CW 7/15}, VI {AIFSN 2, CW 15/31},
//   BE {AIFSN 3, CW 31/1023}, BK {AIFSN 7, CW 31/1023}.
// CW bounds are of the form 2^k - 1. Retry limit 7 applies to every frame.
#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <utility>

#include "relaysim/packet.hpp"
#include "relaysim/types.hpp"

namespace relaysim {

struct AcParams {
  int aifsn = 2;
  int cw_min = 7;
  int cw_max = 15;
  int retry_limit = 7;
};

inline AcParams default_ac_params(AcLabel ac) {
  switch (ac) {
    case AcLabel::VO: return {2, 7, 15, 7};
    case AcLabel::VI: return {2, 15, 31, 7};
    case AcLabel::BE: return {3, 31, 1023, 7};
    case AcLabel::BK: return {7, 31, 1023, 7};
  }
  return {};
}

constexpr int kDefaultQueueCapacity = 50;

// One EDCA transmit queue: bounded drop-tail FIFO plus the contention
// state of its EDCAF (current CW, frozen backoff counter, retry count).
class AcQueue {
 public:
  AcQueue() = default;
  AcQueue(AcLabel label, AcParams params, int capacity)
      : label_(label), params_(params), capacity_(capacity),
        cw_current_(params.cw_min) {}

  struct Entry {
    IpPacket packet;
    NodeId next_hop;
  };

  enum class EnqueueResult { Accepted, Dropped };

  EnqueueResult enqueue(IpPacket packet, NodeId next_hop) {
    if (static_cast<int>(fifo_.size()) >= capacity_)
      return EnqueueResult::Dropped;
    fifo_.push_back(Entry{std::move(packet), next_hop});
    return EnqueueResult::Accepted;
  }

  bool empty() const { return fifo_.empty(); }
  int length() const { return static_cast<int>(fifo_.size()); }
  const Entry& head() const { return fifo_.front(); }
  Entry pop_head() {
    Entry e = std::move(fifo_.front());
    fifo_.pop_front();
    return e;
  }

  AcLabel label() const { return label_; }
  const AcParams& params() const { return params_; }
  void set_params(const AcParams& p) {
    params_ = p;
    cw_current_ = p.cw_min;
  }
  int capacity() const { return capacity_; }

  int cw_current() const { return cw_current_; }

  void double_cw() { set_cw(std::min(2 * (cw_current_ + 1) - 1, params_.cw_max)); }
  void reset_cw() { set_cw(params_.cw_min); }

  int backoff_counter = 0;
  int retries = 0;

 private:
  void set_cw(int cw) {
    if (cw < params_.cw_min || cw > params_.cw_max) {
      std::fprintf(stderr, "edca: CW %d outside [%d, %d]\n", cw,
                   params_.cw_min, params_.cw_max);
      std::abort();
    }
    cw_current_ = cw;
  }

  AcLabel label_ = AcLabel::BE;
  AcParams params_ = default_ac_params(AcLabel::BE);
  int capacity_ = kDefaultQueueCapacity;
  int cw_current_ = 31;
  std::deque<Entry> fifo_;
};

}  // namespace relaysim
