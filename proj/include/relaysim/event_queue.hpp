// Deterministic discrete-event core.
//
// Events are dispatched in strict (time, seq) order where seq is the global
// insertion counter, so ties at one timestamp resolve FIFO. Scheduling in
// the past is a programming error and aborts the run. The scheduler keeps
// an FNV-1a hash of every dispatched (time, seq, label) triple; two runs of
// the same configuration and seed must produce identical hashes (and, with
// trace recording on, identical trace contents).
#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "relaysim/hash.hpp"
#include "relaysim/time.hpp"

namespace relaysim {

using EventId = std::uint64_t;

struct TraceEntry {
  SimTime time;
  EventId seq;
  const char* label;
};

class Scheduler {
 public:
  EventId schedule(SimTime t, const char* label, std::function<void()> fn) {
    if (t < now_) {
      std::fprintf(stderr, "scheduler: event '%s' at t=%lld before clock %lld\n",
                   label, static_cast<long long>(t),
                   static_cast<long long>(now_));
      std::abort();
    }
    EventId id = next_seq_++;
    queue_.push(Item{t, id, label, std::move(fn)});
    return id;
  }

  EventId schedule_in(SimTime dt, const char* label, std::function<void()> fn) {
    return schedule(now_ + dt, label, std::move(fn));
  }

  // Cancelled events are skipped at dispatch time.
  void cancel(EventId id) {
    if (id >= cancelled_.size()) cancelled_.resize(id + 1, false);
    cancelled_[id] = true;
  }

  // Dispatches every pending event with time <= t_end, then advances the
  // clock to t_end. Returns the number of events dispatched.
  std::uint64_t run_until(SimTime t_end) {
    std::uint64_t dispatched = 0;
    while (!queue_.empty() && queue_.top().time <= t_end) {
      Item item = queue_.top();
      queue_.pop();
      if (item.seq < cancelled_.size() && cancelled_[item.seq]) continue;
      now_ = item.time;
      hash_.mix_u64(static_cast<std::uint64_t>(item.time));
      hash_.mix_u64(item.seq);
      hash_.mix(item.label);
      if (recording_) trace_.push_back({item.time, item.seq, item.label});
      ++dispatched;
      item.fn();
    }
    now_ = t_end;
    return dispatched;
  }

  SimTime now() const { return now_; }
  bool empty() const { return queue_.empty(); }

  std::uint64_t trace_hash() const { return hash_.value(); }
  void set_trace_recording(bool on) { recording_ = on; }
  const std::vector<TraceEntry>& trace() const { return trace_; }

 private:
  struct Item {
    SimTime time;
    EventId seq;
    const char* label;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Item& a, const Item& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Item, std::vector<Item>, Later> queue_;
  std::vector<bool> cancelled_;
  EventId next_seq_ = 0;
  SimTime now_ = 0;
  Fnv1a hash_;
  bool recording_ = false;
  std::vector<TraceEntry> trace_;
};

}  // namespace relaysim
