// Single-channel medium for the three-node line topology.
//
// Hop-based ranges: a frame is decodable within `comm_range` hops of the
// sender (default 1) and interferes within `interference_range` hops
// (default 2). Carrier sensing covers `comm_range`, which makes B and the
// AP mutually hidden: each corrupts the other's receptions at A without
// ever sensing it. There is no capture effect: any overlap at a receiver
// from within interference range corrupts the whole reception, and a node
// never receives while transmitting (half-duplex). Propagation delay is
// zero; frame timing is airtime only.
//
// Per-node carrier sense is physical (any active transmission within
// comm_range, or the node itself transmitting) OR virtual (NAV). The MAC
// updates NAV from overheard duration fields; busy/idle transitions are
// pushed to the per-node listener.
#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <vector>

#include "relaysim/event_queue.hpp"
#include "relaysim/packet.hpp"
#include "relaysim/phy.hpp"
#include "relaysim/types.hpp"

namespace relaysim {

class MediumListener {
 public:
  virtual ~MediumListener() = default;
  virtual void on_busy_changed(bool busy) = 0;
  // `clean` reception: no overlap from within interference range and the
  // receiver was not transmitting at any point of the frame's airtime.
  virtual void on_frame(const MacFrame& frame, bool clean) = 0;
};

class Medium {
 public:
  Medium(Scheduler& sched, const PhyParams& phy)
      : sched_(sched), phy_(phy) {}

  void attach(NodeId node, MediumListener* listener) {
    state(node).listener = listener;
  }

  int comm_range = 1;          // decode + carrier-sense range (hops)
  int interference_range = 2;  // corruption range (hops)

  struct Stats {
    std::uint64_t frames_sent = 0;
    std::uint64_t clean_receptions = 0;
    std::uint64_t corrupted_receptions = 0;
    std::uint64_t tx_while_busy = 0;     // must stay 0
    std::uint64_t half_duplex_ok_rx = 0; // must stay 0
  };
  Stats stats;

  // Starts a transmission; duration = airtime of the frame at `rate_bps`.
  // Reception begins at every node within comm_range; nodes within
  // interference range have any in-progress reception corrupted.
  void begin_transmission(NodeId src, const MacFrame& frame,
                          std::int64_t rate_bps) {
    NodeState& s = state(src);
    if (s.transmitting) {
      std::fprintf(stderr, "medium: %s already transmitting\n",
                   node_name(src).data());
      std::abort();
    }
    // Monitor: the MAC must never decide to transmit while it sensed busy.
    // Transmissions that started at this exact instant are invisible to
    // carrier sensing (slot-boundary decisions), so exclude them.
    if (busy_from_others_before_now(src)) ++stats.tx_while_busy;

    ++stats.frames_sent;
    SimTime start = sched_.now();
    SimTime end = start + phy_.airtime(frame.bytes, rate_bps);

    auto tx = std::make_shared<ActiveTx>();
    tx->src = src;
    tx->frame = frame;
    tx->start = start;
    tx->end = end;
    active_.push_back(tx);
    s.transmitting = true;
    s.last_tx_start = start;
    s.last_tx_end = end;
    // Half-duplex: starting to transmit corrupts anything being received.
    for (auto& rx : s.receptions) rx.corrupted = true;

    for (int n = 0; n < kNodeCount; ++n) {
      NodeId node = static_cast<NodeId>(n);
      if (node == src) continue;
      int dist = hop_distance(src, node);
      if (dist > interference_range) continue;
      NodeState& ns = state(node);
      // Any overlap corrupts in-progress receptions at this node.
      for (auto& rx : ns.receptions) rx.corrupted = true;
      if (dist <= comm_range) {
        bool corrupt_at_start =
            ns.transmitting || interfered_by_other(node, tx.get());
        ns.receptions.push_back(Reception{tx, corrupt_at_start});
      }
    }

    refresh_busy_states();
    sched_.schedule(end, "phy.tx_end", [this, tx] { end_transmission(tx); });
  }

  // Physical + virtual carrier sense.
  bool carrier_sense_busy(NodeId node) const {
    return phys_busy(node) || state(node).nav_until > sched_.now();
  }

  // Virtual carrier sense: NAV set from overheard duration fields.
  void set_nav(NodeId node, SimTime until) {
    NodeState& ns = state(node);
    if (until <= ns.nav_until) return;
    ns.nav_until = until;
    refresh_busy_states();
    sched_.schedule(until, "phy.nav_expiry", [this] { refresh_busy_states(); });
  }

  SimTime nav_until(NodeId node) const { return state(node).nav_until; }
  bool is_transmitting(NodeId node) const { return state(node).transmitting; }

 private:
  struct ActiveTx {
    NodeId src;
    MacFrame frame;
    SimTime start;
    SimTime end;
  };

  struct Reception {
    std::shared_ptr<ActiveTx> tx;
    bool corrupted;
  };

  struct NodeState {
    MediumListener* listener = nullptr;
    bool transmitting = false;
    SimTime nav_until = 0;
    bool busy = false;
    SimTime last_tx_start = -1;
    SimTime last_tx_end = -1;
    std::vector<Reception> receptions;
  };

  NodeState& state(NodeId n) { return nodes_[static_cast<int>(n)]; }
  const NodeState& state(NodeId n) const { return nodes_[static_cast<int>(n)]; }

  bool phys_busy(NodeId node) const {
    for (const auto& tx : active_) {
      if (hop_distance(tx->src, node) <= comm_range) return true;
    }
    return false;
  }

  bool busy_from_others_before_now(NodeId node) const {
    SimTime now = sched_.now();
    for (const auto& tx : active_) {
      if (tx->src == node) continue;
      if (tx->start < now && hop_distance(tx->src, node) <= comm_range)
        return true;
    }
    if (state(node).nav_until > now) return true;
    return false;
  }

  bool interfered_by_other(NodeId node, const ActiveTx* self) const {
    for (const auto& tx : active_) {
      if (tx.get() == self) continue;
      if (hop_distance(tx->src, node) <= interference_range) return true;
    }
    return false;
  }

  void end_transmission(const std::shared_ptr<ActiveTx>& tx) {
    state(tx->src).transmitting = false;
    for (std::size_t i = 0; i < active_.size(); ++i) {
      if (active_[i] == tx) {
        active_.erase(active_.begin() + i);
        break;
      }
    }
    // Resolve receptions of this frame.
    for (int n = 0; n < kNodeCount; ++n) {
      NodeState& ns = nodes_[n];
      for (std::size_t i = 0; i < ns.receptions.size();) {
        if (ns.receptions[i].tx != tx) {
          ++i;
          continue;
        }
        bool clean = !ns.receptions[i].corrupted && !ns.transmitting;
        ns.receptions.erase(ns.receptions.begin() + i);
        if (clean) {
          ++stats.clean_receptions;
          // Independent half-duplex check: the receiver's most recent
          // transmission must not overlap the reception window.
          if (ns.last_tx_end > tx->start && ns.last_tx_start < tx->end)
            ++stats.half_duplex_ok_rx;
        } else {
          ++stats.corrupted_receptions;
        }
        if (ns.listener)
          ns.listener->on_frame(tx->frame, clean);
      }
    }
    refresh_busy_states();
  }

  void refresh_busy_states() {
    for (int n = 0; n < kNodeCount; ++n) {
      NodeId node = static_cast<NodeId>(n);
      NodeState& ns = nodes_[n];
      bool busy = ns.transmitting || carrier_sense_busy(node);
      if (busy != ns.busy) {
        ns.busy = busy;
        if (ns.listener) ns.listener->on_busy_changed(busy);
      }
    }
  }

  Scheduler& sched_;
  PhyParams phy_;
  std::array<NodeState, kNodeCount> nodes_;
  std::vector<std::shared_ptr<ActiveTx>> active_;
};

}  // namespace relaysim
