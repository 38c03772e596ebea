// Per-station EDCA MAC.
//
// Four access-category queues, each with its own EDCAF running
// AIFS + slotted backoff. Contention rules:
//   * starting contention always draws a backoff counter uniform in
//     [0, cw_current] (post-backoff after success re-draws from cw_min);
//   * the countdown arms once the medium (physical carrier sense + NAV)
//     has been idle for AIFS = SIFS + AIFSN * slot; the counter then
//     decrements at each subsequent idle slot boundary and the frame is
//     transmitted at the boundary where it reaches zero (a counter of
//     zero transmits at AIFS expiry);
//   * a busy medium freezes the counter; the countdown resumes after the
//     medium has again been idle for a full AIFS.
// Slot-boundary decisions cannot see transmissions starting at the same
// instant, which is what produces external collisions between stations
// and, within one station, virtual collisions between EDCAFs: when
// several EDCAFs of a station reach zero in the same slot the
// highest-priority queue transmits and each loser reacts as after an
// external collision (retry count, CW doubling, new draw).
//
// Every DATA frame is preceded by RTS/CTS (threshold zero). A failed
// exchange (CTS or ACK timeout) doubles CW and increments the retry
// count; past the retry limit the head packet is discarded, CW and the
// count reset, and the drop is reported. Receivers answer RTS after SIFS
// only if their NAV is clear, answer correctly received DATA with an ACK
// after SIFS (unless the host withholds it), filter duplicate DATA by
// (station, sequence, retry), and set their NAV from the duration field
// of overheard frames.
#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>

#include "relaysim/channel.hpp"
#include "relaysim/edca.hpp"
#include "relaysim/event_queue.hpp"
#include "relaysim/packet.hpp"
#include "relaysim/phy.hpp"
#include "relaysim/rng.hpp"
#include "relaysim/types.hpp"

namespace relaysim {

enum class DropCause { MacQueue, RetryLimit, Shaper };

// Host hooks: packet delivery, drop accounting and the AP-side ACK
// withholding decision.
struct MacHost {
  // DATA frame received correctly and addressed to this station. Return
  // false to withhold the MAC ACK and discard the frame (punishment path).
  std::function<bool(NodeId self, const IpPacket&)> grant_ack;
  // Clean, non-duplicate DATA delivered up the stack.
  std::function<void(NodeId self, const IpPacket&)> deliver;
  // Head-of-line packet discarded after the retry limit.
  std::function<void(NodeId self, const IpPacket&, DropCause)> on_drop;
  // A data packet left this station with a MAC ACK received (per packet).
  std::function<void(NodeId self, const IpPacket&)> on_mac_acked;
};

class EdcaMac : public MediumListener {
 public:
  EdcaMac(Scheduler& sched, Medium& medium, NodeId self, PhyParams phy,
          std::uint64_t run_seed, MacHost host, int queue_capacity)
      : sched_(sched), medium_(medium), self_(self), phy_(phy),
        host_(std::move(host)), queue_capacity_(queue_capacity) {
    medium_.attach(self_, this);
    for (int i = 0; i < kAcCount; ++i) {
      AcLabel ac = static_cast<AcLabel>(i);
      queues_[i] = AcQueue(ac, default_ac_params(ac), queue_capacity_);
      char id[48];
      std::snprintf(id, sizeof id, "mac.%s.%s.backoff",
                    node_name(self_).data(), ac_name(ac).data());
      backoff_rng_[i] = RngStream(run_seed, id);
    }
  }

  void configure_queue(AcLabel ac, const AcParams& params) {
    queue(ac).set_params(params);
  }

  struct Stats {
    std::uint64_t data_delivered_up = 0;   // clean, non-dup DATA accepted
    std::uint64_t data_acked_tx = 0;       // own DATA confirmed by MAC ACK
    std::uint64_t queue_drops = 0;
    std::uint64_t retry_drops = 0;
    std::uint64_t internal_collisions = 0;
    std::uint64_t cts_timeouts = 0;
    std::uint64_t ack_timeouts = 0;
    int max_queue_len = 0;
    std::uint64_t cw_bound_violations = 0;  // must stay 0
  };
  Stats stats;

  // Occupancy observer, used by the queue-merge property checks.
  int queue_length(AcLabel ac) const {
    return queues_[static_cast<int>(ac)].length();
  }
  int max_seen_queue_len() const { return stats.max_queue_len; }

  // Entry point from the network layer. Drop-tail beyond the capacity.
  AcQueue::EnqueueResult enqueue(IpPacket packet, AcLabel ac, NodeId next_hop) {
    AcQueue& q = queue(ac);
    auto result = q.enqueue(std::move(packet), next_hop);
    if (result == AcQueue::EnqueueResult::Dropped) {
      ++stats.queue_drops;
    } else {
      stats.max_queue_len = std::max(stats.max_queue_len, q.length());
      EdcafState& e = edcaf(ac);
      if (!e.contending && !in_exchange_) start_contention(ac);
    }
    return result;
  }

  // -- MediumListener ------------------------------------------------------

  void on_busy_changed(bool busy) override {
    if (busy) {
      last_busy_start_ = sched_.now();
      for (int i = 0; i < kAcCount; ++i) suspend_countdown(static_cast<AcLabel>(i));
    } else {
      last_idle_start_ = sched_.now();
      if (!in_exchange_) rearm_all();
    }
  }

  void on_frame(const MacFrame& frame, bool clean) override {
    if (!clean) return;  // collisions carry no decodable header (no EIFS)
    if (frame.dst != self_) {
      // Overheard: virtual carrier sense from the duration field.
      if (frame.duration > 0)
        medium_.set_nav(self_, sched_.now() + frame.duration);
      return;
    }
    switch (frame.kind) {
      case FrameKind::Rts: handle_rts(frame); break;
      case FrameKind::Cts: handle_cts(frame); break;
      case FrameKind::Data: handle_data(frame); break;
      case FrameKind::Ack: handle_ack(frame); break;
    }
  }

 private:
  struct EdcafState {
    bool contending = false;     // has a drawn counter waiting to transmit
    bool counter_valid = false;
    EventId pending_event = 0;
    bool event_armed = false;
    bool ready = false;
  };

  AcQueue& queue(AcLabel ac) { return queues_[static_cast<int>(ac)]; }
  EdcafState& edcaf(AcLabel ac) { return edcafs_[static_cast<int>(ac)]; }

  SimTime aifs(AcLabel ac) { return phy_.aifs(queue(ac).params().aifsn); }

  // -- contention ----------------------------------------------------------

  void start_contention(AcLabel ac) {
    AcQueue& q = queue(ac);
    if (q.empty()) return;
    EdcafState& e = edcaf(ac);
    if (e.contending) return;
    e.contending = true;
    e.ready = false;
    q.backoff_counter =
        backoff_rng_[static_cast<int>(ac)].uniform_int(0, q.cw_current());
    e.counter_valid = true;
    check_cw_bounds(q);
    arm(ac);
  }

  // Schedules AIFS expiry / the next slot tick if the medium is idle.
  void arm(AcLabel ac) {
    EdcafState& e = edcaf(ac);
    if (!e.contending || e.event_armed || in_exchange_) return;
    if (medium_.carrier_sense_busy(self_)) return;  // armed on next idle
    SimTime idle_since = last_idle_start_;
    SimTime aifs_done = idle_since + aifs(ac);
    SimTime now = sched_.now();
    if (aifs_done < now) aifs_done = now;  // long-idle medium
    AcQueue& q = queue(ac);
    SimTime when =
        aifs_done + static_cast<SimTime>(q.backoff_counter) * phy_.slot;
    if (q.backoff_counter == 0) {
      e.event_armed = true;
      e.pending_event = sched_.schedule(when, "mac.txready", [this, ac] {
        edcaf(ac).event_armed = false;
        edcaf_ready(ac);
      });
    } else {
      // Tick one slot at a time so a busy medium can freeze the counter.
      SimTime first_tick = aifs_done + phy_.slot;
      e.event_armed = true;
      e.pending_event = sched_.schedule(first_tick, "mac.slot_tick",
                                        [this, ac] { slot_tick(ac); });
    }
  }

  void slot_tick(AcLabel ac) {
    EdcafState& e = edcaf(ac);
    e.event_armed = false;
    AcQueue& q = queue(ac);
    if (q.backoff_counter > 0) --q.backoff_counter;
    if (q.backoff_counter == 0) {
      edcaf_ready(ac);
    } else {
      e.event_armed = true;
      e.pending_event = sched_.schedule_in(phy_.slot, "mac.slot_tick",
                                           [this, ac] { slot_tick(ac); });
    }
  }

  void suspend_countdown(AcLabel ac) {
    EdcafState& e = edcaf(ac);
    if (e.event_armed) {
      sched_.cancel(e.pending_event);
      e.event_armed = false;
    }
  }

  void rearm_all() {
    for (int i = 0; i < kAcCount; ++i) arm(static_cast<AcLabel>(i));
  }

  // EDCAF reached backoff zero at this slot boundary. Collect all EDCAFs
  // that fire at the same instant, then resolve internal collisions once.
  void edcaf_ready(AcLabel ac) {
    edcaf(ac).ready = true;
    if (!resolve_scheduled_) {
      resolve_scheduled_ = true;
      sched_.schedule(sched_.now(), "mac.resolve", [this] { resolve_ready(); });
    }
  }

  void resolve_ready() {
    resolve_scheduled_ = false;
    if (in_exchange_) {
      std::fprintf(stderr, "mac %s: EDCAF fired during exchange\n",
                   node_name(self_).data());
      std::abort();
    }
    std::optional<AcLabel> winner;
    for (int i = 0; i < kAcCount; ++i) {
      AcLabel ac = static_cast<AcLabel>(i);
      if (!edcafs_[i].ready) continue;
      if (!winner) winner = ac;  // scanned in priority order
    }
    if (!winner) return;
    for (int i = 0; i < kAcCount; ++i) {
      AcLabel ac = static_cast<AcLabel>(i);
      if (!edcafs_[i].ready || ac == *winner) continue;
      // Virtual collision: loser behaves as after an external collision.
      ++stats.internal_collisions;
      edcafs_[i].ready = false;
      edcafs_[i].contending = false;
      exchange_failed(ac, /*internal=*/true);
    }
    edcaf(*winner).ready = false;
    edcaf(*winner).contending = false;
    begin_exchange(*winner);
  }

  // -- RTS/CTS/DATA/ACK exchange (sender side) ------------------------------

  void begin_exchange(AcLabel ac) {
    AcQueue& q = queue(ac);
    if (q.empty()) {
      std::fprintf(stderr, "mac %s: exchange with empty queue\n",
                   node_name(self_).data());
      std::abort();
    }
    in_exchange_ = true;
    current_ac_ = ac;
    const AcQueue::Entry& head = q.head();
    if (!head_tagged_) {
      current_mac_seq_ = next_mac_seq_++;
      head_tagged_ = true;
    }

    SimTime cts = phy_.airtime(kCtsBytes, phy_.control_rate_bps);
    SimTime ack = phy_.airtime(kMacAckBytes, phy_.control_rate_bps);
    SimTime data = phy_.airtime(frame_bytes(FrameKind::Data, head.packet.size),
                                phy_.data_rate_bps);

    MacFrame rts;
    rts.kind = FrameKind::Rts;
    rts.src = self_;
    rts.dst = head.next_hop;
    rts.bytes = kRtsBytes;
    rts.duration = 3 * phy_.sifs + cts + data + ack;
    rts.mac_seq = current_mac_seq_;
    rts.retry = q.retries > 0;

    medium_.begin_transmission(self_, rts, phy_.control_rate_bps);
    SimTime rts_end =
        sched_.now() + phy_.airtime(kRtsBytes, phy_.control_rate_bps);
    // Expected CTS: SIFS + CTS airtime after RTS end; one slot of grace.
    cts_timeout_ = sched_.schedule(rts_end + phy_.sifs + cts + phy_.slot,
                                   "mac.cts_timeout", [this] {
                                     ++stats.cts_timeouts;
                                     exchange_failed(current_ac_, false);
                                   });
    awaiting_cts_ = true;
  }

  void handle_cts(const MacFrame&) {
    if (!in_exchange_ || !awaiting_cts_) return;
    awaiting_cts_ = false;
    sched_.cancel(cts_timeout_);
    sched_.schedule_in(phy_.sifs, "mac.tx_data", [this] { send_data(); });
  }

  void send_data() {
    AcQueue& q = queue(current_ac_);
    const AcQueue::Entry& head = q.head();
    SimTime ack = phy_.airtime(kMacAckBytes, phy_.control_rate_bps);

    MacFrame data;
    data.kind = FrameKind::Data;
    data.src = self_;
    data.dst = head.next_hop;
    data.bytes = frame_bytes(FrameKind::Data, head.packet.size);
    data.duration = phy_.sifs + ack;
    data.mac_seq = current_mac_seq_;
    data.retry = q.retries > 0;
    data.payload = head.packet;

    medium_.begin_transmission(self_, data, phy_.data_rate_bps);
    SimTime data_end =
        sched_.now() + phy_.airtime(data.bytes, phy_.data_rate_bps);
    ack_timeout_ = sched_.schedule(data_end + phy_.sifs + ack + phy_.slot,
                                   "mac.ack_timeout", [this] {
                                     ++stats.ack_timeouts;
                                     exchange_failed(current_ac_, false);
                                   });
    awaiting_ack_ = true;
  }

  void handle_ack(const MacFrame&) {
    if (!in_exchange_ || !awaiting_ack_) return;
    awaiting_ack_ = false;
    sched_.cancel(ack_timeout_);
    AcQueue& q = queue(current_ac_);
    AcQueue::Entry entry = q.pop_head();
    ++stats.data_acked_tx;
    q.retries = 0;
    q.reset_cw();  // post-backoff baseline
    check_cw_bounds(q);
    head_tagged_ = false;
    finish_exchange();
    if (host_.on_mac_acked) host_.on_mac_acked(self_, entry.packet);
  }

  // Shared failure path: external (timeout) and internal collisions.
  void exchange_failed(AcLabel ac, bool internal) {
    if (!internal) {
      in_exchange_ = false;
      awaiting_cts_ = false;
      awaiting_ack_ = false;
    }
    AcQueue& q = queue(ac);
    q.retries += 1;
    if (q.retries > q.params().retry_limit) {
      AcQueue::Entry dropped = q.pop_head();
      ++stats.retry_drops;
      q.retries = 0;
      q.reset_cw();
      head_tagged_ = internal ? head_tagged_ : false;
      if (!internal) head_tagged_ = false;
      if (host_.on_drop)
        host_.on_drop(self_, dropped.packet, DropCause::RetryLimit);
    } else {
      q.double_cw();
    }
    check_cw_bounds(q);
    if (!internal) {
      finish_exchange_after_failure(ac);
    } else if (!q.empty()) {
      start_contention(ac);
    }
  }

  void finish_exchange_after_failure(AcLabel ac) {
    if (!queue(ac).empty()) start_contention(ac);
    // Other queues resume via the next busy->idle transition; if the
    // medium is already idle, re-arm now.
    if (!medium_.carrier_sense_busy(self_)) rearm_all();
  }

  void finish_exchange() {
    in_exchange_ = false;
    AcLabel ac = current_ac_;
    if (!queue(ac).empty()) start_contention(ac);
    if (!medium_.carrier_sense_busy(self_)) rearm_all();
  }

  // -- receiver side --------------------------------------------------------

  void handle_rts(const MacFrame& rts) {
    // Respond only when idle with a clear NAV; the SIFS response itself
    // performs no carrier sensing.
    if (in_exchange_ || responding_) return;
    if (medium_.nav_until(self_) > sched_.now()) return;
    responding_ = true;
    SimTime cts_air = phy_.airtime(kCtsBytes, phy_.control_rate_bps);
    MacFrame cts;
    cts.kind = FrameKind::Cts;
    cts.src = self_;
    cts.dst = rts.src;
    cts.bytes = kCtsBytes;
    cts.duration = rts.duration - phy_.sifs - cts_air;
    sched_.schedule_in(phy_.sifs, "mac.tx_cts", [this, cts] {
      medium_.begin_transmission(self_, cts, phy_.control_rate_bps);
      SimTime cts_end =
          sched_.now() + phy_.airtime(kCtsBytes, phy_.control_rate_bps);
      // Clear the response guard shortly after the expected DATA start.
      sched_.schedule(cts_end + phy_.sifs + phy_.slot, "mac.rx_guard_clear",
                      [this] { responding_ = false; });
    });
  }

  void handle_data(const MacFrame& data) {
    const IpPacket& packet = *data.payload;
    bool ack_granted =
        !host_.grant_ack || host_.grant_ack(self_, packet);
    if (!ack_granted) return;  // withheld: frame treated as not received

    MacFrame ack;
    ack.kind = FrameKind::Ack;
    ack.src = self_;
    ack.dst = data.src;
    ack.bytes = kMacAckBytes;
    ack.duration = 0;
    sched_.schedule_in(phy_.sifs, "mac.tx_ack", [this, ack] {
      medium_.begin_transmission(self_, ack, phy_.control_rate_bps);
    });

    // Duplicate filter: retransmission of the frame most recently accepted
    // from this station is acknowledged but not delivered again.
    auto& last = last_rx_seq_[static_cast<int>(data.src)];
    if (data.retry && last.valid && last.seq == data.mac_seq) return;
    last.valid = true;
    last.seq = data.mac_seq;
    ++stats.data_delivered_up;
    if (host_.deliver) host_.deliver(self_, packet);
  }

  void check_cw_bounds(const AcQueue& q) {
    if (q.cw_current() < q.params().cw_min || q.cw_current() > q.params().cw_max)
      ++stats.cw_bound_violations;
  }

  Scheduler& sched_;
  Medium& medium_;
  NodeId self_;
  PhyParams phy_;
  MacHost host_;
  int queue_capacity_;

  std::array<AcQueue, kAcCount> queues_;
  std::array<EdcafState, kAcCount> edcafs_;
  std::array<RngStream, kAcCount> backoff_rng_;

  bool in_exchange_ = false;
  bool awaiting_cts_ = false;
  bool awaiting_ack_ = false;
  bool responding_ = false;
  bool resolve_scheduled_ = false;
  bool head_tagged_ = false;
  AcLabel current_ac_ = AcLabel::BE;
  EventId cts_timeout_ = 0;
  EventId ack_timeout_ = 0;
  std::uint64_t next_mac_seq_ = 1;
  std::uint64_t current_mac_seq_ = 0;

  struct LastRx {
    bool valid = false;
    std::uint64_t seq = 0;
  };
  std::array<LastRx, kNodeCount> last_rx_seq_;

  SimTime last_idle_start_ = 0;
  SimTime last_busy_start_ = 0;
};

}  // namespace relaysim
