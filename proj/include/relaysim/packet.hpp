// Network-layer packet and its MAC encapsulation.
#pragma once

#include <cstdint>
#include <optional>

#include "relaysim/phy.hpp"
#include "relaysim/time.hpp"
#include "relaysim/types.hpp"

namespace relaysim {

enum class PacketKind : std::uint8_t { TcpData, TcpAck, Cbr };

struct IpPacket {
  std::uint64_t id = 0;     // unique per created packet instance
  FlowId flow = FlowId::S;
  PacketKind kind = PacketKind::TcpData;
  int dscp = 0;             // 6-bit code; rewritten only at the relay
  int size = 0;             // bytes on the wire (headers abstracted)
  std::int64_t seq = 0;     // TCP byte sequence / CBR emission index
  std::int64_t ack_no = 0;  // cumulative ACK (TcpAck only)
  SimTime created_at = 0;
};

enum class FrameKind : std::uint8_t { Rts, Cts, Data, Ack };

constexpr std::string_view frame_name(FrameKind k) {
  switch (k) {
    case FrameKind::Rts: return "RTS";
    case FrameKind::Cts: return "CTS";
    case FrameKind::Data: return "DATA";
    case FrameKind::Ack: return "ACK";
  }
  return "?";
}

// MAC frame. DATA frames carry exactly one IP packet; control frames none.
// `duration` is the NAV value announced to overhearers: remaining time of
// the exchange after this frame ends.
struct MacFrame {
  FrameKind kind = FrameKind::Data;
  NodeId src = NodeId::B;
  NodeId dst = NodeId::B;
  int bytes = 0;
  SimTime duration = 0;
  std::uint64_t mac_seq = 0;  // per-station counter, for duplicate filtering
  bool retry = false;
  std::optional<IpPacket> payload;
};

constexpr int frame_bytes(FrameKind k, int payload_size = 0) {
  switch (k) {
    case FrameKind::Rts: return kRtsBytes;
    case FrameKind::Cts: return kCtsBytes;
    case FrameKind::Ack: return kMacAckBytes;
    case FrameKind::Data: return kMacDataOverhead + payload_size;
  }
  return 0;
}

}  // namespace relaysim
