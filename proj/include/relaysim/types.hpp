// Core identifiers shared across the simulator: nodes of the fixed
// three-station line topology, EDCA access categories, and flow ids.
#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace relaysim {

// Line topology: B -- A -- AP. Hop distance is |position difference|.
enum class NodeId : std::uint8_t { B = 0, A = 1, AP = 2 };

constexpr int kNodeCount = 3;

constexpr int position(NodeId n) { return static_cast<int>(n); }

constexpr int hop_distance(NodeId a, NodeId b) {
  int d = position(a) - position(b);
  return d < 0 ? -d : d;
}

constexpr std::string_view node_name(NodeId n) {
  switch (n) {
    case NodeId::B: return "B";
    case NodeId::A: return "A";
    case NodeId::AP: return "AP";
  }
  return "?";
}

// EDCA access categories in decreasing priority order.
enum class AcLabel : std::uint8_t { VO = 0, VI = 1, BE = 2, BK = 3 };

constexpr int kAcCount = 4;

constexpr std::string_view ac_name(AcLabel ac) {
  switch (ac) {
    case AcLabel::VO: return "VO";
    case AcLabel::VI: return "VI";
    case AcLabel::BE: return "BE";
    case AcLabel::BK: return "BK";
  }
  return "?";
}

// Lower enum value = higher priority; used for internal collision resolution.
constexpr bool higher_priority(AcLabel a, AcLabel b) {
  return static_cast<int>(a) < static_cast<int>(b);
}

// Flows: S/T are the data flows, Sp/Tp ("S'"/"T'") carry their TCP ACKs.
enum class FlowId : std::uint8_t { S = 0, T = 1, Sp = 2, Tp = 3 };

constexpr int kFlowCount = 4;

constexpr std::string_view flow_name(FlowId f) {
  switch (f) {
    case FlowId::S: return "S";
    case FlowId::T: return "T";
    case FlowId::Sp: return "S'";
    case FlowId::Tp: return "T'";
  }
  return "?";
}

// The reverse flow carrying a data flow's TCP ACKs (and vice versa).
constexpr FlowId paired_flow(FlowId f) {
  switch (f) {
    case FlowId::S: return FlowId::Sp;
    case FlowId::Sp: return FlowId::S;
    case FlowId::T: return FlowId::Tp;
    case FlowId::Tp: return FlowId::T;
  }
  return f;
}

// Role of a flow relative to the relay A: S and S' are A's own traffic,
// T and T' pass through A.
enum class FlowRole : std::uint8_t { Source, Transit };

constexpr FlowRole flow_role(FlowId f) {
  return (f == FlowId::S || f == FlowId::Sp) ? FlowRole::Source
                                             : FlowRole::Transit;
}

}  // namespace relaysim
