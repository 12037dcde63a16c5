#pragma once

#include "wlanho/handoff/ap_agent.hpp"
#include "wlanho/net/node_id.hpp"
#include "wlanho/sim/time.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wlanho {

struct ThroughputRow {
  std::int64_t tSec = 0;
  std::string node;
  std::uint64_t bitsDelivered = 0;
  std::uint32_t mnCount = 0;

  bool operator==(const ThroughputRow&) const = default;
};

struct DelayRow {
  std::uint64_t packetId = 0;
  std::uint32_t flowId = 0;
  SimTime sentAt;
  SimTime receivedAt;

  Duration delay() const { return receivedAt - sentAt; }
};

enum class HandoffKind { Horizontal, VerticalUp, VerticalDown };

constexpr std::string_view
toString(HandoffKind k)
{
  switch (k) {
    case HandoffKind::Horizontal: return "horizontal";
    case HandoffKind::VerticalUp: return "vertical_up";
    case HandoffKind::VerticalDown: return "vertical_down";
  }
  return "?";
}

struct HandoffRow {
  NodeId mn;
  NodeId from;
  NodeId to;
  HandoffKind kind = HandoffKind::Horizontal;
  SimTime decidedAt;
  SimTime completedAt;
  /// when the MN stopped handing frames to `from`: disassociation for a
  /// horizontal move, completion for the make-before-break vertical ones
  SimTime releasedAt;
  /// first reception via `to` minus the later of the last reception via
  /// `from` and `releasedAt`
  Duration gap{0};
  /// false until a packet via `to` has been received after completion
  bool gapMeasured = false;
};

struct DropRow {
  std::int64_t tSec = 0;
  std::string node;
  std::uint64_t drops = 0;
};

enum class DetectorKind { Ewma, DropRate };

struct TriggerRecord {
  NodeId mn;
  SimTime at;
  DetectorKind detector;
};

/// One DSProbe excursion away from the home channel.
struct ScanProbeRecord {
  NodeId mn;
  std::uint64_t cycle = 0;
  std::size_t cycleLength = 0;
  ChannelId channel = 0;
  SimTime leftHome;
  SimTime onForeign;
  SimTime leftForeign;
  SimTime backHome;
  /// frames of this MN completed on its home channel during the excursion
  std::uint32_t framesSentDuringBlackout = 0;

  Duration dwell() const { return leftForeign - onForeign; }
  Duration blackout() const { return backHome - leftHome; }
};

struct FlowAccount {
  std::uint32_t flowId = 0;
  NodeId mn;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t inFlight = 0;
  std::uint64_t deliveredBits = 0;
};

/// Everything a run produces; CSV export writes the four row tables.
struct RunResults {
  std::vector<ThroughputRow> throughput;
  std::vector<DelayRow> delays;
  std::vector<HandoffRow> handoffs;
  std::vector<DropRow> drops;

  std::vector<TriggerRecord> triggers;
  std::vector<MoveRequestLogEntry> moveRequests;
  std::vector<ScanProbeRecord> scanProbes;
  std::map<std::uint32_t, FlowAccount> flows;
  /// data packets that reached the AR over an attachment its table did not list
  std::uint64_t routeOrderViolations = 0;
  /// MNs attached to the BS at the start of each second
  std::map<std::int64_t, std::vector<NodeId>> bsAttached;
  std::int64_t horizonSeconds = 0;
  std::uint64_t eventsProcessed = 0;
};

} // namespace wlanho
