#pragma once

#include "wlanho/net/bit_rate.hpp"
#include "wlanho/net/node_id.hpp"
#include "wlanho/sim/time.hpp"

#include <string_view>
#include <variant>
#include <vector>

namespace wlanho {

/// 802.11 channel number 1..11. Zero denotes the WMAN air interface.
using ChannelId = int;
inline constexpr ChannelId kWmanChannel = 0;

/// One AP discovered by a scan.
struct ApEntry {
  NodeId ap;
  ChannelId channel = 0;
  double sinrDb = 0.0;

  bool operator==(const ApEntry&) const = default;
};

struct MoveRequest {
  std::vector<ApEntry> apList;
  BitRate mnLoad;
};

struct LoadRequest {
  /// AP that is collecting responses on behalf of an MN
  NodeId requester;
};

struct LoadResponse {
  BitRate load;
  BitRate spare;
};

/// Carries the HandoffCandidateList.
struct HandoffTargetMessage {
  std::vector<NodeId> hcList;
};

struct DsProbe {
  NodeId mn;
  /// associated AP, or the BS while the MN is attached to the WMAN
  NodeId assocAp;
};

struct DsProbeResponse {
  NodeId mn;
  NodeId relay;
  ApEntry entry;
};

struct LoadRequestFromMn {
  BitRate mnLoad;
};

struct RouteUpdate {
  NodeId mn;
  NodeId newAttachment;
  /// increments with every attachment change of the MN
  std::uint32_t epoch = 0;
};

struct AssocRequest {};

struct AssocResponse {
  bool accepted = true;
};

using MessageBody = std::variant<MoveRequest, LoadRequest, LoadResponse, HandoffTargetMessage,
                                 DsProbe, DsProbeResponse, LoadRequestFromMn, RouteUpdate,
                                 AssocRequest, AssocResponse>;

struct ControlMessage {
  NodeId src;
  NodeId dst;
  SimTime createdAt;
  MessageBody body;
};

inline std::string_view
messageName(const MessageBody& body)
{
  static constexpr std::string_view names[] = {
    "MoveRequest", "LoadRequest", "LoadResponse", "HandoffTargetMessage", "DSProbe",
    "DSProbeResponse", "LoadRequestFromMN", "RouteUpdate", "AssocRequest", "AssocResponse"};
  return names[body.index()];
}

} // namespace wlanho
