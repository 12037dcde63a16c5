#pragma once

#include "wlanho/handoff/messages.hpp"
#include "wlanho/net/node_id.hpp"
#include "wlanho/sim/time.hpp"

#include <cstdint>
#include <optional>

namespace wlanho {

enum class PacketKind : std::uint8_t { Data, Control };

struct Packet {
  std::uint64_t id = 0;
  std::uint32_t flowId = 0;
  std::uint32_t sizeBytes = 0;
  SimTime createdAt;
  NodeId src;
  NodeId dst;
  PacketKind kind = PacketKind::Data;
  /// AP or BS that carried the packet over the air; set on wireless delivery.
  std::optional<NodeId> via;
  /// count of RouteUpdates the source had issued when the packet was queued
  std::uint32_t routeEpoch = 0;
  std::optional<ControlMessage> control;

  std::uint64_t bits() const { return std::uint64_t{sizeBytes} * 8; }
};

inline Packet
makeControlPacket(std::uint64_t id, std::uint32_t sizeBytes, ControlMessage msg)
{
  Packet p;
  p.id = id;
  p.sizeBytes = sizeBytes;
  p.createdAt = msg.createdAt;
  p.src = msg.src;
  p.dst = msg.dst;
  p.kind = PacketKind::Control;
  p.control = std::move(msg);
  return p;
}

} // namespace wlanho
