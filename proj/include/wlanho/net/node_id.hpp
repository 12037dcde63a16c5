#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace wlanho {

enum class NodeKind : std::uint8_t { MN, AP, BS, AR, CN };

constexpr std::string_view
toString(NodeKind k)
{
  switch (k) {
    case NodeKind::MN: return "MN";
    case NodeKind::AP: return "AP";
    case NodeKind::BS: return "BS";
    case NodeKind::AR: return "AR";
    case NodeKind::CN: return "CN";
  }
  return "?";
}

/// Node identity. Indices are 1-based so names read "AP1", "MN15".
struct NodeId {
  NodeKind kind = NodeKind::MN;
  std::uint16_t index = 0;

  constexpr auto operator<=>(const NodeId&) const = default;

  std::string
  name() const
  {
    // a single BS is printed without an index, matching the CSV schema
    if (kind == NodeKind::BS && index == 1)
      return "BS";
    return std::string(toString(kind)) + std::to_string(index);
  }

  static constexpr NodeId mn(std::uint16_t i) { return {NodeKind::MN, i}; }
  static constexpr NodeId ap(std::uint16_t i) { return {NodeKind::AP, i}; }
  static constexpr NodeId bs(std::uint16_t i = 1) { return {NodeKind::BS, i}; }
  static constexpr NodeId ar(std::uint16_t i = 1) { return {NodeKind::AR, i}; }
  static constexpr NodeId cn(std::uint16_t i = 1) { return {NodeKind::CN, i}; }
};

/// Parses "AP2", "MN10", "BS", "CN1". Returns nullopt on malformed input.
inline std::optional<NodeId>
parseNodeId(std::string_view s)
{
  if (s == "BS")
    return NodeId::bs();
  if (s.size() < 3)
    return std::nullopt;
  NodeKind kind;
  auto prefix = s.substr(0, 2);
  if (prefix == "MN") kind = NodeKind::MN;
  else if (prefix == "AP") kind = NodeKind::AP;
  else if (prefix == "BS") kind = NodeKind::BS;
  else if (prefix == "AR") kind = NodeKind::AR;
  else if (prefix == "CN") kind = NodeKind::CN;
  else return std::nullopt;
  unsigned value = 0;
  for (char c : s.substr(2)) {
    if (c < '0' || c > '9')
      return std::nullopt;
    value = value * 10 + static_cast<unsigned>(c - '0');
    if (value > 0xffff)
      return std::nullopt;
  }
  if (value == 0)
    return std::nullopt;
  return NodeId{kind, static_cast<std::uint16_t>(value)};
}

inline std::ostream&
operator<<(std::ostream& os, const NodeId& id)
{
  return os << id.name();
}

} // namespace wlanho

template <>
struct std::hash<wlanho::NodeId> {
  std::size_t
  operator()(const wlanho::NodeId& id) const noexcept
  {
    return (static_cast<std::size_t>(id.kind) << 16) | id.index;
  }
};
