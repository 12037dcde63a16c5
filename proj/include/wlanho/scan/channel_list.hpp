#pragma once

#include "wlanho/handoff/messages.hpp"

#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace wlanho {

inline constexpr ChannelId kFirstChannel = 1;
inline constexpr ChannelId kLastChannel = 11;
/// 22 MHz channels on a 5 MHz raster overlap when |a - b| <= 4.
inline constexpr int kOverlapSpan = 4;

constexpr bool
channelsOverlap(ChannelId a, ChannelId b)
{
  return std::abs(a - b) <= kOverlapSpan;
}

constexpr bool
validChannel(ChannelId c)
{
  return c >= kFirstChannel && c <= kLastChannel;
}

/// Channels a scan visits from `home`: everything not overlapping it, ascending.
inline std::vector<ChannelId>
buildChannelList(ChannelId home)
{
  if (!validChannel(home))
    throw std::out_of_range("channel must be in 1..11");
  std::vector<ChannelId> out;
  for (ChannelId c = kFirstChannel; c <= kLastChannel; ++c)
    if (!channelsOverlap(c, home))
      out.push_back(c);
  return out;
}

/// Scan list for an MN with no home channel (attached to the WMAN).
inline std::vector<ChannelId>
allChannels()
{
  std::vector<ChannelId> out;
  for (ChannelId c = kFirstChannel; c <= kLastChannel; ++c)
    out.push_back(c);
  return out;
}

} // namespace wlanho
