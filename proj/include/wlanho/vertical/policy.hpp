#pragma once

#include "wlanho/net/bit_rate.hpp"

namespace wlanho {

/// An AP has room for a returning MN when its spare capacity covers the
/// MN's load plus the same margin used for horizontal candidates.
constexpr bool
shouldReturnToWlan(BitRate spare, BitRate mnLoad, BitRate delta)
{
  return spare >= mnLoad + delta;
}

/// BS network entry is admitted while the BS stays within its capacity.
constexpr bool
bsAdmits(BitRate bsLoad, BitRate mnLoad, BitRate bsCapacity)
{
  return bsLoad + mnLoad <= bsCapacity;
}

} // namespace wlanho
