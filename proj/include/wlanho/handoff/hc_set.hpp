#pragma once

#include "wlanho/net/bit_rate.hpp"
#include "wlanho/net/node_id.hpp"

#include <span>
#include <vector>

namespace wlanho {

struct ApLoad {
  NodeId ap;
  BitRate load;
};

/// Handoff candidates: every responding AP i with L_a - M - L_i > delta,
/// in response order. The associated AP must not appear in `responses`.
inline std::vector<NodeId>
computeHc(BitRate associatedLoad, BitRate mnLoad, std::span<const ApLoad> responses, BitRate delta)
{
  std::vector<NodeId> hc;
  for (const auto& r : responses)
    if (associatedLoad - mnLoad - r.load > delta)
      hc.push_back(r.ap);
  return hc;
}

} // namespace wlanho
