#pragma once

#include "wlanho/net/node_id.hpp"

#include <cstdint>
#include <random>

namespace wlanho {

/**
 * Per-run randomness. Every consumer draws from its own std::mt19937_64
 * stream, seeded from (run seed, node kind, node index, purpose) through
 * std::seed_seq, so streams are independent of the order nodes are built in.
 */
class RngStreams {
public:
  explicit RngStreams(std::uint64_t seed)
    : m_seed(seed)
  {
  }

  std::uint64_t
  seed() const
  {
    return m_seed;
  }

  std::mt19937_64
  stream(NodeId node, std::uint32_t purpose = 0) const
  {
    std::seed_seq seq{static_cast<std::uint32_t>(m_seed),
                      static_cast<std::uint32_t>(m_seed >> 32),
                      static_cast<std::uint32_t>(node.kind),
                      static_cast<std::uint32_t>(node.index),
                      purpose};
    return std::mt19937_64(seq);
  }

private:
  std::uint64_t m_seed;
};

/// Uniform integer in [lo, hi]; std::uniform_int_distribution is not
/// specified bit-for-bit across standard libraries, this is.
inline std::int64_t
uniformInt(std::mt19937_64& g, std::int64_t lo, std::int64_t hi)
{
  if (hi <= lo)
    return lo;
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(g() % span);
}

} // namespace wlanho
