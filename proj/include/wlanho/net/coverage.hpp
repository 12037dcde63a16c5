#pragma once

#include "wlanho/net/node_id.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace wlanho {

struct Position {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Position&) const = default;
};

inline double
distance(Position a, Position b)
{
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct RadioParams {
  double txPowerDbm = 20.0;
  double pathlossExponent = 3.0;
  double noiseFloorDbm = -90.0;

  bool operator==(const RadioParams&) const = default;
};

/// Static positions plus a log-distance SINR proxy.
class CoverageModel {
public:
  explicit CoverageModel(RadioParams params = {})
    : m_params(params)
  {
  }

  const RadioParams& params() const { return m_params; }

  void setPosition(NodeId n, Position p) { m_pos[n] = p; }
  void setRange(NodeId attachment, double rangeM) { m_range[attachment] = rangeM; }

  Position
  position(NodeId n) const
  {
    auto it = m_pos.find(n);
    if (it == m_pos.end())
      throw std::out_of_range("no position for " + n.name());
    return it->second;
  }

  double
  range(NodeId attachment) const
  {
    auto it = m_range.find(attachment);
    if (it == m_range.end())
      throw std::out_of_range("no range for " + attachment.name());
    return it->second;
  }

  /// Quality at a given distance; distances under the 1 m reference clamp to it.
  double
  qualityAtDistance(double meters) const
  {
    double d = std::max(meters, 1.0);
    return m_params.txPowerDbm - 10.0 * m_params.pathlossExponent * std::log10(d) -
           m_params.noiseFloorDbm;
  }

  /// SINR proxy in dB, or nullopt when the MN is out of range.
  std::optional<double>
  signalQuality(NodeId mn, NodeId attachment) const
  {
    double d = distance(position(mn), position(attachment));
    if (d > range(attachment))
      return std::nullopt;
    return qualityAtDistance(d);
  }

  bool
  inRange(NodeId mn, NodeId attachment) const
  {
    return signalQuality(mn, attachment).has_value();
  }

private:
  RadioParams m_params;
  std::unordered_map<NodeId, Position> m_pos;
  std::unordered_map<NodeId, double> m_range;
};

} // namespace wlanho
