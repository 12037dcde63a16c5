#pragma once

#include <compare>
#include <ostream>

namespace wlanho {

/// Traffic volume in bits per second.
class BitRate {
public:
  constexpr BitRate() = default;
  constexpr explicit BitRate(double bps)
    : m_bps(bps)
  {
  }

  static constexpr BitRate bps(double v) { return BitRate(v); }
  static constexpr BitRate kbps(double v) { return BitRate(v * 1e3); }
  static constexpr BitRate mbps(double v) { return BitRate(v * 1e6); }

  constexpr double value() const { return m_bps; }

  constexpr BitRate operator+(BitRate o) const { return BitRate(m_bps + o.m_bps); }
  constexpr BitRate operator-(BitRate o) const { return BitRate(m_bps - o.m_bps); }
  constexpr BitRate operator*(double k) const { return BitRate(m_bps * k); }
  constexpr BitRate& operator+=(BitRate o) { m_bps += o.m_bps; return *this; }

  constexpr auto operator<=>(const BitRate&) const = default;

private:
  double m_bps = 0.0;
};

inline std::ostream&
operator<<(std::ostream& os, BitRate r)
{
  return os << r.value() << "bps";
}

} // namespace wlanho
