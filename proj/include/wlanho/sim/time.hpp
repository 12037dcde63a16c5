#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>

namespace wlanho {

using Duration = std::chrono::microseconds;

/// Simulated time, integer microseconds since simulation start.
class SimTime {
public:
  constexpr SimTime() = default;

  static constexpr SimTime
  fromMicros(std::int64_t us)
  {
    return SimTime(us);
  }

  static constexpr SimTime
  fromSeconds(double s)
  {
    return SimTime(static_cast<std::int64_t>(s * 1e6 + (s >= 0 ? 0.5 : -0.5)));
  }

  constexpr std::int64_t
  micros() const
  {
    return m_us;
  }

  constexpr double
  seconds() const
  {
    return static_cast<double>(m_us) / 1e6;
  }

  /// Whole second this instant falls into.
  constexpr std::int64_t
  wholeSeconds() const
  {
    return m_us / 1'000'000;
  }

  constexpr SimTime
  operator+(Duration d) const
  {
    return SimTime(m_us + d.count());
  }

  constexpr SimTime
  operator-(Duration d) const
  {
    return SimTime(m_us - d.count());
  }

  constexpr Duration
  operator-(SimTime other) const
  {
    return Duration(m_us - other.m_us);
  }

  constexpr SimTime&
  operator+=(Duration d)
  {
    m_us += d.count();
    return *this;
  }

  constexpr auto operator<=>(const SimTime&) const = default;

private:
  constexpr explicit SimTime(std::int64_t us)
    : m_us(us)
  {
  }

  std::int64_t m_us = 0;
};

inline std::string
toString(SimTime t)
{
  return std::to_string(t.micros()) + "us";
}

} // namespace wlanho
