#pragma once

#include "wlanho/net/bit_rate.hpp"
#include "wlanho/sim/time.hpp"

#include <cstdint>
#include <deque>
#include <utility>

namespace wlanho {

/// Sliding-window traffic meter: bits recorded in (now - window, now] / window.
class LoadMeter {
public:
  explicit LoadMeter(Duration window = std::chrono::seconds(1))
    : m_window(window)
  {
  }

  Duration window() const { return m_window; }

  void
  record(SimTime at, std::uint64_t bits)
  {
    m_samples.emplace_back(at, bits);
    m_sum += bits;
  }

  BitRate
  measure(SimTime now)
  {
    while (!m_samples.empty() && m_samples.front().first <= now - m_window) {
      m_sum -= m_samples.front().second;
      m_samples.pop_front();
    }
    double seconds = static_cast<double>(m_window.count()) / 1e6;
    return BitRate(static_cast<double>(m_sum) / seconds);
  }

  void
  reset()
  {
    m_samples.clear();
    m_sum = 0;
  }

private:
  Duration m_window;
  std::deque<std::pair<SimTime, std::uint64_t>> m_samples;
  std::uint64_t m_sum = 0;
};

} // namespace wlanho
