#pragma once

#include "wlanho/sim/time.hpp"

#include <cstdint>
#include <deque>

namespace wlanho {

enum class SendOutcome : std::uint8_t { Sent, Dropped };

/**
 * Windowed packet-drop rate: drops / (sent + dropped) over the trailing
 * window. An empty window has rate 0. Edge-triggered like EwmaTracker:
 * reports once when the rate rises strictly above the threshold.
 */
class DropRateTracker {
public:
  DropRateTracker(Duration window, double threshold)
    : m_window(window)
    , m_threshold(threshold)
  {
  }

  Duration window() const { return m_window; }
  double threshold() const { return m_threshold; }
  std::uint64_t dropsInWindow() const { return m_drops; }
  std::uint64_t attemptsInWindow() const { return m_events.size(); }

  double
  rate() const
  {
    if (m_events.empty())
      return 0.0;
    return static_cast<double>(m_drops) / static_cast<double>(m_events.size());
  }

  /// Records one enqueue attempt and returns the refreshed rate.
  double
  update(SimTime now, SendOutcome outcome)
  {
    advance(now);
    m_events.push_back({now, outcome});
    if (outcome == SendOutcome::Dropped)
      ++m_drops;
    return evaluate();
  }

  /// A frame counted as sent was discarded later, while still buffered.
  double
  lateDrop(SimTime now)
  {
    advance(now);
    for (auto it = m_events.rbegin(); it != m_events.rend(); ++it) {
      if (it->outcome == SendOutcome::Sent) {
        it->outcome = SendOutcome::Dropped;
        ++m_drops;
        break;
      }
    }
    return evaluate();
  }

  /// Slides the window forward without recording anything.
  void
  advance(SimTime now)
  {
    while (!m_events.empty() && m_events.front().at <= now - m_window) {
      if (m_events.front().outcome == SendOutcome::Dropped)
        --m_drops;
      m_events.pop_front();
    }
  }

  /// True once per rise above the threshold.
  bool
  crossed()
  {
    if (!m_pending)
      return false;
    m_pending = false;
    m_armed = false;
    return true;
  }

  void
  rearm()
  {
    m_armed = true;
    if (rate() > m_threshold)
      m_pending = true;
  }

  void
  reset()
  {
    m_events.clear();
    m_drops = 0;
    m_armed = true;
    m_pending = false;
  }

private:
  double
  evaluate()
  {
    double r = rate();
    if (r <= m_threshold)
      m_armed = true;
    else if (m_armed)
      m_pending = true;
    return r;
  }

  struct Event {
    SimTime at;
    SendOutcome outcome;
  };

  Duration m_window;
  double m_threshold;
  std::deque<Event> m_events;
  std::uint64_t m_drops = 0;
  bool m_armed = true;
  bool m_pending = false;
};

} // namespace wlanho
