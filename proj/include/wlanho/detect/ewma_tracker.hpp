#pragma once

#include <cstdint>
#include <stdexcept>

namespace wlanho {

/**
 * Exponentially weighted moving average of the interface queue length
 * with an edge-triggered threshold.
 *
 *   E_t = a * Y_{t-1} + (1 - a) * E_{t-1}
 *
 * The first sample seeds E; no crossing is reported during the first
 * `warmup` samples. A crossing needs E to have been at or below the
 * threshold first, so a tracker seeded above it (a backlog carried over
 * from the previous AP) stays quiet until E has come down. It fires once
 * per upward crossing.
 */
class EwmaTracker {
public:
  EwmaTracker(double alpha, double threshold, std::uint32_t warmup = 3)
    : m_alpha(alpha)
    , m_threshold(threshold)
    , m_warmup(warmup)
  {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw std::invalid_argument("EWMA smoothing factor must be in (0, 1]");
  }

  double alpha() const { return m_alpha; }
  double threshold() const { return m_threshold; }
  double value() const { return m_value; }
  std::uint64_t samplesSeen() const { return m_samples; }
  bool warmedUp() const { return m_samples > m_warmup; }
  bool above() const { return m_value > m_threshold; }

  /// Folds in the queue length observed one period ago; returns the new E.
  double
  update(double yPrev)
  {
    if (!m_seeded) {
      m_value = yPrev;
      m_seeded = true;
    }
    else
      m_value = m_alpha * yPrev + (1.0 - m_alpha) * m_value;
    ++m_samples;
    if (m_value <= m_threshold)
      m_armed = true;
    return m_value;
  }

  /// Sets E explicitly instead of seeding from the first sample.
  void
  seed(double e0)
  {
    m_value = e0;
    m_seeded = true;
  }

  /// True exactly once per upward crossing of the threshold.
  bool
  crossed()
  {
    if (!warmedUp() || !m_armed || m_value <= m_threshold)
      return false;
    m_armed = false;
    return true;
  }

  /// Allows the next above-threshold check to fire again even without a
  /// dip below the threshold; used once a handoff attempt is abandoned.
  void rearm() { m_armed = true; }

  void
  reset()
  {
    m_value = 0.0;
    m_samples = 0;
    m_seeded = false;
    m_armed = false;
  }

private:
  double m_alpha;
  double m_threshold;
  std::uint32_t m_warmup;
  double m_value = 0.0;
  std::uint64_t m_samples = 0;
  bool m_seeded = false;
  bool m_armed = false;
};

} // namespace wlanho
