#pragma once

#include "wlanho/handoff/messages.hpp"
#include "wlanho/scan/channel_list.hpp"
#include "wlanho/sim/scheduler.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

namespace wlanho {

struct ScanParams {
  /// ScanTimer period T
  Duration period = std::chrono::milliseconds(100);
  /// time spent on the probed channel, t_1
  Duration dwell = std::chrono::milliseconds(5);
  /// radio retune cost, paid once leaving and once returning
  Duration switchTime = std::chrono::milliseconds(1);
  /// after the last probe, how long to wait for relayed responses
  Duration responseWait = std::chrono::milliseconds(20);

  /// Time away from the home channel for one probe.
  Duration blackout() const { return dwell + 2 * switchTime; }
};

/// Services the scanner needs from its MN.
class ScanPort {
public:
  virtual ~ScanPort() = default;
  virtual SimTime now() const = 0;
  virtual EventHandle armTimer(Duration delay, std::function<void()> fn) = 0;
  virtual bool cancelTimer(EventHandle h) = 0;
  /// Retune to `channel`, broadcast a DSProbe, stay `dwell`, retune back.
  virtual void probeChannel(ChannelId channel, Duration dwell) = 0;
};

/**
 * Interleaved scan: one foreign channel per ScanTimer expiry, with data
 * traffic flowing on the home channel in between. DSProbeResponses come
 * back over the distribution system and are folded into the AP list via
 * onProbeResponse().
 */
class InterleavedScanner {
public:
  using CompleteFn = std::function<void(const std::vector<ApEntry>&)>;

  InterleavedScanner(ScanParams params, ScanPort& port)
    : m_params(params)
    , m_port(port)
  {
  }

  const ScanParams& params() const { return m_params; }
  bool active() const { return m_active; }
  const std::vector<ChannelId>& channelList() const { return m_channels; }
  const std::vector<ApEntry>& apList() const { return m_apList; }
  std::size_t probesThisCycle() const { return m_probed; }

  std::optional<ChannelId>
  nextChannel() const
  {
    if (m_channels.empty())
      return std::nullopt;
    return m_channels[m_next];
  }

  void onComplete(CompleteFn fn) { m_onComplete = std::move(fn); }

  /// Starts a cycle around `home` (all channels when nullopt). Returns
  /// false, changing nothing, if a cycle is already running.
  bool
  start(std::optional<ChannelId> home)
  {
    if (m_active)
      return false;
    m_channels = home ? buildChannelList(*home) : allChannels();
    m_next = 0;
    m_probed = 0;
    m_apList.clear();
    m_active = true;
    if (m_channels.empty()) {
      m_timer = m_port.armTimer(Duration(0), [this] { finish(); });
      return true;
    }
    m_timer = m_port.armTimer(m_params.period, [this] { tick(); });
    return true;
  }

  /// ScanTimer expiry.
  void
  tick()
  {
    if (!m_active || m_probed >= m_channels.size())
      return;
    ChannelId ch = m_channels[m_next];
    std::erase_if(m_apList, [ch](const ApEntry& e) { return e.channel == ch; });
    m_port.probeChannel(ch, m_params.dwell);
    m_next = (m_next + 1) % m_channels.size();
    ++m_probed;
    Duration back = m_params.blackout();
    if (m_probed == m_channels.size())
      m_timer = m_port.armTimer(back + m_params.responseWait, [this] { finish(); });
    else
      m_timer = m_port.armTimer(back + m_params.period, [this] { tick(); });
  }

  /// A relayed DSProbeResponse; one entry per AP is kept.
  void
  onProbeResponse(const ApEntry& entry)
  {
    if (!m_active)
      return;
    auto it = std::find_if(m_apList.begin(), m_apList.end(),
                           [&](const ApEntry& e) { return e.ap == entry.ap; });
    if (it != m_apList.end())
      *it = entry;
    else
      m_apList.push_back(entry);
  }

  void
  cancel()
  {
    if (!m_active)
      return;
    m_port.cancelTimer(m_timer);
    m_active = false;
  }

private:
  void
  finish()
  {
    m_active = false;
    if (m_onComplete)
      m_onComplete(m_apList);
  }

  ScanParams m_params;
  ScanPort& m_port;
  std::vector<ChannelId> m_channels;
  std::size_t m_next = 0;
  std::size_t m_probed = 0;
  std::vector<ApEntry> m_apList;
  bool m_active = false;
  EventHandle m_timer;
  CompleteFn m_onComplete;
};

} // namespace wlanho
