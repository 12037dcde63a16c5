#pragma once

#include "wlanho/handoff/hc_set.hpp"
#include "wlanho/handoff/messages.hpp"
#include "wlanho/sim/scheduler.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

namespace wlanho {

struct ApHandoffParams {
  BitRate delta = BitRate::kbps(250);
  Duration tIgnore = std::chrono::milliseconds(1000);
  Duration loadResponseTimeout = std::chrono::milliseconds(50);
};

/// What an AP needs from the simulation around it.
class ApPort {
public:
  virtual ~ApPort() = default;
  virtual SimTime now() const = 0;
  virtual EventHandle armTimer(Duration delay, std::function<void()> fn) = 0;
  /// Over the distribution system.
  virtual void sendWired(NodeId to, MessageBody body) = 0;
  /// Over this AP's channel to a station.
  virtual void sendWireless(NodeId mn, MessageBody body) = 0;
  virtual BitRate currentLoad() = 0;
  virtual BitRate spareCapacity() = 0;
  /// SINR proxy of `mn` as heard by this AP, nullopt when out of range.
  virtual std::optional<double> hear(NodeId mn) const = 0;
};

enum class MoveDisposition { Processed, DroppedIgnoring, DroppedPending };

struct MoveRequestLogEntry {
  SimTime at;
  NodeId ap;
  NodeId mn;
  MoveDisposition disposition;
};

/**
 * AP side of the handoff protocol. A processed MoveRequest fans out one
 * LoadRequest per listed AP, collects LoadResponses until the deadline,
 * answers with the candidate set. Every MoveRequest arriving within
 * tIgnore of a processed one is dropped.
 */
class ApHandoffAgent {
public:
  ApHandoffAgent(NodeId self, ChannelId channel, ApHandoffParams params, ApPort& port)
    : m_self(self)
    , m_channel(channel)
    , m_params(params)
    , m_port(port)
  {
  }

  NodeId self() const { return m_self; }
  ChannelId channel() const { return m_channel; }
  SimTime ignoreUntil() const { return m_ignoreUntil; }
  bool hasPending() const { return m_pending.has_value(); }
  const std::vector<MoveRequestLogEntry>& moveLog() const { return m_log; }

  void
  onMoveRequest(NodeId mn, const MoveRequest& req)
  {
    SimTime now = m_port.now();
    if (now < m_ignoreUntil) {
      m_log.push_back({now, m_self, mn, MoveDisposition::DroppedIgnoring});
      return;
    }
    if (m_pending) {
      m_log.push_back({now, m_self, mn, MoveDisposition::DroppedPending});
      return;
    }
    m_log.push_back({now, m_self, mn, MoveDisposition::Processed});
    m_ignoreUntil = now + m_params.tIgnore;
    Pending p;
    p.mn = mn;
    p.mnLoad = req.mnLoad;
    for (const auto& e : req.apList) {
      if (e.ap == m_self)
        continue;
      if (std::find(p.asked.begin(), p.asked.end(), e.ap) != p.asked.end())
        continue;
      p.asked.push_back(e.ap);
    }
    m_pending = std::move(p);
    for (NodeId ap : m_pending->asked)
      m_port.sendWired(ap, LoadRequest{m_self});
    m_port.armTimer(m_params.loadResponseTimeout, [this] { onDeadline(); });
  }

  void
  onLoadRequest(NodeId from, const LoadRequest&)
  {
    m_port.sendWired(from, LoadResponse{m_port.currentLoad(), m_port.spareCapacity()});
  }

  void
  onLoadResponse(NodeId from, const LoadResponse& resp)
  {
    if (!m_pending)
      return;
    auto& p = *m_pending;
    if (std::find(p.asked.begin(), p.asked.end(), from) == p.asked.end())
      return;
    auto dup = std::find_if(p.responses.begin(), p.responses.end(),
                            [&](const ApLoad& r) { return r.ap == from; });
    if (dup != p.responses.end())
      return;
    p.responses.push_back({from, resp.load});
  }

  /// A DSProbe heard on this AP's channel.
  void
  onDsProbe(const DsProbe& probe)
  {
    auto sinr = m_port.hear(probe.mn);
    if (!sinr)
      return;
    DsProbeResponse resp{probe.mn, probe.assocAp, ApEntry{m_self, m_channel, *sinr}};
    m_port.sendWired(probe.assocAp, resp);
  }

  /// Relay of another AP's response to our associated MN.
  void
  onDsProbeResponse(const DsProbeResponse& resp)
  {
    m_port.sendWireless(resp.mn, resp);
  }

  void
  onLoadRequestFromMn(NodeId mn, const LoadRequestFromMn&)
  {
    m_port.sendWireless(mn, LoadResponse{m_port.currentLoad(), m_port.spareCapacity()});
  }

private:
  struct Pending {
    NodeId mn;
    BitRate mnLoad;
    std::vector<NodeId> asked;
    std::vector<ApLoad> responses;
  };

  void
  onDeadline()
  {
    if (!m_pending)
      return;
    Pending p = std::move(*m_pending);
    m_pending.reset();
    auto hc = computeHc(m_port.currentLoad(), p.mnLoad, p.responses, m_params.delta);
    m_port.sendWireless(p.mn, HandoffTargetMessage{std::move(hc)});
  }

  NodeId m_self;
  ChannelId m_channel;
  ApHandoffParams m_params;
  ApPort& m_port;
  SimTime m_ignoreUntil;
  std::optional<Pending> m_pending;
  std::vector<MoveRequestLogEntry> m_log;
};

} // namespace wlanho
