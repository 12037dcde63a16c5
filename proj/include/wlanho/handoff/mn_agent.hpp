#pragma once

#include "wlanho/handoff/messages.hpp"
#include "wlanho/scan/scanner.hpp"
#include "wlanho/vertical/policy.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace wlanho {

enum class MnPhase {
  Idle,
  Scanning,
  Requesting,
  AwaitingTarget,
  HandingOff,
  VerticalEntry,
  OnWman,
  Returning,
};

constexpr std::string_view
toString(MnPhase p)
{
  switch (p) {
    case MnPhase::Idle: return "Idle";
    case MnPhase::Scanning: return "Scanning";
    case MnPhase::Requesting: return "Requesting";
    case MnPhase::AwaitingTarget: return "AwaitingTarget";
    case MnPhase::HandingOff: return "HandingOff";
    case MnPhase::VerticalEntry: return "VerticalEntry";
    case MnPhase::OnWman: return "OnWman";
    case MnPhase::Returning: return "Returning";
  }
  return "?";
}

struct MnHandoffParams {
  Duration tRepeat = std::chrono::milliseconds(200);
  std::uint32_t nRepeat = 4;
  /// wait after an empty candidate list with nowhere else to go
  Duration retryBackoff = std::chrono::milliseconds(1000);
  BitRate delta = BitRate::kbps(250);
  bool wmanEnabled = false;
  Duration returnScanPeriod = std::chrono::seconds(5);
  /// how long a returning MN waits for the AP's LoadResponse
  Duration loadResponseTimeout = std::chrono::milliseconds(50);
};

/// Mechanics the MN protocol logic drives; implemented by the simulation.
class MnPort : public ScanPort {
public:
  /// Control frame to the associated AP (or, while on the WMAN, via the BS).
  virtual void sendToServing(MessageBody body) = 0;
  /// Control frame to an AP the MN is not associated with, on its channel.
  virtual void sendToForeignAp(const ApEntry& ap, MessageBody body) = 0;
  virtual BitRate ownLoad() = 0;
  /// Channel of the associated AP, nullopt while not associated.
  virtual std::optional<ChannelId> homeChannel() const = 0;
  virtual void startBsDiscovery() = 0;
  /// Each execute* reports back through the matching on*Done().
  virtual void executeHorizontal(const ApEntry& target) = 0;
  virtual void executeVertical(NodeId bs) = 0;
  virtual void executeReturn(const ApEntry& ap) = 0;
  virtual void rearmDetectors() = 0;
  virtual void resetDetectors() = 0;
};

/**
 * MN side: degradation -> interleaved scan -> MoveRequest (retried every
 * tRepeat, at most nRepeat sends) -> HandoffTargetMessage -> horizontal
 * handoff, WMAN entry, or back off. While on the WMAN it periodically
 * scans for an AP with enough spare capacity to return to.
 */
class MnHandoffAgent {
public:
  MnHandoffAgent(NodeId self, MnHandoffParams params, ScanParams scan, MnPort& port)
    : m_self(self)
    , m_params(params)
    , m_port(port)
    , m_scanner(scan, port)
  {
    m_scanner.onComplete([this](const std::vector<ApEntry>& list) { onScanComplete(list); });
  }

  MnHandoffAgent(const MnHandoffAgent&) = delete;
  MnHandoffAgent& operator=(const MnHandoffAgent&) = delete;

  NodeId self() const { return m_self; }
  MnPhase phase() const { return m_phase; }
  std::uint32_t retriesSent() const { return m_retriesSent; }
  const std::vector<ApEntry>& apList() const { return m_apList; }
  std::optional<NodeId> knownBs() const { return m_knownBs; }
  InterleavedScanner& scanner() { return m_scanner; }
  const InterleavedScanner& scanner() const { return m_scanner; }

  /// Degradation detector fired.
  void
  onDegradation()
  {
    if (m_phase != MnPhase::Idle || m_port.now() < m_backoffUntil)
      return;
    if (!m_scanner.start(m_port.homeChannel()))
      return;
    m_phase = MnPhase::Scanning;
  }

  /// Queue EWMA crossed the WMAN activation limit.
  void
  onWmanActivation()
  {
    if (!m_params.wmanEnabled || m_knownBs || m_discovering)
      return;
    m_discovering = true;
    m_port.startBsDiscovery();
  }

  void
  onBsDiscovered(std::optional<NodeId> bs)
  {
    m_discovering = false;
    if (bs)
      m_knownBs = bs;
  }

  void
  onProbeResponse(const ApEntry& entry)
  {
    m_scanner.onProbeResponse(entry);
  }

  void
  onHandoffTarget(const HandoffTargetMessage& msg)
  {
    if (m_phase != MnPhase::Requesting && m_phase != MnPhase::AwaitingTarget)
      return;
    m_port.cancelTimer(m_retryTimer);
    if (auto target = pickTarget(msg.hcList)) {
      m_phase = MnPhase::HandingOff;
      m_port.executeHorizontal(*target);
      return;
    }
    if (m_params.wmanEnabled && m_knownBs) {
      m_phase = MnPhase::VerticalEntry;
      m_port.executeVertical(*m_knownBs);
      return;
    }
    backOff();
  }

  void
  onHorizontalDone(bool ok)
  {
    if (m_phase != MnPhase::HandingOff)
      return;
    if (ok) {
      m_phase = MnPhase::Idle;
      m_port.resetDetectors();
    }
    else {
      backOff();
    }
  }

  void
  onVerticalDone(bool ok)
  {
    if (m_phase != MnPhase::VerticalEntry)
      return;
    if (!ok) {
      backOff();
      return;
    }
    m_phase = MnPhase::OnWman;
    armReturnScan();
  }

  /// LoadResponse to our LoadRequestFromMN.
  void
  onLoadResponse(NodeId from, const LoadResponse& resp)
  {
    if (m_phase != MnPhase::Returning || !m_returnCandidate || m_returnCandidate->ap != from ||
        !m_awaitingLoad)
      return;
    m_awaitingLoad = false;
    m_port.cancelTimer(m_returnTimer);
    if (shouldReturnToWlan(resp.spare, m_port.ownLoad(), m_params.delta)) {
      m_port.executeReturn(*m_returnCandidate);
      return;
    }
    m_returnCandidate.reset();
    m_phase = MnPhase::OnWman;
    armReturnScan();
  }

  void
  onReturnDone(bool ok)
  {
    if (m_phase != MnPhase::Returning)
      return;
    m_returnCandidate.reset();
    if (ok) {
      m_phase = MnPhase::Idle;
      m_port.resetDetectors();
      return;
    }
    m_phase = MnPhase::OnWman;
    armReturnScan();
  }

private:
  std::optional<ApEntry>
  pickTarget(const std::vector<NodeId>& hc) const
  {
    std::optional<ApEntry> best;
    for (NodeId id : hc) {
      auto it = std::find_if(m_apList.begin(), m_apList.end(),
                             [&](const ApEntry& e) { return e.ap == id; });
      if (it == m_apList.end())
        continue;
      if (!best || it->sinrDb > best->sinrDb ||
          (it->sinrDb == best->sinrDb && it->ap.index < best->ap.index))
        best = *it;
    }
    return best;
  }

  void
  onScanComplete(const std::vector<ApEntry>& list)
  {
    if (m_phase == MnPhase::Scanning) {
      m_apList = list;
      m_phase = MnPhase::Requesting;
      m_retriesSent = 0;
      sendMoveRequest();
      return;
    }
    if (m_phase == MnPhase::Returning) {
      if (list.empty()) {
        m_phase = MnPhase::OnWman;
        armReturnScan();
        return;
      }
      auto best = *std::max_element(list.begin(), list.end(), [](const auto& a, const auto& b) {
        if (a.sinrDb != b.sinrDb)
          return a.sinrDb < b.sinrDb;
        return a.ap.index > b.ap.index;
      });
      m_returnCandidate = best;
      m_awaitingLoad = true;
      m_port.sendToForeignAp(best, LoadRequestFromMn{m_port.ownLoad()});
      m_returnTimer = m_port.armTimer(m_params.loadResponseTimeout, [this] {
        if (m_phase != MnPhase::Returning || !m_awaitingLoad)
          return;
        m_awaitingLoad = false;
        m_returnCandidate.reset();
        m_phase = MnPhase::OnWman;
        armReturnScan();
      });
    }
  }

  void
  sendMoveRequest()
  {
    ++m_retriesSent;
    m_port.sendToServing(MoveRequest{m_apList, m_port.ownLoad()});
    if (m_retriesSent >= m_params.nRepeat)
      m_phase = MnPhase::AwaitingTarget;
    m_retryTimer = m_port.armTimer(m_params.tRepeat, [this] { onRetryTimer(); });
  }

  void
  onRetryTimer()
  {
    if (m_phase == MnPhase::Requesting) {
      sendMoveRequest();
      return;
    }
    if (m_phase == MnPhase::AwaitingTarget) {
      m_phase = MnPhase::Idle;
      m_port.rearmDetectors();
    }
  }

  void
  backOff()
  {
    m_phase = MnPhase::Idle;
    m_backoffUntil = m_port.now() + m_params.retryBackoff;
    m_port.armTimer(m_params.retryBackoff, [this] { m_port.rearmDetectors(); });
  }

  void
  armReturnScan()
  {
    m_returnTimer = m_port.armTimer(m_params.returnScanPeriod, [this] {
      if (m_phase != MnPhase::OnWman)
        return;
      if (m_scanner.start(std::nullopt))
        m_phase = MnPhase::Returning;
      else
        armReturnScan();
    });
  }

  NodeId m_self;
  MnHandoffParams m_params;
  MnPort& m_port;
  InterleavedScanner m_scanner;
  MnPhase m_phase = MnPhase::Idle;
  std::uint32_t m_retriesSent = 0;
  EventHandle m_retryTimer;
  EventHandle m_returnTimer;
  SimTime m_backoffUntil;
  std::vector<ApEntry> m_apList;
  std::optional<NodeId> m_knownBs;
  bool m_discovering = false;
  std::optional<ApEntry> m_returnCandidate;
  bool m_awaitingLoad = false;
};

} // namespace wlanho
