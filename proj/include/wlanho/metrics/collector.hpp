#pragma once

#include "wlanho/metrics/records.hpp"
#include "wlanho/net/packet.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

namespace wlanho {

/**
 * Accumulates per-second throughput, per-packet delay, drops and the
 * handoff log while a run executes. Throughput is attributed to the
 * attachment that carried the packet over the air.
 */
class MetricsCollector {
public:
  MetricsCollector(std::vector<NodeId> aps, std::optional<NodeId> bs, std::int64_t horizonSeconds)
    : m_aps(std::move(aps))
    , m_bs(bs)
    , m_horizon(horizonSeconds)
  {
    m_results.horizonSeconds = horizonSeconds;
  }

  RunResults& results() { return m_results; }
  const RunResults& results() const { return m_results; }

  void
  registerFlow(std::uint32_t flowId, NodeId mn)
  {
    auto& f = m_results.flows[flowId];
    f.flowId = flowId;
    f.mn = mn;
  }

  void
  onGenerated(const Packet& p)
  {
    ++m_results.flows[p.flowId].generated;
  }

  void
  onDelivered(const Packet& p, SimTime now)
  {
    m_results.delays.push_back(DelayRow{p.id, p.flowId, p.createdAt, now});
    auto& f = m_results.flows[p.flowId];
    ++f.delivered;
    f.deliveredBits += p.bits();
    if (p.via)
      m_bits[{now.wholeSeconds(), *p.via}] += p.bits();

    NodeId att = p.via.value_or(NodeId{});
    for (auto& row : m_results.handoffs) {
      if (row.gapMeasured || row.mn != p.src || row.to != att || now < row.completedAt)
        continue;
      auto last = lastRx(row.mn, row.from);
      SimTime ref = std::max(row.releasedAt, last.value_or(row.releasedAt));
      row.gap = std::max(now - ref, Duration(0));
      row.gapMeasured = true;
    }
    m_lastRx[p.src][att] = now;
  }

  void
  onDropped(NodeId queueOwner, const Packet& p, SimTime now)
  {
    ++m_results.flows[p.flowId].dropped;
    ++m_drops[{now.wholeSeconds(), queueOwner}];
  }

  void
  onTrigger(NodeId mn, SimTime at, DetectorKind kind)
  {
    m_results.triggers.push_back({mn, at, kind});
  }

  void
  onHandoff(HandoffRow row)
  {
    m_results.handoffs.push_back(row);
  }

  void
  onScanProbe(const ScanProbeRecord& r)
  {
    m_results.scanProbes.push_back(r);
  }

  void
  snapshotAssociations(std::int64_t tSec, std::map<NodeId, std::uint32_t> counts,
                       std::vector<NodeId> onBs)
  {
    m_counts[tSec] = std::move(counts);
    m_results.bsAttached[tSec] = std::move(onBs);
  }

  /// Builds the row tables. `inFlight` counts packets still queued or on a wire.
  RunResults&
  finalize(const std::map<std::uint32_t, std::uint64_t>& inFlight,
           const std::vector<MoveRequestLogEntry>& moveLog)
  {
    for (auto& [flow, n] : inFlight)
      m_results.flows[flow].inFlight = n;
    m_results.moveRequests = moveLog;
    std::sort(m_results.moveRequests.begin(), m_results.moveRequests.end(),
              [](const auto& a, const auto& b) {
                if (a.at != b.at)
                  return a.at < b.at;
                return a.ap < b.ap;
              });

    for (auto& row : m_results.handoffs) {
      if (row.gapMeasured)
        continue;
      auto last = lastRx(row.mn, row.from);
      SimTime ref = std::max(row.releasedAt, last.value_or(row.releasedAt));
      row.gap = std::max(row.completedAt - ref, Duration(0));
    }

    m_results.throughput.clear();
    m_results.drops.clear();
    std::vector<NodeId> cells = m_aps;
    if (m_bs)
      cells.push_back(*m_bs);
    for (std::int64_t t = 0; t < m_horizon; ++t) {
      std::uint64_t ess = 0;
      std::uint32_t essCount = 0;
      for (NodeId n : cells) {
        std::uint64_t bits = lookup(m_bits, {t, n});
        std::uint32_t count = 0;
        if (auto it = m_counts.find(t); it != m_counts.end())
          if (auto c = it->second.find(n); c != it->second.end())
            count = c->second;
        m_results.throughput.push_back({t, n.name(), bits, count});
        if (n.kind == NodeKind::AP) {
          ess += bits;
          essCount += count;
        }
        m_results.drops.push_back({t, n.name(), lookup(m_drops, {t, n})});
      }
      m_results.throughput.push_back({t, "ESS", ess, essCount});
    }
    return m_results;
  }

private:
  using Key = std::pair<std::int64_t, NodeId>;

  static std::uint64_t
  lookup(const std::map<Key, std::uint64_t>& m, const Key& k)
  {
    auto it = m.find(k);
    return it == m.end() ? 0 : it->second;
  }

  std::optional<SimTime>
  lastRx(NodeId mn, NodeId att) const
  {
    auto it = m_lastRx.find(mn);
    if (it == m_lastRx.end())
      return std::nullopt;
    auto jt = it->second.find(att);
    if (jt == it->second.end())
      return std::nullopt;
    return jt->second;
  }

  std::vector<NodeId> m_aps;
  std::optional<NodeId> m_bs;
  std::int64_t m_horizon;
  RunResults m_results;
  std::map<Key, std::uint64_t> m_bits;
  std::map<Key, std::uint64_t> m_drops;
  std::map<std::int64_t, std::map<NodeId, std::uint32_t>> m_counts;
  std::map<NodeId, std::map<NodeId, SimTime>> m_lastRx;
};

} // namespace wlanho
