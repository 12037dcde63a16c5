#pragma once

#include "wlanho/net/bit_rate.hpp"
#include "wlanho/net/interface_queue.hpp"
#include "wlanho/net/packet.hpp"
#include "wlanho/sim/random.hpp"
#include "wlanho/sim/scheduler.hpp"

#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <map>
#include <random>

namespace wlanho {

struct MacParams {
  BitRate effectiveCapacity = BitRate::bps(4'200'000);
  /// fixed per-frame cost added to the serialization time
  Duration overheadPerFrame{0};
  /// a uniform random contention delay in [0, backoffMax] is added per frame
  Duration backoffMax{0};
  std::size_t queueCapacity = 100;
};

struct WirelessFrame {
  Packet pkt;
  NodeId tx;
  /// nullopt for broadcasts (DSProbe)
  std::optional<NodeId> rx;
};

enum class EnqueueResult { Queued, DroppedQueueFull };

/// Serialization time of `bytes` at `rate`, rounded to the clock resolution.
inline Duration
serializationTime(std::uint64_t bytes, BitRate rate)
{
  double us = static_cast<double>(bytes) * 8.0 / rate.value() * 1e6;
  return Duration(static_cast<Duration::rep>(std::llround(us)));
}

/**
 * Effective-capacity MAC: one server per channel. Control frames are
 * served ahead of data frames (never preempting a frame in service).
 * Data frames share one buffer; the server takes stations in
 * round robin (a stand-in for DCF's per-station fairness) and each
 * station's frames in arrival order, skipping frames whose transmitter or
 * receiver is not tuned to the channel. A frame stays admitted until its
 * transmission completes, so a station that retunes mid-frame gets the
 * frame back at the queue head.
 */
class WirelessChannel {
public:
  using Eligibility = std::function<bool(const WirelessFrame&)>;
  using DeliverFn = std::function<void(WirelessFrame&&)>;

  WirelessChannel(ChannelId id, NodeId owner, MacParams params, Scheduler& sched,
                  std::mt19937_64 rng)
    : m_id(id)
    , m_owner(owner)
    , m_params(params)
    , m_sched(sched)
    , m_rng(std::move(rng))
    , m_data(params.queueCapacity)
  {
  }

  WirelessChannel(const WirelessChannel&) = delete;
  WirelessChannel& operator=(const WirelessChannel&) = delete;

  void setEligibility(Eligibility fn) { m_eligible = std::move(fn); }
  void setDeliver(DeliverFn fn) { m_deliver = std::move(fn); }

  ChannelId id() const { return m_id; }
  NodeId owner() const { return m_owner; }
  const MacParams& params() const { return m_params; }

  /// Deterministic part of the per-frame service time.
  Duration
  baseServiceTime(std::uint32_t bytes) const
  {
    return serializationTime(bytes, m_params.effectiveCapacity) + m_params.overheadPerFrame;
  }

  /// Queues a data frame. When the buffer is full the frame pushes out the
  /// newest frame of the station holding the most buffered frames; if that
  /// is the arriving station itself, the arrival is dropped instead.
  EnqueueResult
  enqueueData(WirelessFrame f)
  {
    m_pushedOut.reset();
    if (m_data.full()) {
      std::map<NodeId, std::size_t> held;
      for (const auto& g : m_data)
        ++held[g.tx];
      NodeId longest = f.tx;
      std::size_t most = held[f.tx];
      for (const auto& [st, n] : held) {
        if (n > most) {
          most = n;
          longest = st;
        }
      }
      if (longest != f.tx) {
        m_pushedOut = m_data.takeLast([&](const WirelessFrame& g) { return g.tx == longest; });
        ++m_pushOuts;
      }
    }
    if (!m_data.push(std::move(f)))
      return EnqueueResult::DroppedQueueFull;
    kick();
    return EnqueueResult::Queued;
  }

  /// Frame discarded to make room by the last enqueueData call, if any.
  const std::optional<WirelessFrame>& pushedOut() const { return m_pushedOut; }

  void
  enqueueControl(WirelessFrame f)
  {
    m_control.push_back(std::move(f));
    kick();
  }

  /// Data frames queued by `station`, excluding one in service.
  std::size_t
  occupancy(NodeId station) const
  {
    return m_data.countIf([&](const WirelessFrame& f) { return f.tx == station; });
  }

  std::size_t dataLength() const { return m_data.size(); }
  std::uint64_t dropCount() const { return m_data.dropCount() + m_pushOuts; }
  bool busy() const { return m_current.has_value(); }
  const std::optional<WirelessFrame>& inService() const { return m_current; }
  const DropTailQueue<WirelessFrame>& dataQueue() const { return m_data; }
  const std::deque<WirelessFrame>& controlQueue() const { return m_control; }

  /// Removes every queued frame transmitted by `station`, preserving order.
  /// A frame of that station currently in service is aborted first.
  std::deque<WirelessFrame>
  extract(NodeId station)
  {
    abortIfInvolves(station);
    auto out = m_data.extractIf([&](const WirelessFrame& f) { return f.tx == station; });
    auto ctl = std::deque<WirelessFrame>{};
    for (auto it = m_control.begin(); it != m_control.end();) {
      if (it->tx == station) {
        ctl.push_back(std::move(*it));
        it = m_control.erase(it);
      }
      else {
        ++it;
      }
    }
    for (auto& c : ctl)
      out.push_front(std::move(c));
    kick();
    return out;
  }

  /// A station changed its tuning or association; re-evaluate the server.
  void
  onRetune(NodeId station)
  {
    abortIfInvolves(station);
    kick();
  }

  /// Starts service if idle and some frame is eligible.
  void
  kick()
  {
    if (m_current)
      return;
    std::optional<WirelessFrame> next;
    for (auto it = m_control.begin(); it != m_control.end(); ++it) {
      if (eligible(*it)) {
        next = std::move(*it);
        m_control.erase(it);
        break;
      }
    }
    if (!next)
      next = takeNextData();
    if (!next)
      return;
    Duration service = baseServiceTime(next->pkt.sizeBytes);
    if (m_params.backoffMax.count() > 0)
      service += Duration(uniformInt(m_rng, 0, m_params.backoffMax.count()));
    m_current = std::move(next);
    m_completion = m_sched.after(service, m_owner, [this] { complete(); });
  }

private:
  bool
  eligible(const WirelessFrame& f) const
  {
    return !m_eligible || m_eligible(f);
  }

  std::optional<WirelessFrame>
  takeNextData()
  {
    std::optional<NodeId> after;
    std::optional<NodeId> lowest;
    for (const auto& f : m_data) {
      if (!eligible(f))
        continue;
      if (!lowest || f.tx < *lowest)
        lowest = f.tx;
      if (m_lastData && *m_lastData < f.tx && (!after || f.tx < *after))
        after = f.tx;
    }
    std::optional<NodeId> pick = after ? after : lowest;
    if (!pick)
      return std::nullopt;
    m_lastData = pick;
    return m_data.takeFirst(
      [&](const WirelessFrame& f) { return f.tx == *pick && eligible(f); });
  }

  void
  abortIfInvolves(NodeId station)
  {
    if (!m_current)
      return;
    bool involved = m_current->tx == station || (m_current->rx && *m_current->rx == station);
    if (!involved)
      return;
    m_sched.cancel(m_completion);
    WirelessFrame f = std::move(*m_current);
    m_current.reset();
    if (f.pkt.kind == PacketKind::Control)
      m_control.push_front(std::move(f));
    else
      m_data.pushFront(std::move(f));
  }

  void
  complete()
  {
    WirelessFrame f = std::move(*m_current);
    m_current.reset();
    if (m_deliver)
      m_deliver(std::move(f));
    kick();
  }

  ChannelId m_id;
  NodeId m_owner;
  MacParams m_params;
  Scheduler& m_sched;
  std::mt19937_64 m_rng;
  DropTailQueue<WirelessFrame> m_data;
  std::deque<WirelessFrame> m_control;
  std::optional<WirelessFrame> m_current;
  std::optional<NodeId> m_lastData;
  std::optional<WirelessFrame> m_pushedOut;
  std::uint64_t m_pushOuts = 0;
  EventHandle m_completion;
  Eligibility m_eligible;
  DeliverFn m_deliver;
};

} // namespace wlanho
