#pragma once

#include "wlanho/net/bit_rate.hpp"
#include "wlanho/net/packet.hpp"
#include "wlanho/sim/scheduler.hpp"

#include <cstdint>
#include <functional>

namespace wlanho {

struct CbrSpec {
  std::uint32_t flowId = 0;
  NodeId src;
  NodeId dst;
  std::uint32_t packetBytes = 1500;
  Duration interval = std::chrono::milliseconds(20);
  SimTime startAt;
};

inline BitRate
offeredRate(const CbrSpec& s)
{
  return BitRate(static_cast<double>(s.packetBytes) * 8.0 * 1e6 /
                 static_cast<double>(s.interval.count()));
}

/**
 * Constant-bit-rate source. Emits one packet per interval from startAt on;
 * where a packet goes is decided by the sink, so re-attaching the MN does
 * not touch the flow.
 */
class CbrFlow {
public:
  using Sink = std::function<void(Packet)>;
  using IdSource = std::function<std::uint64_t()>;

  CbrFlow(CbrSpec spec, Scheduler& sched, IdSource ids, Sink sink)
    : m_spec(spec)
    , m_sched(sched)
    , m_ids(std::move(ids))
    , m_sink(std::move(sink))
  {
  }

  CbrFlow(const CbrFlow&) = delete;
  CbrFlow& operator=(const CbrFlow&) = delete;

  const CbrSpec& spec() const { return m_spec; }
  std::uint64_t emitted() const { return m_emitted; }
  bool active() const { return m_timer.valid() && m_sched.isPending(m_timer); }

  void
  start()
  {
    SimTime first = std::max(m_spec.startAt, m_sched.now());
    m_timer = m_sched.schedule(first, m_spec.src, EventKind::Timer, [this] { emit(); });
  }

  void
  stop()
  {
    m_sched.cancel(m_timer);
  }

private:
  void
  emit()
  {
    Packet p;
    p.id = m_ids();
    p.flowId = m_spec.flowId;
    p.sizeBytes = m_spec.packetBytes;
    p.createdAt = m_sched.now();
    p.src = m_spec.src;
    p.dst = m_spec.dst;
    p.kind = PacketKind::Data;
    ++m_emitted;
    m_timer = m_sched.after(m_spec.interval, m_spec.src, [this] { emit(); });
    m_sink(std::move(p));
  }

  CbrSpec m_spec;
  Scheduler& m_sched;
  IdSource m_ids;
  Sink m_sink;
  EventHandle m_timer;
  std::uint64_t m_emitted = 0;
};

} // namespace wlanho
