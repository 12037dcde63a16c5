#pragma once

#include "wlanho/net/node_id.hpp"
#include "wlanho/sim/time.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace wlanho {

class SchedulingInPast : public std::logic_error {
public:
  SchedulingInPast(SimTime requested, SimTime now)
    : std::logic_error("event scheduled at " + toString(requested) +
                       " before current clock " + toString(now))
  {
  }
};

enum class EventKind : std::uint8_t { Timer, PacketArrival, MessageDelivery };

struct EventHandle {
  std::uint64_t seq = 0;

  bool valid() const { return seq != 0; }
  auto operator<=>(const EventHandle&) const = default;
};

struct SimStats {
  std::uint64_t scheduled = 0;
  std::uint64_t processed = 0;
  std::uint64_t cancelled = 0;
  std::uint64_t pending = 0;
};

/// Record handed to the optional trace hook for every processed event.
struct TraceEntry {
  SimTime at;
  std::uint64_t seq;
  NodeId target;
  EventKind kind;
};

/**
 * Discrete-event core. Events at equal timestamps fire in insertion
 * order; cancellation is lazy (the heap entry stays, the callback is
 * dropped).
 */
class Scheduler {
public:
  using Callback = std::function<void()>;

  SimTime
  now() const
  {
    return m_now;
  }

  EventHandle
  schedule(SimTime at, NodeId target, EventKind kind, Callback cb)
  {
    if (at < m_now)
      throw SchedulingInPast(at, m_now);
    std::uint64_t seq = ++m_lastSeq;
    m_heap.push(Entry{at, seq});
    m_live.emplace(seq, Pending{target, kind, std::move(cb)});
    ++m_stats.scheduled;
    return EventHandle{seq};
  }

  EventHandle
  scheduleIn(Duration delay, NodeId target, EventKind kind, Callback cb)
  {
    return schedule(m_now + delay, target, kind, std::move(cb));
  }

  /// Timer shorthand.
  EventHandle
  after(Duration delay, NodeId target, Callback cb)
  {
    return scheduleIn(delay, target, EventKind::Timer, std::move(cb));
  }

  bool
  cancel(EventHandle h)
  {
    if (!h.valid())
      return false;
    if (m_live.erase(h.seq) == 0)
      return false;
    ++m_stats.cancelled;
    return true;
  }

  bool
  isPending(EventHandle h) const
  {
    return h.valid() && m_live.count(h.seq) != 0;
  }

  /// Processes every event with fire time <= end, then sets the clock to end.
  /// Returned counters are cumulative since construction.
  SimStats
  runUntil(SimTime end)
  {
    if (end < m_now)
      throw SchedulingInPast(end, m_now);
    while (!m_heap.empty() && m_heap.top().at <= end) {
      Entry e = m_heap.top();
      m_heap.pop();
      auto it = m_live.find(e.seq);
      if (it == m_live.end())
        continue;
      Pending p = std::move(it->second);
      m_live.erase(it);
      m_now = e.at;
      ++m_stats.processed;
      if (m_trace)
        m_trace(TraceEntry{e.at, e.seq, p.target, p.kind});
      p.cb();
    }
    m_now = end;
    return totals();
  }

  SimStats
  totals() const
  {
    SimStats s = m_stats;
    s.pending = m_live.size();
    return s;
  }

  void
  setTrace(std::function<void(const TraceEntry&)> hook)
  {
    m_trace = std::move(hook);
  }

private:
  struct Entry {
    SimTime at;
    std::uint64_t seq;

    bool
    operator>(const Entry& o) const
    {
      if (at != o.at)
        return at > o.at;
      return seq > o.seq;
    }
  };

  struct Pending {
    NodeId target;
    EventKind kind;
    Callback cb;
  };

  SimTime m_now;
  std::uint64_t m_lastSeq = 0;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> m_heap;
  std::unordered_map<std::uint64_t, Pending> m_live;
  SimStats m_stats;
  std::function<void(const TraceEntry&)> m_trace;
};

} // namespace wlanho
