#pragma once

#include "wlanho/net/bit_rate.hpp"
#include "wlanho/net/packet.hpp"
#include "wlanho/net/wireless_channel.hpp"
#include "wlanho/sim/scheduler.hpp"

#include <array>
#include <deque>
#include <functional>
#include <stdexcept>
#include <string>

namespace wlanho {

class NoSuchLink : public std::runtime_error {
public:
  NoSuchLink(NodeId a, NodeId b)
    : std::runtime_error("no wired link between " + a.name() + " and " + b.name())
  {
  }
};

/// Full-duplex point-to-point link; each direction serializes FIFO.
class WiredLink {
public:
  using Receiver = std::function<void(Packet&&)>;

  WiredLink(NodeId a, NodeId b, BitRate bandwidth, Duration delay, Scheduler& sched)
    : m_ends{a, b}
    , m_bandwidth(bandwidth)
    , m_delay(delay)
    , m_sched(sched)
  {
  }

  WiredLink(const WiredLink&) = delete;
  WiredLink& operator=(const WiredLink&) = delete;

  NodeId endA() const { return m_ends[0]; }
  NodeId endB() const { return m_ends[1]; }
  BitRate bandwidth() const { return m_bandwidth; }
  Duration delay() const { return m_delay; }

  bool
  connects(NodeId x, NodeId y) const
  {
    return (m_ends[0] == x && m_ends[1] == y) || (m_ends[0] == y && m_ends[1] == x);
  }

  /// Handler invoked when a packet arrives at `end`.
  void
  setReceiver(NodeId end, Receiver r)
  {
    m_dir[indexOf(end)].receiver = std::move(r);
  }

  /// Sends from `from` to the opposite end; returns the arrival time.
  SimTime
  transmit(NodeId from, Packet pkt)
  {
    int out = indexOf(from);
    Direction& d = m_dir[1 - out];
    SimTime start = std::max(m_sched.now(), d.busyUntil);
    d.busyUntil = start + serializationTime(pkt.sizeBytes, m_bandwidth);
    SimTime arrival = d.busyUntil + m_delay;
    NodeId to = m_ends[1 - out];
    d.inTransit.push_back(std::move(pkt));
    EventKind kind = d.inTransit.back().kind == PacketKind::Data ? EventKind::PacketArrival
                                                                  : EventKind::MessageDelivery;
    m_sched.schedule(arrival, to, kind, [this, &d] {
      Packet p = std::move(d.inTransit.front());
      d.inTransit.pop_front();
      if (d.receiver)
        d.receiver(std::move(p));
    });
    return arrival;
  }

  /// Packets on the wire (both directions).
  template <typename Fn>
  void
  forEachInTransit(Fn&& fn) const
  {
    for (const auto& d : m_dir)
      for (const auto& p : d.inTransit)
        fn(p);
  }

private:
  // m_dir[i] holds traffic travelling *to* m_ends[i]
  struct Direction {
    SimTime busyUntil;
    std::deque<Packet> inTransit;
    Receiver receiver;
  };

  int
  indexOf(NodeId n) const
  {
    if (n == m_ends[0])
      return 0;
    if (n == m_ends[1])
      return 1;
    throw NoSuchLink(n, n == m_ends[0] ? m_ends[1] : m_ends[0]);
  }

  std::array<NodeId, 2> m_ends;
  BitRate m_bandwidth;
  Duration m_delay;
  Scheduler& m_sched;
  std::array<Direction, 2> m_dir;
};

} // namespace wlanho
