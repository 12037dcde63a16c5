#pragma once

#include "wlanho/handoff/ap_agent.hpp"
#include "wlanho/handoff/mn_agent.hpp"
#include "wlanho/sim/scheduler.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace wlanho::fakes {

/// Timers on a real Scheduler; every other call is recorded.
class FakeApPort : public ApPort {
public:
  explicit FakeApPort(Scheduler& s) : sched(s) {}

  SimTime now() const override { return sched.now(); }
  EventHandle
  armTimer(Duration d, std::function<void()> fn) override
  {
    return sched.after(d, NodeId::ap(1), std::move(fn));
  }
  void sendWired(NodeId to, MessageBody body) override { wired.emplace_back(to, std::move(body)); }
  void
  sendWireless(NodeId mn, MessageBody body) override
  {
    wireless.emplace_back(mn, std::move(body));
  }
  BitRate currentLoad() override { return load; }
  BitRate spareCapacity() override { return spare; }
  std::optional<double> hear(NodeId) const override { return heard; }

  Scheduler& sched;
  BitRate load = BitRate::mbps(4);
  BitRate spare = BitRate::mbps(0.2);
  std::optional<double> heard = 20.0;
  std::vector<std::pair<NodeId, MessageBody>> wired;
  std::vector<std::pair<NodeId, MessageBody>> wireless;
};

class FakeMnPort : public MnPort {
public:
  explicit FakeMnPort(Scheduler& s) : sched(s) {}

  SimTime now() const override { return sched.now(); }
  EventHandle
  armTimer(Duration d, std::function<void()> fn) override
  {
    return sched.after(d, NodeId::mn(1), std::move(fn));
  }
  bool cancelTimer(EventHandle h) override { return sched.cancel(h); }
  void probeChannel(ChannelId ch, Duration) override { probed.push_back(ch); }

  void sendToServing(MessageBody body) override { serving.push_back(std::move(body)); }
  void
  sendToForeignAp(const ApEntry& ap, MessageBody body) override
  {
    foreign.emplace_back(ap, std::move(body));
  }
  BitRate ownLoad() override { return BitRate::kbps(600); }
  std::optional<ChannelId> homeChannel() const override { return home; }
  void startBsDiscovery() override { ++discoveries; }
  void executeHorizontal(const ApEntry& t) override { horizontal.push_back(t); }
  void executeVertical(NodeId bs) override { vertical.push_back(bs); }
  void executeReturn(const ApEntry& ap) override { returns.push_back(ap); }
  void rearmDetectors() override { ++rearms; }
  void resetDetectors() override { ++resets; }

  Scheduler& sched;
  std::optional<ChannelId> home = 1;
  std::vector<ChannelId> probed;
  std::vector<MessageBody> serving;
  std::vector<std::pair<ApEntry, MessageBody>> foreign;
  std::vector<ApEntry> horizontal;
  std::vector<NodeId> vertical;
  std::vector<ApEntry> returns;
  int discoveries = 0;
  int rearms = 0;
  int resets = 0;
};

} // namespace wlanho::fakes
