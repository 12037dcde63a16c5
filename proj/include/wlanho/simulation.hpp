#pragma once

#include "wlanho/detect/drop_rate_tracker.hpp"
#include "wlanho/detect/ewma_tracker.hpp"
#include "wlanho/handoff/ap_agent.hpp"
#include "wlanho/handoff/mn_agent.hpp"
#include "wlanho/metrics/collector.hpp"
#include "wlanho/net/cbr_flow.hpp"
#include "wlanho/net/coverage.hpp"
#include "wlanho/net/load_meter.hpp"
#include "wlanho/net/wired_link.hpp"
#include "wlanho/net/wireless_channel.hpp"
#include "wlanho/scenario/config.hpp"
#include "wlanho/sim/random.hpp"
#include "wlanho/sim/scheduler.hpp"
#include "wlanho/vertical/policy.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace wlanho {

/**
 * One run of the ESS: APs and an optional BS hanging off an access
 * router, a CN behind the router, and MNs sending CBR traffic uplink.
 *
 * Each MN has a Wi-Fi radio (tuned to one channel at a time, or to none
 * while switching) and a WMAN radio that is usable once network entry
 * completed. The access router keeps the MN -> attachment table that
 * RouteUpdates flip.
 */
class Simulation {
public:
  explicit Simulation(ScenarioConfig cfg)
    : m_cfg(std::move(cfg))
    , m_rng(m_cfg.sim.seed)
    , m_coverage(m_cfg.radio)
    , m_metrics(apIds(m_cfg), m_cfg.bs ? std::optional(NodeId::bs()) : std::nullopt,
                horizonSeconds(m_cfg))
  {
    validate(m_cfg);
    build();
  }

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const ScenarioConfig& config() const { return m_cfg; }
  Scheduler& scheduler() { return m_sched; }
  const CoverageModel& coverage() const { return m_coverage; }

  /// Runs over [0, horizon) and returns the finalized results. Call once.
  RunResults
  run()
  {
    if (m_ran)
      throw std::logic_error("Simulation::run called twice");
    m_ran = true;
    SimStats stats = m_sched.runUntil(SimTime::fromMicros(m_cfg.sim.horizon.count() - 1));

    std::map<std::uint32_t, std::uint64_t> inFlight;
    auto countData = [&](const Packet& p) {
      if (p.kind == PacketKind::Data)
        ++inFlight[p.flowId];
    };
    for (auto& [id, att] : m_attachments) {
      for (const auto& f : att->channel->dataQueue())
        countData(f.pkt);
      if (att->channel->inService())
        countData(att->channel->inService()->pkt);
      att->uplink->forEachInTransit(countData);
    }
    m_cnLink->forEachInTransit(countData);

    std::vector<MoveRequestLogEntry> moves;
    for (auto& [id, att] : m_attachments)
      if (att->agent)
        moves.insert(moves.end(), att->agent->moveLog().begin(), att->agent->moveLog().end());

    RunResults& r = m_metrics.finalize(inFlight, moves);
    r.routeOrderViolations = m_routeViolations;
    r.eventsProcessed = stats.processed;
    return r;
  }

  /// Attachment (AP or BS) that new data packets of `mn` currently go to.
  NodeId
  servingAttachment(NodeId mn) const
  {
    return mnNode(mn).dataVia;
  }

  std::optional<NodeId>
  associatedAp(NodeId mn) const
  {
    return mnNode(mn).assoc;
  }

  std::optional<ChannelId>
  tunedChannel(NodeId mn) const
  {
    return mnNode(mn).tuned;
  }

  const MnHandoffAgent&
  mnAgent(NodeId mn) const
  {
    return *mnNode(mn).agent;
  }

  const ApHandoffAgent&
  apAgent(NodeId ap) const
  {
    return *attachment(ap).agent;
  }

  const WirelessChannel&
  channelOf(NodeId attachmentId) const
  {
    return *attachment(attachmentId).channel;
  }

  /// Access-router route for `mn`.
  NodeId
  arRoute(NodeId mn) const
  {
    return m_arTable.at(mn);
  }

  BitRate
  loadOf(NodeId attachmentId)
  {
    Attachment& a = attachment(attachmentId);
    LoadMeter& m = m_cfg.load.metric == LoadMetric::Offered ? a.offered : a.carried;
    return m.measure(m_sched.now());
  }

  BitRate
  spareOf(NodeId attachmentId)
  {
    BitRate load = loadOf(attachmentId);
    BitRate cap = attachment(attachmentId).capacity;
    return load >= cap ? BitRate(0.0) : cap - load;
  }

private:
  class ApPortImpl;
  class MnPortImpl;

  struct Attachment {
    NodeId id;
    std::unique_ptr<WirelessChannel> channel;
    std::unique_ptr<WiredLink> uplink;
    LoadMeter offered;
    LoadMeter carried;
    BitRate capacity;
    std::unique_ptr<ApPortImpl> port;
    /// APs only
    std::unique_ptr<ApHandoffAgent> agent;
  };

  struct Move {
    HandoffKind kind;
    NodeId from;
    NodeId to;
    ChannelId channel;
    SimTime decided;
  };

  struct MnNode {
    NodeId id;
    std::optional<NodeId> assoc;
    std::optional<ChannelId> tuned;
    bool wmanActive = false;
    NodeId dataVia;
    std::uint32_t epoch = 0;
    std::unique_ptr<CbrFlow> flow;
    LoadMeter offered;
    std::unique_ptr<EwmaTracker> ewma;
    std::unique_ptr<DropRateTracker> drops;
    std::unique_ptr<MnPortImpl> port;
    std::unique_ptr<MnHandoffAgent> agent;
    std::optional<Move> move;
    std::uint64_t scanCycle = 0;
    std::optional<ScanProbeRecord> excursion;
  };

  class ApPortImpl final : public ApPort {
  public:
    ApPortImpl(Simulation& sim, NodeId self)
      : m_sim(sim)
      , m_self(self)
    {
    }

    SimTime now() const override { return m_sim.m_sched.now(); }

    EventHandle
    armTimer(Duration delay, std::function<void()> fn) override
    {
      return m_sim.m_sched.after(delay, m_self, std::move(fn));
    }

    void sendWired(NodeId to, MessageBody body) override { m_sim.sendWired(m_self, to, std::move(body)); }

    void
    sendWireless(NodeId mn, MessageBody body) override
    {
      m_sim.sendFromAttachment(m_self, mn, std::move(body));
    }

    BitRate currentLoad() override { return m_sim.loadOf(m_self); }
    BitRate spareCapacity() override { return m_sim.spareOf(m_self); }

    std::optional<double>
    hear(NodeId mn) const override
    {
      return m_sim.m_coverage.signalQuality(mn, m_self);
    }

  private:
    Simulation& m_sim;
    NodeId m_self;
  };

  class MnPortImpl final : public MnPort {
  public:
    MnPortImpl(Simulation& sim, MnNode& node)
      : m_sim(sim)
      , m_node(node)
    {
    }

    SimTime now() const override { return m_sim.m_sched.now(); }

    EventHandle
    armTimer(Duration delay, std::function<void()> fn) override
    {
      return m_sim.m_sched.after(delay, m_node.id, std::move(fn));
    }

    bool cancelTimer(EventHandle h) override { return m_sim.m_sched.cancel(h); }

    void
    probeChannel(ChannelId channel, Duration dwell) override
    {
      m_sim.probeChannel(m_node, channel, dwell);
    }

    void
    sendToServing(MessageBody body) override
    {
      if (m_node.assoc)
        m_sim.sendFromMn(m_node, *m_node.assoc, std::move(body), *m_node.assoc);
    }

    void
    sendToForeignAp(const ApEntry& ap, MessageBody body) override
    {
      if (!m_sim.m_attachments.count(ap.ap))
        return;
      m_sim.switchTo(m_node, ap.channel, [this, ap, body = std::move(body)]() mutable {
        m_sim.sendFromMn(m_node, ap.ap, std::move(body), ap.ap);
      });
    }

    BitRate ownLoad() override { return m_node.offered.measure(m_sim.m_sched.now()); }

    std::optional<ChannelId>
    homeChannel() const override
    {
      if (!m_node.assoc)
        return std::nullopt;
      return m_sim.attachment(*m_node.assoc).channel->id();
    }

    void
    startBsDiscovery() override
    {
      m_sim.m_sched.after(m_sim.m_cfg.wman.scanLatency, m_node.id, [this] {
        std::optional<NodeId> found;
        if (m_sim.m_cfg.bs && m_sim.m_coverage.inRange(m_node.id, NodeId::bs()))
          found = NodeId::bs();
        m_node.agent->onBsDiscovered(found);
      });
    }

    void executeHorizontal(const ApEntry& target) override { m_sim.executeHorizontal(m_node, target); }
    void executeVertical(NodeId bs) override { m_sim.executeVertical(m_node, bs); }
    void executeReturn(const ApEntry& ap) override { m_sim.executeReturn(m_node, ap); }

    void
    rearmDetectors() override
    {
      m_node.ewma->rearm();
      m_node.drops->rearm();
    }

    void
    resetDetectors() override
    {
      m_node.ewma->reset();
      m_node.drops->reset();
    }

  private:
    Simulation& m_sim;
    MnNode& m_node;
  };

  static std::vector<NodeId>
  apIds(const ScenarioConfig& c)
  {
    std::vector<NodeId> out;
    for (const auto& [i, ap] : c.aps)
      out.push_back(NodeId::ap(i));
    return out;
  }

  static std::int64_t
  horizonSeconds(const ScenarioConfig& c)
  {
    return (c.sim.horizon.count() + 999'999) / 1'000'000;
  }

  Attachment&
  attachment(NodeId id)
  {
    auto it = m_attachments.find(id);
    if (it == m_attachments.end())
      throw std::out_of_range("no attachment " + id.name());
    return *it->second;
  }

  const Attachment&
  attachment(NodeId id) const
  {
    auto it = m_attachments.find(id);
    if (it == m_attachments.end())
      throw std::out_of_range("no attachment " + id.name());
    return *it->second;
  }

  MnNode&
  mnNode(NodeId id)
  {
    auto it = m_mns.find(id);
    if (it == m_mns.end())
      throw std::out_of_range("no node " + id.name());
    return *it->second;
  }

  const MnNode&
  mnNode(NodeId id) const
  {
    auto it = m_mns.find(id);
    if (it == m_mns.end())
      throw std::out_of_range("no node " + id.name());
    return *it->second;
  }

  Attachment*
  apOnChannel(ChannelId ch)
  {
    auto it = m_byChannel.find(ch);
    return it == m_byChannel.end() ? nullptr : it->second;
  }

  // --- construction -------------------------------------------------------

  void
  build()
  {
    std::int64_t seconds = horizonSeconds(m_cfg);
    for (std::int64_t t = 0; t < seconds; ++t)
      m_sched.schedule(SimTime::fromMicros(t * 1'000'000), NodeId::ar(), EventKind::Timer,
                       [this, t] { snapshot(t); });

    m_cnLink = std::make_unique<WiredLink>(NodeId::ar(), NodeId::cn(), m_cfg.wired.bandwidth,
                                           m_cfg.wired.delay, m_sched);
    m_cnLink->setReceiver(NodeId::cn(), [this](Packet&& p) { onCnReceive(std::move(p)); });

    MacParams mac{m_cfg.mac.capacity, m_cfg.mac.overhead, m_cfg.mac.backoffMax,
                  m_cfg.mac.queueCapacity};
    for (const auto& [i, ap] : m_cfg.aps) {
      NodeId id = NodeId::ap(i);
      m_coverage.setPosition(id, ap.pos);
      m_coverage.setRange(id, ap.rangeM);
      auto& att = addAttachment(id, ap.channel, mac, m_cfg.wired.bandwidth, m_cfg.wired.delay);
      att.port = std::make_unique<ApPortImpl>(*this, id);
      ApHandoffParams hp{m_cfg.handoff.delta, m_cfg.handoff.tIgnore,
                         m_cfg.handoff.loadResponseTimeout};
      att.agent = std::make_unique<ApHandoffAgent>(id, ap.channel, hp, *att.port);
      m_byChannel[ap.channel] = &att;
    }
    if (m_cfg.bs) {
      NodeId id = NodeId::bs();
      m_coverage.setPosition(id, m_cfg.bs->pos);
      m_coverage.setRange(id, m_cfg.bs->rangeM);
      MacParams wman = mac;
      wman.effectiveCapacity = m_cfg.wman.capacity;
      addAttachment(id, kWmanChannel, wman, m_cfg.wired.bsBandwidth, m_cfg.wired.bsDelay);
    }

    MnHandoffParams mp;
    mp.tRepeat = m_cfg.handoff.tRepeat;
    mp.nRepeat = m_cfg.handoff.nRepeat;
    mp.retryBackoff = m_cfg.handoff.retryBackoff;
    mp.delta = m_cfg.handoff.delta;
    mp.wmanEnabled = m_cfg.wman.enabled && m_cfg.bs.has_value();
    mp.returnScanPeriod = m_cfg.wman.returnScanPeriod;
    mp.loadResponseTimeout = m_cfg.handoff.loadResponseTimeout;
    ScanParams sp{m_cfg.scan.period, m_cfg.scan.dwell, m_cfg.scan.switchTime,
                  m_cfg.scan.responseWait};

    for (const auto& [i, cfg] : m_cfg.mns) {
      NodeId id = NodeId::mn(i);
      m_coverage.setPosition(id, cfg.pos);
      auto node = std::make_unique<MnNode>();
      MnNode& mn = *node;
      m_mns.emplace(id, std::move(node));

      NodeId ap = NodeId::ap(cfg.ap);
      mn.id = id;
      mn.assoc = ap;
      mn.tuned = attachment(ap).channel->id();
      mn.dataVia = ap;
      mn.offered = LoadMeter(m_cfg.load.window);
      mn.ewma = std::make_unique<EwmaTracker>(m_cfg.detection.alpha, m_cfg.detection.qlength,
                                              m_cfg.detection.warmupSamples);
      mn.drops = std::make_unique<DropRateTracker>(m_cfg.detection.window,
                                                   m_cfg.detection.dropThreshold);
      mn.port = std::make_unique<MnPortImpl>(*this, mn);
      mn.agent = std::make_unique<MnHandoffAgent>(id, mp, sp, *mn.port);
      m_arTable[id] = ap;
      m_arEpoch[id] = 0;

      CbrSpec spec;
      spec.flowId = i;
      spec.src = id;
      spec.dst = NodeId::cn();
      spec.packetBytes = m_cfg.traffic.packetBytes;
      spec.interval = m_cfg.traffic.interval;
      spec.startAt = SimTime() + cfg.start;
      m_metrics.registerFlow(i, id);
      mn.flow = std::make_unique<CbrFlow>(
        spec, m_sched, [this] { return ++m_lastPacketId; },
        [this, &mn](Packet p) { onGenerated(mn, std::move(p)); });
      mn.flow->start();

      if (m_cfg.sim.scheme && m_cfg.detection.mode == DetectionMode::Ewma) {
        auto g = m_rng.stream(id, 2);
        auto phase = uniformInt(g, 0, m_cfg.detection.samplePeriod.count() - 1);
        m_sched.schedule(SimTime::fromMicros(phase), id, EventKind::Timer,
                         [this, &mn] { sampleTick(mn); });
      }
    }
  }

  Attachment&
  addAttachment(NodeId id, ChannelId ch, MacParams mac, BitRate linkRate, Duration linkDelay)
  {
    auto att = std::make_unique<Attachment>();
    Attachment& a = *att;
    m_attachments.emplace(id, std::move(att));
    a.id = id;
    a.capacity = mac.effectiveCapacity;
    a.offered = LoadMeter(m_cfg.load.window);
    a.carried = LoadMeter(m_cfg.load.window);
    a.channel = std::make_unique<WirelessChannel>(ch, id, mac, m_sched, m_rng.stream(id, 1));
    a.channel->setEligibility([this, ch](const WirelessFrame& f) {
      return stationOn(f.tx, ch) && (!f.rx || stationOn(*f.rx, ch));
    });
    a.channel->setDeliver([this, &a](WirelessFrame&& f) { onAirDelivered(a, std::move(f)); });
    a.uplink = std::make_unique<WiredLink>(id, NodeId::ar(), linkRate, linkDelay, m_sched);
    a.uplink->setReceiver(NodeId::ar(), [this, id](Packet&& p) { onArReceive(id, std::move(p)); });
    a.uplink->setReceiver(id, [this, &a](Packet&& p) { onAttachmentWired(a, std::move(p)); });
    return a;
  }

  bool
  stationOn(NodeId station, ChannelId ch) const
  {
    if (station.kind != NodeKind::MN)
      return true;
    const MnNode& mn = mnNode(station);
    if (ch == kWmanChannel)
      return mn.wmanActive;
    return mn.tuned == ch;
  }

  // --- traffic ------------------------------------------------------------

  void
  onGenerated(MnNode& mn, Packet p)
  {
    SimTime now = m_sched.now();
    m_metrics.onGenerated(p);
    mn.offered.record(now, p.bits());
    Attachment& att = attachment(mn.dataVia);
    att.offered.record(now, p.bits());
    p.routeEpoch = mn.epoch;
    auto result = att.channel->enqueueData(WirelessFrame{p, mn.id, att.id});
    bool dropped = result == EnqueueResult::DroppedQueueFull;
    if (dropped)
      m_metrics.onDropped(att.id, p, now);
    std::optional<NodeId> victim;
    if (const auto& out = att.channel->pushedOut()) {
      m_metrics.onDropped(att.id, out->pkt, now);
      victim = out->tx;
    }

    if (!m_cfg.sim.scheme || m_cfg.detection.mode != DetectionMode::DropRate ||
        att.id.kind != NodeKind::AP)
      return;
    mn.drops->update(now, dropped ? SendOutcome::Dropped : SendOutcome::Sent);
    checkDropRate(mn, now);
    if (victim && victim->kind == NodeKind::MN) {
      MnNode& other = mnNode(*victim);
      other.drops->lateDrop(now);
      checkDropRate(other, now);
    }
  }

  void
  checkDropRate(MnNode& mn, SimTime now)
  {
    if (!mn.drops->crossed())
      return;
    m_metrics.onTrigger(mn.id, now, DetectorKind::DropRate);
    mn.agent->onWmanActivation();
    mn.agent->onDegradation();
  }

  void
  sampleTick(MnNode& mn)
  {
    m_sched.after(m_cfg.detection.samplePeriod, mn.id, [this, &mn] { sampleTick(mn); });
    if (!mn.assoc || mn.dataVia != *mn.assoc)
      return;
    auto y = static_cast<double>(attachment(*mn.assoc).channel->occupancy(mn.id));
    double e = mn.ewma->update(y);
    if (mn.ewma->crossed()) {
      m_metrics.onTrigger(mn.id, m_sched.now(), DetectorKind::Ewma);
      mn.agent->onDegradation();
    }
    if (mn.ewma->warmedUp() && e > m_cfg.detection.wmanLimit())
      mn.agent->onWmanActivation();
  }

  void
  snapshot(std::int64_t t)
  {
    std::map<NodeId, std::uint32_t> counts;
    for (auto& [id, att] : m_attachments)
      counts[id] = 0;
    std::vector<NodeId> onBs;
    for (auto& [id, mn] : m_mns) {
      ++counts[mn->dataVia];
      if (mn->dataVia.kind == NodeKind::BS)
        onBs.push_back(id);
    }
    m_metrics.snapshotAssociations(t, std::move(counts), std::move(onBs));
  }

  // --- message plumbing ---------------------------------------------------

  Packet
  controlPacket(NodeId src, NodeId dst, MessageBody body)
  {
    return makeControlPacket(++m_lastPacketId, m_cfg.handoff.controlBytes,
                             ControlMessage{src, dst, m_sched.now(), std::move(body)});
  }

  /// Control frame from an MN to the AP or BS `via`, addressed to `dst`.
  void
  sendFromMn(MnNode& mn, NodeId via, MessageBody body, NodeId dst)
  {
    Attachment& att = attachment(via);
    att.channel->enqueueControl(WirelessFrame{controlPacket(mn.id, dst, std::move(body)), mn.id, via});
  }

  void
  sendFromAttachment(NodeId from, NodeId mn, MessageBody body)
  {
    Attachment& att = attachment(from);
    att.channel->enqueueControl(WirelessFrame{controlPacket(from, mn, std::move(body)), from, mn});
  }

  /// Control message over the distribution system (attachment -> AR -> dst).
  void
  sendWired(NodeId from, NodeId to, MessageBody body)
  {
    attachment(from).uplink->transmit(from, controlPacket(from, to, std::move(body)));
  }

  void
  forwardFromAr(Packet p)
  {
    if (p.dst.kind == NodeKind::CN) {
      m_cnLink->transmit(NodeId::ar(), std::move(p));
      return;
    }
    auto it = m_attachments.find(p.dst);
    if (it == m_attachments.end())
      return;
    it->second->uplink->transmit(NodeId::ar(), std::move(p));
  }

  void
  onArReceive(NodeId from, Packet p)
  {
    if (p.kind == PacketKind::Data) {
      // a packet queued after an RU the router has not seen yet
      if (p.routeEpoch > m_arEpoch[p.src])
        ++m_routeViolations;
      forwardFromAr(std::move(p));
      return;
    }
    if (auto* ru = std::get_if<RouteUpdate>(&p.control->body)) {
      if (ru->epoch >= m_arEpoch[ru->mn]) {
        m_arTable[ru->mn] = ru->newAttachment;
        m_arEpoch[ru->mn] = ru->epoch;
      }
    }
    (void)from;
    forwardFromAr(std::move(p));
  }

  void
  onCnReceive(Packet p)
  {
    if (p.kind == PacketKind::Data)
      m_metrics.onDelivered(p, m_sched.now());
  }

  void
  onAttachmentWired(Attachment& att, Packet p)
  {
    if (p.kind != PacketKind::Control)
      return;
    NodeId src = p.src;
    std::visit(
      [&](auto& msg) {
        using T = std::decay_t<decltype(msg)>;
        if constexpr (std::is_same_v<T, LoadRequest>) {
          if (att.agent)
            att.agent->onLoadRequest(src, msg);
        }
        else if constexpr (std::is_same_v<T, LoadResponse>) {
          if (att.agent)
            att.agent->onLoadResponse(src, msg);
        }
        else if constexpr (std::is_same_v<T, DsProbeResponse>) {
          if (att.agent)
            att.agent->onDsProbeResponse(msg);
          else
            sendFromAttachment(att.id, msg.mn, msg);
        }
      },
      p.control->body);
  }

  void
  onAirDelivered(Attachment& att, WirelessFrame f)
  {
    if (f.pkt.kind == PacketKind::Data) {
      MnNode& mn = mnNode(f.tx);
      if (mn.excursion)
        ++mn.excursion->framesSentDuringBlackout;
      f.pkt.via = att.id;
      att.carried.record(m_sched.now(), f.pkt.bits());
      att.uplink->transmit(att.id, std::move(f.pkt));
      return;
    }
    if (f.tx.kind == NodeKind::MN)
      atAttachment(att, std::move(f));
    else if (f.rx)
      atMn(mnNode(*f.rx), f.tx, f.pkt.control->body);
  }

  void
  atAttachment(Attachment& att, WirelessFrame f)
  {
    NodeId mnId = f.tx;
    MessageBody& body = f.pkt.control->body;
    if (auto* req = std::get_if<MoveRequest>(&body)) {
      if (att.agent)
        att.agent->onMoveRequest(mnId, *req);
    }
    else if (auto* probe = std::get_if<DsProbe>(&body)) {
      if (att.agent)
        att.agent->onDsProbe(*probe);
    }
    else if (auto* lr = std::get_if<LoadRequestFromMn>(&body)) {
      if (att.agent)
        att.agent->onLoadRequestFromMn(mnId, *lr);
    }
    else if (std::holds_alternative<AssocRequest>(body)) {
      bool ok = m_coverage.inRange(mnId, att.id);
      sendFromAttachment(att.id, mnId, AssocResponse{ok});
    }
    else if (std::holds_alternative<RouteUpdate>(body)) {
      att.uplink->transmit(att.id, std::move(f.pkt));
      MnNode& mn = mnNode(mnId);
      if (mn.move && mn.move->kind == HandoffKind::VerticalUp && att.id == mn.move->to)
        finishVerticalUp(mn);
    }
  }

  void
  atMn(MnNode& mn, NodeId from, const MessageBody& body)
  {
    if (auto* hc = std::get_if<HandoffTargetMessage>(&body))
      mn.agent->onHandoffTarget(*hc);
    else if (auto* resp = std::get_if<DsProbeResponse>(&body))
      mn.agent->onProbeResponse(resp->entry);
    else if (auto* assoc = std::get_if<AssocResponse>(&body))
      onAssocResponse(mn, from, assoc->accepted);
    else if (auto* load = std::get_if<LoadResponse>(&body))
      mn.agent->onLoadResponse(from, *load);
  }

  // --- radio --------------------------------------------------------------

  void
  retune(MnNode& mn, std::optional<ChannelId> ch)
  {
    auto old = mn.tuned;
    mn.tuned = ch;
    if (old)
      if (auto* a = apOnChannel(*old))
        a->channel->onRetune(mn.id);
    if (ch && ch != old)
      if (auto* a = apOnChannel(*ch))
        a->channel->onRetune(mn.id);
  }

  /// Tunes the Wi-Fi radio to `ch` (paying the switch time unless already
  /// there), then runs `then`.
  void
  switchTo(MnNode& mn, ChannelId ch, std::function<void()> then)
  {
    if (mn.tuned == ch) {
      then();
      return;
    }
    retune(mn, std::nullopt);
    m_sched.after(m_cfg.scan.switchTime, mn.id, [this, &mn, ch, then = std::move(then)] {
      retune(mn, ch);
      then();
    });
  }

  void
  probeChannel(MnNode& mn, ChannelId ch, Duration dwell)
  {
    const auto& scanner = mn.agent->scanner();
    if (scanner.probesThisCycle() == 0)
      ++mn.scanCycle;
    ScanProbeRecord rec;
    rec.mn = mn.id;
    rec.cycle = mn.scanCycle;
    rec.cycleLength = scanner.channelList().size();
    rec.channel = ch;
    rec.leftHome = m_sched.now();
    mn.excursion = rec;
    Duration sw = m_cfg.scan.switchTime;

    retune(mn, std::nullopt);
    m_sched.after(sw, mn.id, [this, &mn, ch] {
      retune(mn, ch);
      mn.excursion->onForeign = m_sched.now();
      if (auto* a = apOnChannel(ch)) {
        NodeId relay = mn.assoc.value_or(mn.dataVia);
        Packet p = controlPacket(mn.id, a->id, DsProbe{mn.id, relay});
        a->channel->enqueueControl(WirelessFrame{std::move(p), mn.id, std::nullopt});
      }
    });
    m_sched.after(sw + dwell, mn.id, [this, &mn, ch] {
      mn.excursion->leftForeign = m_sched.now();
      // an unsent probe is abandoned with the channel
      if (auto* a = apOnChannel(ch))
        a->channel->extract(mn.id);
      retune(mn, std::nullopt);
    });
    m_sched.after(sw + dwell + sw, mn.id, [this, &mn] {
      std::optional<ChannelId> home;
      if (mn.assoc)
        home = attachment(*mn.assoc).channel->id();
      retune(mn, home);
      mn.excursion->backHome = m_sched.now();
      m_metrics.onScanProbe(*mn.excursion);
      mn.excursion.reset();
    });
  }

  // --- handoff execution --------------------------------------------------

  /// Moves every queued frame of `mn` from one attachment to another.
  /// Stale control frames are discarded; data frames are re-queued at the
  /// tail of the new queue and dropped there if it is full.
  void
  migrate(MnNode& mn, Attachment& from, Attachment& to)
  {
    auto frames = from.channel->extract(mn.id);
    for (auto& f : frames) {
      if (f.pkt.kind != PacketKind::Data)
        continue;
      f.pkt.routeEpoch = mn.epoch;
      f.rx = to.id;
      Packet copy = f.pkt;
      if (to.channel->enqueueData(std::move(f)) == EnqueueResult::DroppedQueueFull)
        m_metrics.onDropped(to.id, copy, m_sched.now());
    }
  }

  void
  executeHorizontal(MnNode& mn, const ApEntry& target)
  {
    bool usable = mn.assoc && m_attachments.count(target.ap) && target.ap.kind == NodeKind::AP &&
                  target.ap != *mn.assoc && m_coverage.inRange(mn.id, target.ap);
    if (!usable) {
      m_sched.after(Duration(0), mn.id, [&mn] { mn.agent->onHorizontalDone(false); });
      return;
    }
    mn.move = Move{HandoffKind::Horizontal, *mn.assoc, target.ap,
                   attachment(target.ap).channel->id(), m_sched.now()};
    mn.assoc.reset();
    switchTo(mn, mn.move->channel, [this, &mn] {
      NodeId ap = mn.move->to;
      sendFromMn(mn, ap, AssocRequest{}, ap);
    });
  }

  void
  executeVertical(MnNode& mn, NodeId bs)
  {
    bool usable = m_cfg.wman.enabled && mn.assoc && m_attachments.count(bs) &&
                  bs.kind == NodeKind::BS && m_coverage.inRange(mn.id, bs) &&
                  bsAdmits(loadOf(bs), mn.offered.measure(m_sched.now()), m_cfg.wman.capacity);
    if (!usable) {
      m_sched.after(Duration(0), mn.id, [&mn] { mn.agent->onVerticalDone(false); });
      return;
    }
    mn.move = Move{HandoffKind::VerticalUp, *mn.assoc, bs, kWmanChannel, m_sched.now()};
    m_sched.after(m_cfg.wman.entryLatency, mn.id, [this, &mn] {
      if (!mn.move || mn.move->kind != HandoffKind::VerticalUp)
        return;
      // entry done: new traffic goes over the WMAN while the AP drains
      NodeId bsId = mn.move->to;
      mn.wmanActive = true;
      ++mn.epoch;
      sendFromMn(mn, bsId, RouteUpdate{mn.id, bsId, mn.epoch}, NodeId::cn());
      mn.dataVia = bsId;
      attachment(bsId).channel->kick();
    });
  }

  void
  finishVerticalUp(MnNode& mn)
  {
    Move mv = *mn.move;
    mn.move.reset();
    migrate(mn, attachment(mv.from), attachment(mv.to));
    mn.assoc.reset();
    retune(mn, std::nullopt);
    recordHandoff(mn, mv);
    mn.agent->onVerticalDone(true);
  }

  void
  executeReturn(MnNode& mn, const ApEntry& ap)
  {
    bool usable = mn.dataVia.kind == NodeKind::BS && m_attachments.count(ap.ap) &&
                  ap.ap.kind == NodeKind::AP && m_coverage.inRange(mn.id, ap.ap);
    if (!usable) {
      m_sched.after(Duration(0), mn.id, [&mn] { mn.agent->onReturnDone(false); });
      return;
    }
    mn.move = Move{HandoffKind::VerticalDown, mn.dataVia, ap.ap, attachment(ap.ap).channel->id(),
                   m_sched.now()};
    switchTo(mn, mn.move->channel, [this, &mn] {
      NodeId target = mn.move->to;
      sendFromMn(mn, target, AssocRequest{}, target);
    });
  }

  void
  onAssocResponse(MnNode& mn, NodeId from, bool accepted)
  {
    if (!mn.move || mn.move->to != from || mn.move->kind == HandoffKind::VerticalUp)
      return;
    Move mv = *mn.move;
    mn.move.reset();
    if (!accepted) {
      if (mv.kind == HandoffKind::Horizontal) {
        mn.assoc = mv.from;
        switchTo(mn, attachment(mv.from).channel->id(),
                 [&mn] { mn.agent->onHorizontalDone(false); });
      }
      else {
        mn.agent->onReturnDone(false);
      }
      return;
    }

    Attachment& target = attachment(mv.to);
    Attachment& old = attachment(mn.dataVia);
    mn.assoc = mv.to;
    ++mn.epoch;
    // RU first: control frames are served ahead of the migrated data
    sendFromMn(mn, mv.to, RouteUpdate{mn.id, mv.to, mn.epoch}, NodeId::cn());
    migrate(mn, old, target);
    mn.dataVia = mv.to;
    if (mv.kind == HandoffKind::VerticalDown) {
      mn.wmanActive = false;
      old.channel->onRetune(mn.id);
    }
    recordHandoff(mn, mv);
    if (mv.kind == HandoffKind::Horizontal)
      mn.agent->onHorizontalDone(true);
    else
      mn.agent->onReturnDone(true);
  }

  void
  recordHandoff(const MnNode& mn, const Move& mv)
  {
    HandoffRow row;
    row.mn = mn.id;
    row.from = mv.from;
    row.to = mv.to;
    row.kind = mv.kind;
    row.decidedAt = mv.decided;
    row.completedAt = m_sched.now();
    row.releasedAt = mv.kind == HandoffKind::Horizontal ? mv.decided : row.completedAt;
    m_metrics.onHandoff(row);
  }

  ScenarioConfig m_cfg;
  RngStreams m_rng;
  CoverageModel m_coverage;
  MetricsCollector m_metrics;
  Scheduler m_sched;
  std::map<NodeId, std::unique_ptr<Attachment>> m_attachments;
  std::map<ChannelId, Attachment*> m_byChannel;
  std::map<NodeId, std::unique_ptr<MnNode>> m_mns;
  std::unique_ptr<WiredLink> m_cnLink;
  std::map<NodeId, NodeId> m_arTable;
  std::map<NodeId, std::uint32_t> m_arEpoch;
  std::uint64_t m_routeViolations = 0;
  std::uint64_t m_lastPacketId = 0;
  bool m_ran = false;
};

} // namespace wlanho
