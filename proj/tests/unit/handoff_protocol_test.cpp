#include "wlanho/handoff/ap_agent.hpp"
#include "wlanho/handoff/hc_set.hpp"
#include "wlanho/handoff/mn_agent.hpp"

#include "fakes.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace wlanho;
using namespace std::chrono_literals;

TEST(HcSet, ClearMarginIncluded)
{
  // 4.0M - 0.6M - 2.0M = 1.4M > 0.25M
  std::vector<ApLoad> r{{NodeId::ap(2), BitRate::bps(2'000'000)}};
  auto hc = computeHc(BitRate::bps(4'000'000), BitRate::bps(600'000), r, BitRate::bps(250'000));
  EXPECT_EQ(hc, (std::vector<NodeId>{NodeId::ap(2)}));
}

TEST(HcSet, ExactMarginExcluded)
{
  std::vector<ApLoad> r{{NodeId::ap(2), BitRate::bps(3'150'000)}};
  auto hc = computeHc(BitRate::bps(4'000'000), BitRate::bps(600'000), r, BitRate::bps(250'000));
  EXPECT_TRUE(hc.empty());
}

TEST(HcSet, NoResponsesNoCandidates)
{
  EXPECT_TRUE(computeHc(BitRate::mbps(4), BitRate::kbps(600), {}, BitRate::kbps(250)).empty());
}

TEST(HcSet, MatchesBruteForceFilter)
{
  std::mt19937_64 g(11);
  std::uniform_int_distribution<std::int64_t> load(0, 5'000'000);
  for (int trial = 0; trial < 2000; ++trial) {
    std::int64_t la = load(g);
    std::int64_t m = load(g) / 5;
    std::int64_t d = load(g) / 10;
    std::vector<ApLoad> r;
    std::vector<NodeId> want;
    for (std::uint16_t i = 2; i < 2 + trial % 5; ++i) {
      std::int64_t li = (trial % 7 == 0) ? la - m - d : load(g);
      r.push_back({NodeId::ap(i), BitRate::bps(static_cast<double>(li))});
      if (la - m - li > d)
        want.push_back(NodeId::ap(i));
    }
    auto got = computeHc(BitRate::bps(static_cast<double>(la)), BitRate::bps(static_cast<double>(m)),
                         r, BitRate::bps(static_cast<double>(d)));
    ASSERT_EQ(got, want) << "trial " << trial;
  }
}

class ApAgentTest : public ::testing::Test {
protected:
  Scheduler sched;
  fakes::FakeApPort port{sched};
  ApHandoffAgent ap{NodeId::ap(1), 1, ApHandoffParams{}, port};

  MoveRequest
  request(std::vector<NodeId> aps)
  {
    MoveRequest r;
    r.mnLoad = BitRate::kbps(600);
    for (NodeId a : aps)
      r.apList.push_back({a, 11, 20.0});
    return r;
  }

  std::optional<HandoffTargetMessage>
  lastTarget() const
  {
    for (auto it = port.wireless.rbegin(); it != port.wireless.rend(); ++it)
      if (auto* t = std::get_if<HandoffTargetMessage>(&it->second))
        return *t;
    return std::nullopt;
  }
};

TEST_F(ApAgentTest, FansOutOneLoadRequestPerListedAp)
{
  ap.onMoveRequest(NodeId::mn(1), request({NodeId::ap(2), NodeId::ap(3), NodeId::ap(2)}));
  ASSERT_EQ(port.wired.size(), 2u);
  EXPECT_EQ(port.wired[0].first, NodeId::ap(2));
  EXPECT_EQ(port.wired[1].first, NodeId::ap(3));
  EXPECT_TRUE(ap.hasPending());
}

TEST_F(ApAgentTest, AnswersAtTheDeadlineWithTheCandidates)
{
  port.load = BitRate::mbps(4);
  ap.onMoveRequest(NodeId::mn(1), request({NodeId::ap(2), NodeId::ap(3)}));
  ap.onLoadResponse(NodeId::ap(2), LoadResponse{BitRate::mbps(2), BitRate::mbps(2.2)});
  // AP3 never answers
  sched.runUntil(SimTime::fromMicros(49'999));
  EXPECT_FALSE(lastTarget());
  sched.runUntil(SimTime::fromMicros(50'000));
  auto t = lastTarget();
  ASSERT_TRUE(t);
  EXPECT_EQ(t->hcList, (std::vector<NodeId>{NodeId::ap(2)}));
  EXPECT_FALSE(ap.hasPending());
}

TEST_F(ApAgentTest, EmptyListGivesEmptyCandidates)
{
  ap.onMoveRequest(NodeId::mn(1), request({}));
  sched.runUntil(SimTime::fromSeconds(1));
  auto t = lastTarget();
  ASSERT_TRUE(t);
  EXPECT_TRUE(t->hcList.empty());
}

TEST_F(ApAgentTest, IgnoresRequestsForOneSecond)
{
  ap.onMoveRequest(NodeId::mn(1), request({NodeId::ap(2)}));
  sched.runUntil(SimTime::fromMicros(300'000));
  ap.onMoveRequest(NodeId::mn(2), request({NodeId::ap(2)}));
  sched.runUntil(SimTime::fromMicros(1'000'000));
  ap.onMoveRequest(NodeId::mn(3), request({NodeId::ap(2)}));
  const auto& log = ap.moveLog();
  ASSERT_EQ(log.size(), 3u);
  EXPECT_EQ(log[0].disposition, MoveDisposition::Processed);
  EXPECT_EQ(log[1].disposition, MoveDisposition::DroppedIgnoring);
  EXPECT_EQ(log[2].disposition, MoveDisposition::Processed);
}

TEST_F(ApAgentTest, RetryWhilePendingIsDropped)
{
  ap.onMoveRequest(NodeId::mn(1), request({NodeId::ap(2)}));
  sched.runUntil(SimTime::fromMicros(10'000));
  ap.onMoveRequest(NodeId::mn(1), request({NodeId::ap(2)}));
  ASSERT_EQ(ap.moveLog().size(), 2u);
  EXPECT_NE(ap.moveLog()[1].disposition, MoveDisposition::Processed);
  EXPECT_EQ(port.wired.size(), 1u);
}

TEST_F(ApAgentTest, StrayAndDuplicateResponsesAreIgnored)
{
  port.load = BitRate::mbps(4);
  ap.onMoveRequest(NodeId::mn(1), request({NodeId::ap(2)}));
  ap.onLoadResponse(NodeId::ap(3), LoadResponse{BitRate::mbps(0), BitRate::mbps(4.2)});
  ap.onLoadResponse(NodeId::ap(2), LoadResponse{BitRate::mbps(3.5), BitRate::mbps(0.7)});
  ap.onLoadResponse(NodeId::ap(2), LoadResponse{BitRate::mbps(0), BitRate::mbps(4.2)});
  sched.runUntil(SimTime::fromSeconds(1));
  auto t = lastTarget();
  ASSERT_TRUE(t);
  EXPECT_TRUE(t->hcList.empty());
}

TEST_F(ApAgentTest, AnswersLoadRequestsWithCurrentLoad)
{
  port.load = BitRate::mbps(3);
  ap.onLoadRequest(NodeId::ap(2), LoadRequest{NodeId::ap(2)});
  ASSERT_EQ(port.wired.size(), 1u);
  auto* r = std::get_if<LoadResponse>(&port.wired[0].second);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->load, BitRate::mbps(3));
}

TEST_F(ApAgentTest, ProbeFromAStationInRangeIsRelayedToItsAp)
{
  ap.onDsProbe(DsProbe{NodeId::mn(4), NodeId::ap(2)});
  ASSERT_EQ(port.wired.size(), 1u);
  EXPECT_EQ(port.wired[0].first, NodeId::ap(2));
  auto* r = std::get_if<DsProbeResponse>(&port.wired[0].second);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->entry.ap, NodeId::ap(1));
  EXPECT_EQ(r->entry.channel, 1);
}

TEST_F(ApAgentTest, ProbeFromOutOfRangeIsIgnored)
{
  port.heard.reset();
  ap.onDsProbe(DsProbe{NodeId::mn(4), NodeId::ap(2)});
  EXPECT_TRUE(port.wired.empty());
}

class MnAgentTest : public ::testing::Test {
protected:
  Scheduler sched;
  fakes::FakeMnPort port{sched};
  MnHandoffParams params;
  std::unique_ptr<MnHandoffAgent> mn;

  void
  make(bool wman = false)
  {
    params.wmanEnabled = wman;
    mn = std::make_unique<MnHandoffAgent>(NodeId::mn(1), params, ScanParams{}, port);
  }

  // steps time until `done`, answering each probe from `answers`
  template <typename Done>
  void
  stepUntil(const std::vector<ApEntry>& answers, Done&& done)
  {
    std::size_t seen = port.probed.size();
    while (!done()) {
      sched.runUntil(sched.now() + Duration(1000));
      for (; seen < port.probed.size(); ++seen)
        for (const auto& a : answers)
          if (a.channel == port.probed[seen])
            mn->onProbeResponse(a);
    }
  }

  void
  scanWith(std::vector<ApEntry> answers)
  {
    mn->onDegradation();
    stepUntil(answers, [this] { return mn->phase() != MnPhase::Scanning; });
  }

  int
  moveRequestsSent() const
  {
    int n = 0;
    for (const auto& b : port.serving)
      n += std::holds_alternative<MoveRequest>(b);
    return n;
  }
};

TEST_F(MnAgentTest, DegradationStartsAScanThenAMoveRequest)
{
  make();
  mn->onDegradation();
  EXPECT_EQ(mn->phase(), MnPhase::Scanning);
  scanWith({});
  EXPECT_EQ(mn->phase(), MnPhase::Requesting);
  ASSERT_EQ(moveRequestsSent(), 1);
  EXPECT_TRUE(std::get<MoveRequest>(port.serving[0]).apList.empty());
}

TEST_F(MnAgentTest, SecondTriggerDuringAProcessIsIgnored)
{
  make();
  scanWith({});
  mn->onDegradation();
  EXPECT_EQ(mn->phase(), MnPhase::Requesting);
}

TEST_F(MnAgentTest, GivesUpAfterFourUnansweredRequests)
{
  make();
  scanWith({});
  SimTime first = sched.now();
  sched.runUntil(first + 599ms);
  EXPECT_EQ(moveRequestsSent(), 3);
  sched.runUntil(first + 600ms);
  EXPECT_EQ(moveRequestsSent(), 4);
  EXPECT_EQ(mn->phase(), MnPhase::AwaitingTarget);
  sched.runUntil(first + 799ms);
  EXPECT_EQ(mn->phase(), MnPhase::AwaitingTarget);
  sched.runUntil(first + 800ms);
  EXPECT_EQ(mn->phase(), MnPhase::Idle);
  EXPECT_EQ(port.rearms, 1);
  EXPECT_EQ(moveRequestsSent(), 4);
}

TEST_F(MnAgentTest, PicksTheStrongestCandidate)
{
  make();
  scanWith({{NodeId::ap(3), 6, -70.0}, {NodeId::ap(2), 11, -60.0}});
  mn->onHandoffTarget(HandoffTargetMessage{{NodeId::ap(3), NodeId::ap(2)}});
  ASSERT_EQ(port.horizontal.size(), 1u);
  EXPECT_EQ(port.horizontal[0].ap, NodeId::ap(2));
  EXPECT_EQ(mn->phase(), MnPhase::HandingOff);
  mn->onHorizontalDone(true);
  EXPECT_EQ(mn->phase(), MnPhase::Idle);
  EXPECT_EQ(port.resets, 1);
}

TEST_F(MnAgentTest, EmptyCandidatesWithKnownBsGoesVertical)
{
  make(true);
  mn->onWmanActivation();
  EXPECT_EQ(port.discoveries, 1);
  mn->onWmanActivation();
  EXPECT_EQ(port.discoveries, 1);
  mn->onBsDiscovered(NodeId::bs());
  scanWith({});
  mn->onHandoffTarget(HandoffTargetMessage{});
  EXPECT_EQ(port.vertical, (std::vector<NodeId>{NodeId::bs()}));
  EXPECT_EQ(mn->phase(), MnPhase::VerticalEntry);
  mn->onVerticalDone(true);
  EXPECT_EQ(mn->phase(), MnPhase::OnWman);
}

TEST_F(MnAgentTest, EmptyCandidatesWithoutBsBacksOff)
{
  make(false);
  mn->onWmanActivation();
  EXPECT_EQ(port.discoveries, 0);
  scanWith({});
  mn->onHandoffTarget(HandoffTargetMessage{});
  EXPECT_TRUE(port.vertical.empty());
  EXPECT_EQ(mn->phase(), MnPhase::Idle);
  mn->onDegradation();
  EXPECT_EQ(mn->phase(), MnPhase::Idle); // still backing off
}

TEST_F(MnAgentTest, ReturnsWhenTheApHasRoom)
{
  make(true);
  mn->onWmanActivation();
  mn->onBsDiscovered(NodeId::bs());
  scanWith({});
  mn->onHandoffTarget(HandoffTargetMessage{});
  mn->onVerticalDone(true);
  port.home.reset();
  sched.runUntil(sched.now() + params.returnScanPeriod);
  ASSERT_EQ(mn->phase(), MnPhase::Returning);
  stepUntil({{NodeId::ap(2), 11, 25.0}}, [this] { return !port.foreign.empty(); });
  EXPECT_EQ(port.foreign[0].first.ap, NodeId::ap(2));
  mn->onLoadResponse(NodeId::ap(2), LoadResponse{BitRate::mbps(3.2), BitRate::mbps(1)});
  ASSERT_EQ(port.returns.size(), 1u);
  EXPECT_EQ(port.returns[0].ap, NodeId::ap(2));
}

TEST_F(MnAgentTest, StaysOnWmanWhenTheApIsTight)
{
  make(true);
  mn->onWmanActivation();
  mn->onBsDiscovered(NodeId::bs());
  scanWith({});
  mn->onHandoffTarget(HandoffTargetMessage{});
  mn->onVerticalDone(true);
  sched.runUntil(sched.now() + params.returnScanPeriod);
  stepUntil({{NodeId::ap(2), 11, 25.0}}, [this] { return !port.foreign.empty(); });
  mn->onLoadResponse(NodeId::ap(2), LoadResponse{BitRate::mbps(3.5), BitRate::kbps(700)});
  EXPECT_TRUE(port.returns.empty());
  EXPECT_EQ(mn->phase(), MnPhase::OnWman);
}
