#include "wlanho/scan/channel_list.hpp"
#include "wlanho/scan/scanner.hpp"

#include "fakes.hpp"

#include <gtest/gtest.h>

using namespace wlanho;
using namespace std::chrono_literals;

TEST(ChannelList, Middle)
{
  EXPECT_EQ(buildChannelList(6), (std::vector<ChannelId>{1, 11}));
}

TEST(ChannelList, Edges)
{
  EXPECT_EQ(buildChannelList(1), (std::vector<ChannelId>{6, 7, 8, 9, 10, 11}));
  EXPECT_EQ(buildChannelList(11), (std::vector<ChannelId>{1, 2, 3, 4, 5, 6}));
}

TEST(ChannelList, EveryEntryIsFiveAway)
{
  for (ChannelId home = 1; home <= 11; ++home)
    for (ChannelId c : buildChannelList(home))
      EXPECT_GE(std::abs(c - home), 5);
}

TEST(ChannelList, RejectsInvalidHome)
{
  EXPECT_THROW(buildChannelList(0), std::out_of_range);
  EXPECT_THROW(buildChannelList(12), std::out_of_range);
}

class ScannerTest : public ::testing::Test {
protected:
  Scheduler sched;
  fakes::FakeMnPort port{sched};
  InterleavedScanner scanner{ScanParams{}, port};
  std::vector<std::vector<ApEntry>> completed;

  void
  SetUp() override
  {
    scanner.onComplete([this](const std::vector<ApEntry>& l) { completed.push_back(l); });
  }
};

TEST_F(ScannerTest, ProbesOneChannelPerTick)
{
  ASSERT_TRUE(scanner.start(6));
  EXPECT_EQ(scanner.nextChannel(), 1);
  sched.runUntil(SimTime::fromMicros(100'000));
  EXPECT_EQ(port.probed, (std::vector<ChannelId>{1}));
  EXPECT_EQ(scanner.nextChannel(), 11);
  EXPECT_TRUE(scanner.active());
}

TEST_F(ScannerTest, CompletesAfterTheLastChannel)
{
  scanner.start(6);
  sched.runUntil(SimTime::fromSeconds(1));
  EXPECT_EQ(port.probed, (std::vector<ChannelId>{1, 11}));
  ASSERT_EQ(completed.size(), 1u);
  EXPECT_FALSE(scanner.active());
  EXPECT_EQ(sched.totals().pending, 0u);
}

TEST_F(ScannerTest, ProbeSpacing)
{
  // ticks at T, then T + blackout + T after each probe
  scanner.start(1);
  std::vector<SimTime> ticks;
  sched.setTrace([&](const TraceEntry& e) { ticks.push_back(e.at); });
  sched.runUntil(SimTime::fromSeconds(2));
  ASSERT_EQ(port.probed.size(), 6u);
  ASSERT_GE(ticks.size(), 6u);
  for (std::size_t i = 1; i < 6; ++i)
    EXPECT_EQ(ticks[i] - ticks[i - 1], Duration(107'000));
}

TEST_F(ScannerTest, SilentChannelLeavesListEmpty)
{
  scanner.start(6);
  sched.runUntil(SimTime::fromSeconds(1));
  ASSERT_EQ(completed.size(), 1u);
  EXPECT_TRUE(completed[0].empty());
}

TEST_F(ScannerTest, OneEntryPerRespondingAp)
{
  scanner.start(1);
  while (port.probed.empty() || port.probed.back() != 11)
    sched.runUntil(sched.now() + 1ms);
  scanner.onProbeResponse({NodeId::ap(2), 11, 30.0});
  scanner.onProbeResponse({NodeId::ap(3), 11, 20.0});
  scanner.onProbeResponse({NodeId::ap(2), 11, 31.0});
  sched.runUntil(SimTime::fromSeconds(2));
  ASSERT_EQ(completed.size(), 1u);
  ASSERT_EQ(completed[0].size(), 2u);
  EXPECT_EQ(completed[0][0].sinrDb, 31.0);
}

TEST_F(ScannerTest, SecondStartWhileRunningIsRefused)
{
  EXPECT_TRUE(scanner.start(6));
  EXPECT_FALSE(scanner.start(1));
  EXPECT_EQ(scanner.channelList(), (std::vector<ChannelId>{1, 11}));
}

TEST_F(ScannerTest, NoHomeScansEverything)
{
  scanner.start(std::nullopt);
  EXPECT_EQ(scanner.channelList().size(), 11u);
}

TEST_F(ScannerTest, CancelStopsTheCycle)
{
  scanner.start(1);
  sched.runUntil(SimTime::fromMicros(150'000));
  scanner.cancel();
  sched.runUntil(SimTime::fromSeconds(2));
  EXPECT_EQ(port.probed.size(), 1u);
  EXPECT_TRUE(completed.empty());
}
