#include "wlanho/detect/drop_rate_tracker.hpp"
#include "wlanho/detect/ewma_tracker.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace wlanho;

namespace {

// warmed-up tracker sitting at `e`
EwmaTracker
at(double e, double threshold, double alpha = 0.1)
{
  EwmaTracker t(alpha, threshold, 0);
  t.update(e);
  return t;
}

} // namespace

TEST(Ewma, WorkedStep)
{
  EwmaTracker t(0.1, 10.0);
  t.seed(2.0);
  EXPECT_NEAR(t.update(5.0), 2.3, 1e-12);
}

TEST(Ewma, ConvergesMonotonicallyFromBelow)
{
  EwmaTracker t(0.1, 100.0);
  t.seed(0.0);
  double prev = 0.0;
  for (int i = 0; i < 300; ++i) {
    double e = t.update(10.0);
    EXPECT_GT(e, prev);
    EXPECT_LT(e, 10.0);
    prev = e;
  }
  EXPECT_NEAR(prev, 10.0, 1e-9);
}

TEST(Ewma, AlphaOneFollowsInput)
{
  EwmaTracker t(1.0, 100.0);
  t.seed(3.0);
  for (double y : {7.0, 0.0, 42.0})
    EXPECT_EQ(t.update(y), y);
}

TEST(Ewma, RejectsAlphaOutsideUnitInterval)
{
  EXPECT_THROW(EwmaTracker(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(EwmaTracker(1.5, 1.0), std::invalid_argument);
}

TEST(Ewma, StaysWithinInputHull)
{
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> y(0.0, 100.0);
  for (int s = 0; s < 200; ++s) {
    EwmaTracker t(0.1, 1e9);
    double first = y(g);
    t.seed(first);
    double lo = first;
    double hi = first;
    for (int i = 0; i < 100; ++i) {
      double v = y(g);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      double e = t.update(v);
      EXPECT_GE(e, lo - 1e-9);
      EXPECT_LE(e, hi + 1e-9);
    }
  }
}

TEST(Ewma, LowThresholdFiresOnceOnRise)
{
  EwmaTracker t = at(1.2, 1.3, 1.0);
  EXPECT_FALSE(t.crossed());
  t.update(1.4);
  EXPECT_TRUE(t.crossed());
  EXPECT_FALSE(t.crossed());
  t.update(1.5);
  EXPECT_FALSE(t.crossed());
}

TEST(Ewma, SteadyBelowNeverFires)
{
  EwmaTracker t = at(9.9, 10.0);
  for (int i = 0; i < 1000; ++i) {
    t.update(9.9);
    EXPECT_FALSE(t.crossed());
  }
}

TEST(Ewma, OscillationFiresPerUpwardCrossing)
{
  EwmaTracker t = at(1.2, 1.3, 1.0);
  int fired = 0;
  for (double y : {1.4, 1.2, 1.4}) {
    t.update(y);
    fired += t.crossed();
  }
  EXPECT_EQ(fired, 2);
}

TEST(Ewma, SeededAboveThresholdWaitsForADip)
{
  EwmaTracker t(1.0, 1.3, 0);
  t.update(4.0);
  EXPECT_FALSE(t.crossed());
  t.update(1.0);
  t.update(2.0);
  EXPECT_TRUE(t.crossed());
}

TEST(Ewma, RearmAllowsRefireWithoutDip)
{
  EwmaTracker t = at(1.0, 1.3, 1.0);
  t.update(2.0);
  EXPECT_TRUE(t.crossed());
  t.update(2.0);
  EXPECT_FALSE(t.crossed());
  t.rearm();
  EXPECT_TRUE(t.crossed());
}

TEST(Ewma, NoCrossingDuringWarmup)
{
  EwmaTracker t(1.0, 1.3, 3);
  t.update(0.0);
  t.update(5.0);
  EXPECT_FALSE(t.crossed());
  t.update(5.0);
  t.update(5.0);
  EXPECT_TRUE(t.warmedUp());
  EXPECT_TRUE(t.crossed());
}

TEST(DropRate, NoDropsNoTrigger)
{
  DropRateTracker t(std::chrono::seconds(1), 0.01);
  for (int i = 0; i < 100; ++i)
    t.update(SimTime::fromMicros(i * 1000), SendOutcome::Sent);
  EXPECT_EQ(t.rate(), 0.0);
  EXPECT_FALSE(t.crossed());
}

TEST(DropRate, TwoInHundredTriggers)
{
  DropRateTracker t(std::chrono::seconds(1), 0.01);
  for (int i = 0; i < 98; ++i)
    t.update(SimTime::fromMicros(i * 1000), SendOutcome::Sent);
  t.update(SimTime::fromMicros(98'000), SendOutcome::Dropped);
  t.update(SimTime::fromMicros(99'000), SendOutcome::Dropped);
  EXPECT_DOUBLE_EQ(t.rate(), 0.02);
  EXPECT_TRUE(t.crossed());
  EXPECT_FALSE(t.crossed());
}

TEST(DropRate, ExactlyOnePercentDoesNotTrigger)
{
  DropRateTracker t(std::chrono::seconds(1), 0.01);
  for (int i = 0; i < 99; ++i)
    t.update(SimTime::fromMicros(i * 1000), SendOutcome::Sent);
  t.update(SimTime::fromMicros(99'000), SendOutcome::Dropped);
  EXPECT_DOUBLE_EQ(t.rate(), 0.01);
  EXPECT_FALSE(t.crossed());
}

TEST(DropRate, OldEventsLeaveTheWindow)
{
  DropRateTracker t(std::chrono::seconds(1), 0.01);
  t.update(SimTime::fromMicros(0), SendOutcome::Dropped);
  t.advance(SimTime::fromMicros(1'000'000));
  EXPECT_EQ(t.attemptsInWindow(), 0u);
  EXPECT_EQ(t.rate(), 0.0);
}

TEST(DropRate, LateDropTurnsASendIntoADrop)
{
  DropRateTracker t(std::chrono::seconds(1), 0.01);
  for (int i = 0; i < 50; ++i)
    t.update(SimTime::fromMicros(i * 1000), SendOutcome::Sent);
  t.lateDrop(SimTime::fromMicros(60'000));
  EXPECT_EQ(t.attemptsInWindow(), 50u);
  EXPECT_EQ(t.dropsInWindow(), 1u);
  EXPECT_TRUE(t.crossed());
}
