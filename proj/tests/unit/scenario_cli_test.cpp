#include "wlanho/scenario/config_io.hpp"
#include "wlanho/scenario/presets.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace wlanho;

namespace {

std::string
presetPath(CaseId c)
{
  return std::string(WLANHO_PRESET_DIR) + "/case_" + std::string(toString(c)) + ".ini";
}

std::string
minimal()
{
  return "[ap.1]\nx = 0\ny = 0\nchannel = 1\nrange_m = 50\n"
         "[ap.2]\nx = 60\ny = 0\nchannel = 11\nrange_m = 50\n"
         "[mn.1]\nx = 30\ny = 0\nap = 1\nstart_s = 1\n";
}

} // namespace

TEST(Presets, ShippedFilesMatchTheBuiltScenarios)
{
  for (CaseId c : kAllCases) {
    auto fromFile = loadConfig(presetPath(c));
    EXPECT_EQ(fromFile, buildStandardScenario(c, 1)) << toString(c);
  }
}

TEST(Presets, CaseParameters)
{
  auto three = loadConfig(presetPath(CaseId::III));
  EXPECT_EQ(three.detection.mode, DetectionMode::Ewma);
  EXPECT_DOUBLE_EQ(three.detection.qlength, 1.3);
  EXPECT_FALSE(three.wman.enabled);
  EXPECT_FALSE(three.bs);

  auto six = buildStandardScenario(CaseId::VI, 1);
  EXPECT_TRUE(six.wman.enabled);
  EXPECT_DOUBLE_EQ(six.detection.qlength, 1.3);
  EXPECT_TRUE(six.bs);

  auto one = buildStandardScenario(CaseId::I, 1);
  EXPECT_EQ(one.detection.mode, DetectionMode::DropRate);
  EXPECT_DOUBLE_EQ(one.detection.dropThreshold, 0.01);
  EXPECT_DOUBLE_EQ(buildStandardScenario(CaseId::II, 1).detection.qlength, 10.0);
  EXPECT_DOUBLE_EQ(buildStandardScenario(CaseId::V, 1).detection.qlength, 10.0);
}

TEST(Presets, CommonParameters)
{
  for (CaseId c : kAllCases) {
    auto cfg = buildStandardScenario(c, 1);
    EXPECT_DOUBLE_EQ(cfg.detection.alpha, 0.1);
    EXPECT_EQ(cfg.handoff.delta, BitRate::kbps(250));
    EXPECT_EQ(cfg.handoff.tIgnore, std::chrono::seconds(1));
    EXPECT_EQ(cfg.handoff.tRepeat, std::chrono::milliseconds(200));
    EXPECT_EQ(cfg.handoff.nRepeat, 4u);
    EXPECT_EQ(cfg.sim.horizon, std::chrono::seconds(20));
  }
}

TEST(Presets, TopologyAndStartSchedule)
{
  auto cfg = buildStandardScenario(CaseId::I, 1);
  ASSERT_EQ(cfg.mns.size(), 15u);
  EXPECT_EQ(cfg.aps.at(1).channel, 1);
  EXPECT_EQ(cfg.aps.at(2).channel, 11);
  for (const auto& [i, mn] : cfg.mns) {
    EXPECT_EQ(mn.ap, 1);
    EXPECT_EQ(mn.start, std::chrono::seconds(i));
    for (const auto& [j, ap] : cfg.aps)
      EXPECT_LE(distance(mn.pos, ap.pos), ap.rangeM);
  }
  EXPECT_EQ(cfg.wired.bandwidth, BitRate::mbps(100));
  EXPECT_EQ(cfg.wired.delay, std::chrono::milliseconds(2));
  auto six = buildStandardScenario(CaseId::VI, 1);
  EXPECT_EQ(six.wman.capacity, BitRate::mbps(10));
}

TEST(ConfigParse, OmittedKeysTakeDefaults)
{
  auto cfg = parseConfig(minimal());
  EXPECT_EQ(cfg.handoff.delta, BitRate::bps(250'000));
  EXPECT_EQ(cfg.mac.queueCapacity, 100u);
}

TEST(ConfigParse, UnknownKeyRejectedWithLine)
{
  try {
    parseConfig("[handoff]\ndelta_bps = 1\nbogus = 2\n" + minimal());
    FAIL() << "expected ParseError";
  }
  catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
  }
}

TEST(ConfigParse, MalformedValue)
{
  EXPECT_THROW(parseConfig("[handoff]\ndelta_bps = fast\n" + minimal()), ParseError);
}

TEST(ConfigValidate, OverlappingApsOnTheSameChannel)
{
  std::string text = "[ap.1]\nx = 0\ny = 0\nchannel = 6\nrange_m = 50\n"
                     "[ap.2]\nx = 60\ny = 0\nchannel = 6\nrange_m = 50\n"
                     "[mn.1]\nx = 30\ny = 0\nap = 1\nstart_s = 1\n";
  EXPECT_THROW(parseConfig(text), ValidationError);
}

TEST(ConfigValidate, NonPositiveDuration)
{
  EXPECT_THROW(parseConfig("[handoff]\nt_ignore_ms = 0\n" + minimal()), ValidationError);
}

TEST(ConfigValidate, MnOutsideItsAp)
{
  auto cfg = buildStandardScenario(CaseId::I, 1);
  cfg.mns.at(1).pos = {500.0, 500.0};
  EXPECT_THROW(validate(cfg), ValidationError);
}

TEST(ConfigDump, RoundTrips)
{
  for (CaseId c : kAllCases) {
    auto cfg = buildStandardScenario(c, 9);
    cfg.mac.overhead = Duration(37);
    EXPECT_EQ(parseConfig(dumpConfig(cfg)), cfg);
  }
}

TEST(CaseIds, ParseAndPrint)
{
  for (CaseId c : kAllCases)
    EXPECT_EQ(parseCaseId(toString(c)), c);
  EXPECT_FALSE(parseCaseId("VII"));
}
