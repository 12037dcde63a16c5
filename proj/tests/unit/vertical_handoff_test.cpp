#include "wlanho/scenario/presets.hpp"
#include "wlanho/simulation.hpp"
#include "wlanho/vertical/policy.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace wlanho;

TEST(ReturnPolicy, EnoughSpare)
{
  // 1.0M >= 0.6M + 0.25M
  EXPECT_TRUE(shouldReturnToWlan(BitRate::bps(1'000'000), BitRate::bps(600'000),
                                 BitRate::bps(250'000)));
}

TEST(ReturnPolicy, NotEnoughSpare)
{
  EXPECT_FALSE(shouldReturnToWlan(BitRate::bps(700'000), BitRate::bps(600'000),
                                  BitRate::bps(250'000)));
}

TEST(BsAdmission, ThreeFlowsFitTheBackhaul)
{
  // 1.8M on a 10M link leaves room for another 600k
  EXPECT_TRUE(bsAdmits(BitRate::mbps(1.8), BitRate::kbps(600), BitRate::mbps(10)));
  EXPECT_FALSE(bsAdmits(BitRate::mbps(9.8), BitRate::kbps(600), BitRate::mbps(10)));
}

namespace {

const RunResults&
caseRun(CaseId c, std::uint64_t seed = 1)
{
  static std::map<std::pair<CaseId, std::uint64_t>, RunResults> cache;
  auto it = cache.find({c, seed});
  if (it == cache.end()) {
    Simulation sim(buildStandardScenario(c, seed));
    it = cache.emplace(std::make_pair(c, seed), sim.run()).first;
  }
  return it->second;
}

} // namespace

TEST(VerticalHandoff, NoBsInCasesWithoutWman)
{
  for (CaseId c : {CaseId::I, CaseId::II, CaseId::III}) {
    for (const auto& h : caseRun(c).handoffs)
      EXPECT_EQ(h.kind, HandoffKind::Horizontal);
    for (const auto& [t, onBs] : caseRun(c).bsAttached)
      EXPECT_TRUE(onBs.empty());
  }
}

TEST(VerticalHandoff, SomeMnsMoveUpWhenTheEssIsFull)
{
  for (CaseId c : {CaseId::IV, CaseId::V, CaseId::VI}) {
    const auto& r = caseRun(c);
    std::set<NodeId> up;
    for (const auto& h : r.handoffs)
      if (h.kind == HandoffKind::VerticalUp)
        up.insert(h.mn);
    EXPECT_GE(up.size(), 1u) << toString(c);
    EXPECT_LE(r.bsAttached.at(19).size(), 3u) << toString(c);
  }
}

TEST(VerticalHandoff, ReceptionGapStaysUnderFiftyMs)
{
  for (CaseId c : {CaseId::IV, CaseId::V, CaseId::VI})
    for (const auto& h : caseRun(c).handoffs) {
      if (h.kind != HandoffKind::Horizontal) {
        EXPECT_LT(h.gap.count(), 50'000) << h.mn.name();
      }
    }
}

TEST(VerticalHandoff, NoPacketReachesARetiredAttachment)
{
  for (CaseId c : {CaseId::IV, CaseId::V, CaseId::VI})
    EXPECT_EQ(caseRun(c).routeOrderViolations, 0u);
}

TEST(VerticalHandoff, MoveUpIsDecidedBeforeItCompletes)
{
  for (const auto& h : caseRun(CaseId::VI).handoffs) {
    EXPECT_LE(h.decidedAt, h.completedAt);
    if (h.kind == HandoffKind::VerticalUp) {
      EXPECT_EQ(h.to, NodeId::bs());
      EXPECT_EQ(h.from.kind, NodeKind::AP);
    }
  }
}
