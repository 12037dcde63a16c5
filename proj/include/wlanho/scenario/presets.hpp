#pragma once

#include "wlanho/scenario/config.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace wlanho {

enum class CaseId { I = 1, II, III, IV, V, VI };

inline constexpr std::array<CaseId, 6> kAllCases{CaseId::I,  CaseId::II, CaseId::III,
                                                 CaseId::IV, CaseId::V,  CaseId::VI};

constexpr std::string_view
toString(CaseId c)
{
  switch (c) {
    case CaseId::I: return "I";
    case CaseId::II: return "II";
    case CaseId::III: return "III";
    case CaseId::IV: return "IV";
    case CaseId::V: return "V";
    case CaseId::VI: return "VI";
  }
  return "?";
}

inline std::optional<CaseId>
parseCaseId(std::string_view s)
{
  for (CaseId c : kAllCases)
    if (toString(c) == s)
      return c;
  return std::nullopt;
}

struct CasePreset {
  CaseId id;
  DetectionMode mode;
  double qlength;
  bool wman;
};

constexpr CasePreset
casePreset(CaseId c)
{
  switch (c) {
    case CaseId::I: return {c, DetectionMode::DropRate, 10.0, false};
    case CaseId::II: return {c, DetectionMode::Ewma, 10.0, false};
    case CaseId::III: return {c, DetectionMode::Ewma, 1.3, false};
    case CaseId::IV: return {c, DetectionMode::DropRate, 10.0, true};
    case CaseId::V: return {c, DetectionMode::Ewma, 10.0, true};
    case CaseId::VI: return {c, DetectionMode::Ewma, 1.3, true};
  }
  return {c, DetectionMode::Ewma, 10.0, false};
}

/**
 * Two overlapping BSSs (AP1 on channel 1, AP2 on channel 11), a BS
 * covering both when the WMAN is in play, and 15 MNs on a 5 x 3 grid inside the overlap, all
 * starting on AP1. MN i starts its CBR flow at second i.
 */
inline ScenarioConfig
buildStandardScenario(CaseId id, std::uint64_t seed)
{
  CasePreset p = casePreset(id);
  ScenarioConfig c;
  c.sim.seed = seed;
  c.detection.mode = p.mode;
  c.detection.qlength = p.qlength;
  c.wman.enabled = p.wman;

  c.aps[1] = ApConfig{{0.0, 0.0}, 1, 50.0};
  c.aps[2] = ApConfig{{60.0, 0.0}, 11, 50.0};
  if (p.wman)
    c.bs = BsConfig{{30.0, 100.0}, 500.0};

  for (std::uint16_t i = 1; i <= 15; ++i) {
    int col = (i - 1) % 5;
    int row = (i - 1) / 5;
    MnConfig mn;
    mn.pos = {22.0 + 4.0 * col, -6.0 + 6.0 * row};
    mn.ap = 1;
    mn.start = std::chrono::seconds(i);
    c.mns[i] = mn;
  }
  return c;
}

} // namespace wlanho
