#pragma once

#include "wlanho/handoff/messages.hpp"
#include "wlanho/net/bit_rate.hpp"
#include "wlanho/net/coverage.hpp"
#include "wlanho/sim/time.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wlanho {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ConfigError {
public:
  ParseError(std::size_t line, const std::string& what)
    : ConfigError("line " + std::to_string(line) + ": " + what)
    , m_line(line)
  {
  }

  std::size_t line() const { return m_line; }

private:
  std::size_t m_line;
};

class ValidationError : public ConfigError {
public:
  ValidationError(std::string key, const std::string& reason)
    : ConfigError(key + ": " + reason)
    , m_key(std::move(key))
  {
  }

  const std::string& key() const { return m_key; }

private:
  std::string m_key;
};

enum class DetectionMode { DropRate, Ewma };
enum class LoadMetric { Offered, Carried };

struct ApConfig {
  Position pos;
  ChannelId channel = 1;
  double rangeM = 50.0;

  bool operator==(const ApConfig&) const = default;
};

struct BsConfig {
  Position pos;
  double rangeM = 500.0;

  bool operator==(const BsConfig&) const = default;
};

struct MnConfig {
  Position pos;
  /// index of the AP the MN is associated with at t = 0
  std::uint16_t ap = 1;
  /// when its CBR flow starts
  Duration start{0};

  bool operator==(const MnConfig&) const = default;
};

struct ScenarioConfig {
  struct Sim {
    Duration horizon = std::chrono::seconds(20);
    std::uint64_t seed = 1;
    /// false runs the baseline: no detection, nobody moves
    bool scheme = true;
    bool operator==(const Sim&) const = default;
  } sim;

  struct Detection {
    DetectionMode mode = DetectionMode::Ewma;
    double alpha = 0.1;
    double qlength = 10.0;
    /// EWMA level that switches the WMAN interface on; qlength when unset
    std::optional<double> activationLimit;
    double dropThreshold = 0.01;
    Duration samplePeriod = std::chrono::milliseconds(20);
    Duration window = std::chrono::milliseconds(1000);
    std::uint32_t warmupSamples = 3;
    bool operator==(const Detection&) const = default;

    double wmanLimit() const { return activationLimit.value_or(qlength); }
  } detection;

  struct Scan {
    Duration period = std::chrono::milliseconds(100);
    Duration dwell = std::chrono::milliseconds(5);
    Duration switchTime = std::chrono::milliseconds(1);
    Duration responseWait = std::chrono::milliseconds(20);
    bool operator==(const Scan&) const = default;
  } scan;

  struct Handoff {
    BitRate delta = BitRate::kbps(250);
    Duration tIgnore = std::chrono::milliseconds(1000);
    Duration tRepeat = std::chrono::milliseconds(200);
    std::uint32_t nRepeat = 4;
    Duration loadResponseTimeout = std::chrono::milliseconds(50);
    Duration retryBackoff = std::chrono::milliseconds(1000);
    std::uint32_t controlBytes = 128;
    bool operator==(const Handoff&) const = default;
  } handoff;

  struct Wman {
    bool enabled = false;
    Duration entryLatency = std::chrono::milliseconds(20);
    Duration scanLatency = std::chrono::milliseconds(50);
    Duration returnScanPeriod = std::chrono::seconds(5);
    BitRate capacity = BitRate::mbps(10);
    bool operator==(const Wman&) const = default;
  } wman;

  struct Mac {
    BitRate capacity = BitRate::bps(4'200'000);
    Duration overhead{0};
    Duration backoffMax{0};
    std::uint32_t queueCapacity = 100;
    bool operator==(const Mac&) const = default;
  } mac;

  struct Wired {
    BitRate bandwidth = BitRate::mbps(100);
    Duration delay = std::chrono::milliseconds(2);
    BitRate bsBandwidth = BitRate::mbps(10);
    Duration bsDelay = std::chrono::milliseconds(2);
    bool operator==(const Wired&) const = default;
  } wired;

  RadioParams radio;

  struct Load {
    LoadMetric metric = LoadMetric::Offered;
    Duration window = std::chrono::milliseconds(1000);
    bool operator==(const Load&) const = default;
  } load;

  struct Traffic {
    std::uint32_t packetBytes = 1500;
    Duration interval = std::chrono::milliseconds(20);
    bool operator==(const Traffic&) const = default;
  } traffic;

  std::map<std::uint16_t, ApConfig> aps;
  std::optional<BsConfig> bs;
  std::map<std::uint16_t, MnConfig> mns;

  bool operator==(const ScenarioConfig&) const = default;
};

namespace detail {

inline void
requirePositive(Duration d, const char* key)
{
  if (d.count() <= 0)
    throw ValidationError(key, "must be a positive duration");
}

inline void
requirePositive(BitRate r, const char* key)
{
  if (!(r.value() > 0.0) || !std::isfinite(r.value()))
    throw ValidationError(key, "must be a positive rate");
}

} // namespace detail

/// Throws ValidationError naming the first offending key.
inline void
validate(const ScenarioConfig& c)
{
  using detail::requirePositive;
  requirePositive(c.sim.horizon, "sim.horizon_s");

  if (!(c.detection.alpha > 0.0 && c.detection.alpha <= 1.0))
    throw ValidationError("detection.alpha", "must be in (0, 1]");
  if (!(c.detection.qlength > 0.0))
    throw ValidationError("detection.qlength", "must be positive");
  if (c.detection.activationLimit && !(*c.detection.activationLimit > 0.0))
    throw ValidationError("detection.activation_limit", "must be positive");
  if (!(c.detection.dropThreshold > 0.0 && c.detection.dropThreshold < 1.0))
    throw ValidationError("detection.drop_threshold", "must be in (0, 1)");
  requirePositive(c.detection.samplePeriod, "detection.sample_period_ms");
  requirePositive(c.detection.window, "detection.window_ms");

  requirePositive(c.scan.period, "scan.period_ms");
  requirePositive(c.scan.dwell, "scan.dwell_ms");
  requirePositive(c.scan.switchTime, "scan.switch_ms");
  requirePositive(c.scan.responseWait, "scan.response_wait_ms");

  requirePositive(c.handoff.delta, "handoff.delta_bps");
  requirePositive(c.handoff.tIgnore, "handoff.t_ignore_ms");
  requirePositive(c.handoff.tRepeat, "handoff.t_repeat_ms");
  if (c.handoff.nRepeat == 0)
    throw ValidationError("handoff.n_repeat", "must be at least 1");
  requirePositive(c.handoff.loadResponseTimeout, "handoff.load_response_timeout_ms");
  requirePositive(c.handoff.retryBackoff, "handoff.retry_backoff_ms");
  if (c.handoff.controlBytes == 0)
    throw ValidationError("handoff.control_bytes", "must be positive");

  requirePositive(c.wman.entryLatency, "wman.entry_latency_ms");
  requirePositive(c.wman.scanLatency, "wman.scan_latency_ms");
  requirePositive(c.wman.returnScanPeriod, "wman.return_scan_period_s");
  requirePositive(c.wman.capacity, "wman.capacity_bps");
  if (c.wman.enabled && !c.bs)
    throw ValidationError("wman.enabled", "requires a [bs] section");

  requirePositive(c.mac.capacity, "mac.capacity_bps");
  if (c.mac.overhead.count() < 0)
    throw ValidationError("mac.overhead_us", "must not be negative");
  if (c.mac.backoffMax.count() < 0)
    throw ValidationError("mac.backoff_max_us", "must not be negative");
  if (c.mac.queueCapacity == 0)
    throw ValidationError("mac.queue_capacity", "must be at least 1");

  requirePositive(c.wired.bandwidth, "wired.bandwidth_bps");
  requirePositive(c.wired.delay, "wired.delay_ms");
  requirePositive(c.wired.bsBandwidth, "wired.bs_bandwidth_bps");
  requirePositive(c.wired.bsDelay, "wired.bs_delay_ms");

  if (!(c.radio.pathlossExponent > 0.0))
    throw ValidationError("radio.pathloss_exponent", "must be positive");

  requirePositive(c.load.window, "load.window_ms");

  if (c.traffic.packetBytes == 0)
    throw ValidationError("traffic.packet_bytes", "must be positive");
  requirePositive(c.traffic.interval, "traffic.interval_ms");

  if (c.aps.empty())
    throw ValidationError("ap", "at least one [ap.N] section is required");
  for (const auto& [i, ap] : c.aps) {
    std::string key = "ap." + std::to_string(i);
    if (i == 0)
      throw ValidationError(key, "indices start at 1");
    if (ap.channel < 1 || ap.channel > 11)
      throw ValidationError(key + ".channel", "must be in 1..11");
    if (!(ap.rangeM > 0.0))
      throw ValidationError(key + ".range_m", "must be positive");
  }
  for (auto a = c.aps.begin(); a != c.aps.end(); ++a) {
    for (auto b = std::next(a); b != c.aps.end(); ++b) {
      bool coverageOverlaps = distance(a->second.pos, b->second.pos) <
                              a->second.rangeM + b->second.rangeM;
      if (coverageOverlaps && std::abs(a->second.channel - b->second.channel) < 5)
        throw ValidationError("ap." + std::to_string(b->first) + ".channel",
                              "overlaps the channel of AP" + std::to_string(a->first) +
                                " while their coverage overlaps");
    }
  }
  if (c.bs && !(c.bs->rangeM > 0.0))
    throw ValidationError("bs.range_m", "must be positive");

  for (const auto& [i, mn] : c.mns) {
    std::string key = "mn." + std::to_string(i);
    if (i == 0)
      throw ValidationError(key, "indices start at 1");
    auto ap = c.aps.find(mn.ap);
    if (ap == c.aps.end())
      throw ValidationError(key + ".ap", "no such AP");
    if (distance(mn.pos, ap->second.pos) > ap->second.rangeM)
      throw ValidationError(key + ".ap", "MN is outside the AP's coverage");
    if (mn.start.count() < 0)
      throw ValidationError(key + ".start_s", "must not be negative");
  }
}

} // namespace wlanho
