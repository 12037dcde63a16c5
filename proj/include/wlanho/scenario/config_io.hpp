#pragma once

#include "wlanho/scenario/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace wlanho {

/*
 * Scenario file grammar (UTF-8, line oriented):
 *
 *   file    := { line }
 *   line    := blank | comment | section | entry
 *   comment := ('#' | ';') any*
 *   section := '[' name ']'            e.g. [handoff], [ap.2], [mn.15], [bs]
 *   entry   := key '=' value           key is relative to the open section
 *
 * Outside any section a key must be fully qualified ("handoff.delta_bps").
 * Every key may appear at most once. Omitted keys keep their defaults.
 */

namespace config_detail {

inline std::string_view
trim(std::string_view s)
{
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front()))
    s.remove_prefix(1);
  while (!s.empty() && ws(s.back()))
    s.remove_suffix(1);
  return s;
}

inline double
toDouble(std::string_view v, std::size_t line, std::string_view key)
{
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    throw ParseError(line, "'" + std::string(key) + "' expects a number, got '" +
                             std::string(v) + "'");
  return out;
}

inline std::uint64_t
toUnsigned(std::string_view v, std::size_t line, std::string_view key)
{
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ParseError(line, "'" + std::string(key) + "' expects a non-negative integer, got '" +
                             std::string(v) + "'");
  return out;
}

inline bool
toBool(std::string_view v, std::size_t line, std::string_view key)
{
  if (v == "true" || v == "yes" || v == "on" || v == "1")
    return true;
  if (v == "false" || v == "no" || v == "off" || v == "0")
    return false;
  throw ParseError(line, "'" + std::string(key) + "' expects true or false, got '" +
                           std::string(v) + "'");
}

/// Shortest text that parses back to the same double.
inline std::string
fmt(double v)
{
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

inline std::string
fmt(std::uint64_t v)
{
  return std::to_string(v);
}

struct Field {
  std::string key;
  std::function<void(ScenarioConfig&, std::string_view, std::size_t)> set;
  /// nullopt: omitted from dumps
  std::function<std::optional<std::string>(const ScenarioConfig&)> get;
};

template <typename Acc>
Field
durationField(std::string key, double usPerUnit, Acc acc)
{
  Field f;
  f.key = key;
  f.set = [key, usPerUnit, acc](ScenarioConfig& c, std::string_view v, std::size_t line) {
    acc(c) = Duration(std::llround(toDouble(v, line, key) * usPerUnit));
  };
  f.get = [usPerUnit, acc](const ScenarioConfig& c) -> std::optional<std::string> {
    return fmt(static_cast<double>(acc(c).count()) / usPerUnit);
  };
  return f;
}

template <typename Acc>
Field
rateField(std::string key, Acc acc)
{
  Field f;
  f.key = key;
  f.set = [key, acc](ScenarioConfig& c, std::string_view v, std::size_t line) {
    acc(c) = BitRate(toDouble(v, line, key));
  };
  f.get = [acc](const ScenarioConfig& c) -> std::optional<std::string> {
    return fmt(acc(c).value());
  };
  return f;
}

template <typename Acc>
Field
doubleField(std::string key, Acc acc)
{
  Field f;
  f.key = key;
  f.set = [key, acc](ScenarioConfig& c, std::string_view v, std::size_t line) {
    acc(c) = toDouble(v, line, key);
  };
  f.get = [acc](const ScenarioConfig& c) -> std::optional<std::string> { return fmt(acc(c)); };
  return f;
}

template <typename T, typename Acc>
Field
unsignedField(std::string key, Acc acc)
{
  Field f;
  f.key = key;
  f.set = [key, acc](ScenarioConfig& c, std::string_view v, std::size_t line) {
    auto raw = toUnsigned(v, line, key);
    if (raw > std::numeric_limits<T>::max())
      throw ParseError(line, "'" + key + "' is out of range");
    acc(c) = static_cast<T>(raw);
  };
  f.get = [acc](const ScenarioConfig& c) -> std::optional<std::string> {
    return fmt(static_cast<std::uint64_t>(acc(c)));
  };
  return f;
}

template <typename Acc>
Field
boolField(std::string key, Acc acc)
{
  Field f;
  f.key = key;
  f.set = [key, acc](ScenarioConfig& c, std::string_view v, std::size_t line) {
    acc(c) = toBool(v, line, key);
  };
  f.get = [acc](const ScenarioConfig& c) -> std::optional<std::string> {
    return std::string(acc(c) ? "true" : "false");
  };
  return f;
}

constexpr double kMs = 1e3;
constexpr double kS = 1e6;
constexpr double kUs = 1.0;

inline const std::vector<Field>&
globalFields()
{
  static const std::vector<Field> fields = [] {
    std::vector<Field> v;
    v.push_back(durationField("sim.horizon_s", kS, [](auto& c) -> auto& { return c.sim.horizon; }));
    v.push_back(unsignedField<std::uint64_t>("sim.seed", [](auto& c) -> auto& { return c.sim.seed; }));
    v.push_back(boolField("sim.scheme", [](auto& c) -> auto& { return c.sim.scheme; }));

    {
      Field f;
      f.key = "detection.mode";
      f.set = [](ScenarioConfig& c, std::string_view v, std::size_t line) {
        if (v == "drop_rate")
          c.detection.mode = DetectionMode::DropRate;
        else if (v == "ewma")
          c.detection.mode = DetectionMode::Ewma;
        else
          throw ParseError(line, "detection.mode must be drop_rate or ewma");
      };
      f.get = [](const ScenarioConfig& c) -> std::optional<std::string> {
        return std::string(c.detection.mode == DetectionMode::Ewma ? "ewma" : "drop_rate");
      };
      v.push_back(f);
    }
    v.push_back(doubleField("detection.alpha", [](auto& c) -> auto& { return c.detection.alpha; }));
    v.push_back(doubleField("detection.qlength", [](auto& c) -> auto& { return c.detection.qlength; }));
    {
      Field f;
      f.key = "detection.activation_limit";
      f.set = [](ScenarioConfig& c, std::string_view v, std::size_t line) {
        c.detection.activationLimit = toDouble(v, line, "detection.activation_limit");
      };
      f.get = [](const ScenarioConfig& c) -> std::optional<std::string> {
        if (!c.detection.activationLimit)
          return std::nullopt;
        return fmt(*c.detection.activationLimit);
      };
      v.push_back(f);
    }
    v.push_back(doubleField("detection.drop_threshold",
                            [](auto& c) -> auto& { return c.detection.dropThreshold; }));
    v.push_back(durationField("detection.sample_period_ms", kMs,
                              [](auto& c) -> auto& { return c.detection.samplePeriod; }));
    v.push_back(durationField("detection.window_ms", kMs,
                              [](auto& c) -> auto& { return c.detection.window; }));
    v.push_back(unsignedField<std::uint32_t>("detection.warmup_samples",
                                             [](auto& c) -> auto& { return c.detection.warmupSamples; }));

    v.push_back(durationField("scan.period_ms", kMs, [](auto& c) -> auto& { return c.scan.period; }));
    v.push_back(durationField("scan.dwell_ms", kMs, [](auto& c) -> auto& { return c.scan.dwell; }));
    v.push_back(durationField("scan.switch_ms", kMs, [](auto& c) -> auto& { return c.scan.switchTime; }));
    v.push_back(durationField("scan.response_wait_ms", kMs,
                              [](auto& c) -> auto& { return c.scan.responseWait; }));
    {
      // same setting as wman.return_scan_period_s; never dumped
      Field f = durationField("scan.return_period_s", kS,
                              [](auto& c) -> auto& { return c.wman.returnScanPeriod; });
      f.get = [](const ScenarioConfig&) -> std::optional<std::string> { return std::nullopt; };
      v.push_back(f);
    }

    v.push_back(rateField("handoff.delta_bps", [](auto& c) -> auto& { return c.handoff.delta; }));
    v.push_back(durationField("handoff.t_ignore_ms", kMs, [](auto& c) -> auto& { return c.handoff.tIgnore; }));
    v.push_back(durationField("handoff.t_repeat_ms", kMs, [](auto& c) -> auto& { return c.handoff.tRepeat; }));
    v.push_back(unsignedField<std::uint32_t>("handoff.n_repeat",
                                             [](auto& c) -> auto& { return c.handoff.nRepeat; }));
    v.push_back(durationField("handoff.load_response_timeout_ms", kMs,
                              [](auto& c) -> auto& { return c.handoff.loadResponseTimeout; }));
    v.push_back(durationField("handoff.retry_backoff_ms", kMs,
                              [](auto& c) -> auto& { return c.handoff.retryBackoff; }));
    v.push_back(unsignedField<std::uint32_t>("handoff.control_bytes",
                                             [](auto& c) -> auto& { return c.handoff.controlBytes; }));

    v.push_back(boolField("wman.enabled", [](auto& c) -> auto& { return c.wman.enabled; }));
    v.push_back(durationField("wman.entry_latency_ms", kMs,
                              [](auto& c) -> auto& { return c.wman.entryLatency; }));
    v.push_back(durationField("wman.scan_latency_ms", kMs,
                              [](auto& c) -> auto& { return c.wman.scanLatency; }));
    v.push_back(durationField("wman.return_scan_period_s", kS,
                              [](auto& c) -> auto& { return c.wman.returnScanPeriod; }));
    v.push_back(rateField("wman.capacity_bps", [](auto& c) -> auto& { return c.wman.capacity; }));

    v.push_back(rateField("mac.capacity_bps", [](auto& c) -> auto& { return c.mac.capacity; }));
    v.push_back(durationField("mac.overhead_us", kUs, [](auto& c) -> auto& { return c.mac.overhead; }));
    v.push_back(durationField("mac.backoff_max_us", kUs, [](auto& c) -> auto& { return c.mac.backoffMax; }));
    v.push_back(unsignedField<std::uint32_t>("mac.queue_capacity",
                                             [](auto& c) -> auto& { return c.mac.queueCapacity; }));

    v.push_back(rateField("wired.bandwidth_bps", [](auto& c) -> auto& { return c.wired.bandwidth; }));
    v.push_back(durationField("wired.delay_ms", kMs, [](auto& c) -> auto& { return c.wired.delay; }));
    v.push_back(rateField("wired.bs_bandwidth_bps", [](auto& c) -> auto& { return c.wired.bsBandwidth; }));
    v.push_back(durationField("wired.bs_delay_ms", kMs, [](auto& c) -> auto& { return c.wired.bsDelay; }));

    v.push_back(doubleField("radio.tx_power_dbm", [](auto& c) -> auto& { return c.radio.txPowerDbm; }));
    v.push_back(doubleField("radio.pathloss_exponent",
                            [](auto& c) -> auto& { return c.radio.pathlossExponent; }));
    v.push_back(doubleField("radio.noise_floor_dbm", [](auto& c) -> auto& { return c.radio.noiseFloorDbm; }));

    {
      Field f;
      f.key = "load.metric";
      f.set = [](ScenarioConfig& c, std::string_view v, std::size_t line) {
        if (v == "offered")
          c.load.metric = LoadMetric::Offered;
        else if (v == "carried")
          c.load.metric = LoadMetric::Carried;
        else
          throw ParseError(line, "load.metric must be offered or carried");
      };
      f.get = [](const ScenarioConfig& c) -> std::optional<std::string> {
        return std::string(c.load.metric == LoadMetric::Offered ? "offered" : "carried");
      };
      v.push_back(f);
    }
    v.push_back(durationField("load.window_ms", kMs, [](auto& c) -> auto& { return c.load.window; }));

    v.push_back(unsignedField<std::uint32_t>("traffic.packet_bytes",
                                             [](auto& c) -> auto& { return c.traffic.packetBytes; }));
    v.push_back(durationField("traffic.interval_ms", kMs,
                              [](auto& c) -> auto& { return c.traffic.interval; }));
    return v;
  }();
  return fields;
}

inline std::optional<std::uint16_t>
nodeIndex(std::string_view s)
{
  std::uint16_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v == 0)
    return std::nullopt;
  return v;
}

inline void
setNodeKey(ScenarioConfig& c, std::string_view full, std::string_view value, std::size_t line)
{
  auto fail = [&] { throw ParseError(line, "unknown key '" + std::string(full) + "'"); };
  auto lastDot = full.rfind('.');
  std::string_view node = full.substr(0, lastDot);
  std::string_view field = full.substr(lastDot + 1);

  if (node == "bs") {
    if (!c.bs)
      c.bs = BsConfig{};
    if (field == "x") c.bs->pos.x = toDouble(value, line, full);
    else if (field == "y") c.bs->pos.y = toDouble(value, line, full);
    else if (field == "range_m") c.bs->rangeM = toDouble(value, line, full);
    else fail();
    return;
  }
  auto dot = node.find('.');
  if (dot == std::string_view::npos)
    fail();
  auto idx = nodeIndex(node.substr(dot + 1));
  if (!idx)
    fail();
  std::string_view kind = node.substr(0, dot);
  if (kind == "ap") {
    auto& ap = c.aps[*idx];
    if (field == "x") ap.pos.x = toDouble(value, line, full);
    else if (field == "y") ap.pos.y = toDouble(value, line, full);
    else if (field == "range_m") ap.rangeM = toDouble(value, line, full);
    else if (field == "channel") {
      auto ch = toUnsigned(value, line, full);
      if (ch > 1000)
        throw ParseError(line, "channel out of range");
      ap.channel = static_cast<ChannelId>(ch);
    }
    else fail();
    return;
  }
  if (kind == "mn") {
    auto& mn = c.mns[*idx];
    if (field == "x") mn.pos.x = toDouble(value, line, full);
    else if (field == "y") mn.pos.y = toDouble(value, line, full);
    else if (field == "start_s") mn.start = Duration(std::llround(toDouble(value, line, full) * kS));
    else if (field == "ap") {
      auto ap = toUnsigned(value, line, full);
      if (ap == 0 || ap > 0xffff)
        throw ParseError(line, "mn ap index out of range");
      mn.ap = static_cast<std::uint16_t>(ap);
    }
    else fail();
    return;
  }
  fail();
}

inline void
openNodeSection(ScenarioConfig& c, std::string_view name, std::size_t line)
{
  if (name == "bs") {
    if (!c.bs)
      c.bs = BsConfig{};
    return;
  }
  auto dot = name.find('.');
  if (dot != std::string_view::npos) {
    auto idx = nodeIndex(name.substr(dot + 1));
    auto kind = name.substr(0, dot);
    if (idx && kind == "ap") {
      c.aps[*idx];
      return;
    }
    if (idx && kind == "mn") {
      c.mns[*idx];
      return;
    }
  }
  throw ParseError(line, "unknown section [" + std::string(name) + "]");
}

inline bool
isNodeKey(std::string_view full)
{
  return full.starts_with("ap.") || full.starts_with("mn.") || full.starts_with("bs.");
}

inline bool
knownSection(std::string_view name)
{
  const auto& fields = globalFields();
  return std::any_of(fields.begin(), fields.end(), [&](const Field& f) {
    return f.key.size() > name.size() && f.key.starts_with(name) && f.key[name.size()] == '.';
  });
}

} // namespace config_detail

/// Parses scenario text and validates the result.
inline ScenarioConfig
parseConfig(std::string_view text)
{
  using namespace config_detail;
  ScenarioConfig c;
  std::string section;
  std::set<std::string> seen;
  std::set<std::string> sections;
  std::size_t lineNo = 0;

  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineNo;

    std::string_view line = trim(raw);
    if (lineNo == 1 && line.starts_with("\xEF\xBB\xBF"))
      line = trim(line.substr(3));
    if (line.empty() || line.front() == '#' || line.front() == ';')
      continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(lineNo, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty())
        throw ParseError(lineNo, "empty section name");
      if (!sections.insert(section).second)
        throw ParseError(lineNo, "section [" + section + "] appears twice");
      if (isNodeKey(section + ".") || section == "bs")
        openNodeSection(c, section, lineNo);
      else if (!knownSection(section))
        throw ParseError(lineNo, "unknown section [" + section + "]");
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(lineNo, "expected key = value");
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ParseError(lineNo, "missing key");
    if (value.empty())
      throw ParseError(lineNo, "missing value for '" + std::string(key) + "'");

    std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (!seen.insert(full).second)
      throw ParseError(lineNo, "duplicate key '" + full + "'");

    if (isNodeKey(full)) {
      setNodeKey(c, full, value, lineNo);
      continue;
    }
    const auto& fields = globalFields();
    auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return f.key == full; });
    if (it == fields.end())
      throw ParseError(lineNo, "unknown key '" + full + "'");
    it->set(c, value, lineNo);
  }

  validate(c);
  return c;
}

/// Reads and parses a scenario file.
inline ScenarioConfig
loadConfig(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseConfig(buf.str());
}

/// Writes every setting, so the output reloads to an equal config.
inline std::string
dumpConfig(const ScenarioConfig& c)
{
  using namespace config_detail;
  std::ostringstream out;
  std::string section;
  for (const auto& f : globalFields()) {
    auto value = f.get(c);
    if (!value)
      continue;
    auto dot = f.key.find('.');
    std::string sec = f.key.substr(0, dot);
    if (sec != section) {
      if (!section.empty())
        out << '\n';
      out << '[' << sec << "]\n";
      section = sec;
    }
    out << f.key.substr(dot + 1) << " = " << *value << '\n';
  }
  for (const auto& [i, ap] : c.aps) {
    out << "\n[ap." << i << "]\n"
        << "x = " << fmt(ap.pos.x) << '\n'
        << "y = " << fmt(ap.pos.y) << '\n'
        << "channel = " << ap.channel << '\n'
        << "range_m = " << fmt(ap.rangeM) << '\n';
  }
  if (c.bs) {
    out << "\n[bs]\n"
        << "x = " << fmt(c.bs->pos.x) << '\n'
        << "y = " << fmt(c.bs->pos.y) << '\n'
        << "range_m = " << fmt(c.bs->rangeM) << '\n';
  }
  for (const auto& [i, mn] : c.mns) {
    out << "\n[mn." << i << "]\n"
        << "x = " << fmt(mn.pos.x) << '\n'
        << "y = " << fmt(mn.pos.y) << '\n'
        << "ap = " << mn.ap << '\n'
        << "start_s = " << fmt(static_cast<double>(mn.start.count()) / kS) << '\n';
  }
  return out.str();
}

} // namespace wlanho
