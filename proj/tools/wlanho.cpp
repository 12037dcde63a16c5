// wlanho: run the standard handoff scenarios, sweep seeds, reshape CSVs for plotting.

#include "wlanho/metrics/csv_export.hpp"
#include "wlanho/scenario/config_io.hpp"
#include "wlanho/scenario/presets.hpp"
#include "wlanho/simulation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace wlanho;

namespace {

enum Exit { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

struct Source {
  std::string caseName;
  std::string configPath;
  std::optional<std::uint64_t> seed;
  bool noScheme = false;
  std::optional<double> horizonS;
};

ScenarioConfig
resolve(const Source& src, std::optional<std::uint64_t> seedOverride = std::nullopt)
{
  ScenarioConfig cfg;
  if (!src.configPath.empty()) {
    cfg = loadConfig(src.configPath);
  }
  else {
    auto id = parseCaseId(src.caseName);
    if (!id)
      throw ValidationError("case", "expected one of I, II, III, IV, V, VI");
    cfg = buildStandardScenario(*id, 1);
  }
  if (seedOverride)
    cfg.sim.seed = *seedOverride;
  else if (src.seed)
    cfg.sim.seed = *src.seed;
  if (src.noScheme)
    cfg.sim.scheme = false;
  if (src.horizonS) {
    auto us = static_cast<Duration::rep>(std::llround(*src.horizonS * 1e6));
    cfg.sim.horizon = Duration(us);
  }
  validate(cfg);
  return cfg;
}

void
printSummary(const RunResults& r, std::ostream& out)
{
  out << "t_sec  ess_mbps\n";
  for (const auto& row : r.throughput) {
    if (row.node != "ESS")
      continue;
    out << std::setw(5) << row.tSec << "  " << std::fixed << std::setprecision(3)
        << static_cast<double>(row.bitsDelivered) / 1e6 << '\n';
  }
  Duration maxDelay{0};
  for (const auto& d : r.delays)
    maxDelay = std::max(maxDelay, d.delay());
  std::size_t onBs = 0;
  if (!r.bsAttached.empty())
    onBs = r.bsAttached.rbegin()->second.size();
  out << "max_delay_ms " << std::setprecision(3) << static_cast<double>(maxDelay.count()) / 1e3
      << '\n'
      << "handoffs " << r.handoffs.size() << '\n'
      << "mns_on_bs " << onBs << '\n';
}

RunResults
runOne(const ScenarioConfig& cfg, const fs::path& out)
{
  Simulation sim(cfg);
  RunResults r = sim.run();
  exportCsv(r, out);
  return r;
}

std::pair<std::uint64_t, std::uint64_t>
parseSeedRange(const std::string& s)
{
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      auto v = std::stoull(s);
      return {v, v};
    }
    auto a = std::stoull(s.substr(0, dots));
    auto b = std::stoull(s.substr(dots + 2));
    if (b < a)
      throw ValidationError("seeds", "range end before start");
    return {a, b};
  }
  catch (const std::logic_error&) {
    throw ValidationError("seeds", "expected a..b");
  }
}

std::vector<std::vector<std::string>>
readCsv(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + p.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line); // header
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

// one row per second, one column per attachment plus ESS, in Mb/s
void
plotThroughput(const fs::path& dir, std::ostream& out)
{
  std::map<std::int64_t, std::map<std::string, double>> table;
  std::vector<std::string> nodes;
  for (const auto& row : readCsv(dir / "throughput.csv")) {
    if (row.size() < 3)
      throw IoError("malformed throughput.csv");
    if (std::find(nodes.begin(), nodes.end(), row[1]) == nodes.end())
      nodes.push_back(row[1]);
    table[std::stoll(row[0])][row[1]] = std::stod(row[2]) / 1e6;
  }
  out << "# t_sec";
  for (const auto& n : nodes)
    out << ' ' << n;
  out << '\n';
  for (const auto& [t, cols] : table) {
    out << t;
    for (const auto& n : nodes) {
      auto it = cols.find(n);
      out << ' ' << (it == cols.end() ? 0.0 : it->second);
    }
    out << '\n';
  }
}

// reception time (s), delay (ms), flow
void
plotDelay(const fs::path& dir, std::ostream& out)
{
  out << "# recv_s delay_ms flow\n";
  for (const auto& row : readCsv(dir / "delay.csv")) {
    if (row.size() < 5)
      throw IoError("malformed delay.csv");
    out << std::stod(row[3]) / 1e6 << ' ' << std::stod(row[4]) / 1e3 << ' ' << row[1] << '\n';
  }
}

void
addSource(CLI::App* cmd, Source& src)
{
  auto* c = cmd->add_option("--case", src.caseName, "standard case I..VI");
  auto* f = cmd->add_option("--config", src.configPath, "scenario file")->check(CLI::ExistingFile);
  c->excludes(f);
  f->excludes(c);
  cmd->add_flag("--no-scheme", src.noScheme, "baseline: detection off, nobody moves");
  cmd->add_option("--horizon-s", src.horizonS, "simulated seconds");
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"802.11 ESS load-adjusting handoff simulator"};
  app.require_subcommand(1);

  Source runSrc;
  std::string runOut = "out";
  auto* run = app.add_subcommand("run", "one simulation, CSVs and a summary");
  addSource(run, runSrc);
  run->add_option("--seed", runSrc.seed, "RNG seed");
  run->add_option("--out", runOut, "output directory");

  Source sweepSrc;
  std::string seeds = "1..10";
  std::string sweepOut = "sweep";
  auto* sweep = app.add_subcommand("sweep", "one run per seed, each in its own subdirectory");
  addSource(sweep, sweepSrc);
  sweep->add_option("--seeds", seeds, "inclusive range a..b");
  sweep->add_option("--out", sweepOut, "output directory");

  std::string plotIn;
  std::string figure = "throughput";
  auto* plot = app.add_subcommand("plotdata", "whitespace table for gnuplot and friends");
  plot->add_option("--in", plotIn, "directory written by run")->required();
  plot->add_option("--figure", figure, "throughput or delay")
    ->check(CLI::IsMember({"throughput", "delay"}));

  std::string presetCase;
  auto* preset = app.add_subcommand("preset", "print a standard case as a scenario file");
  preset->add_option("--case", presetCase, "I..VI")->required();

  try {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) {
      if (runSrc.caseName.empty() && runSrc.configPath.empty())
        throw ValidationError("case", "give --case or --config");
      auto cfg = resolve(runSrc);
      auto r = runOne(cfg, runOut);
      printSummary(r, std::cout);
    }
    else if (*sweep) {
      if (sweepSrc.caseName.empty() && sweepSrc.configPath.empty())
        throw ValidationError("case", "give --case or --config");
      auto [a, b] = parseSeedRange(seeds);
      for (auto s = a; s <= b; ++s) {
        auto cfg = resolve(sweepSrc, s);
        auto r = runOne(cfg, fs::path(sweepOut) / ("seed_" + std::to_string(s)));
        std::size_t onBs = r.bsAttached.empty() ? 0 : r.bsAttached.rbegin()->second.size();
        std::cout << "seed " << s << ": handoffs " << r.handoffs.size() << ", mns_on_bs " << onBs
                  << '\n';
      }
    }
    else if (*plot) {
      if (figure == "throughput")
        plotThroughput(plotIn, std::cout);
      else
        plotDelay(plotIn, std::cout);
    }
    else if (*preset) {
      auto id = parseCaseId(presetCase);
      if (!id)
        throw ValidationError("case", "expected one of I, II, III, IV, V, VI");
      std::cout << dumpConfig(buildStandardScenario(*id, 1));
    }
  }
  catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
