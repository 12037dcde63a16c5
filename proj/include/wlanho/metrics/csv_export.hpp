#pragma once

#include "wlanho/metrics/records.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace wlanho {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kThroughputHeader = "t_sec,node,bits_delivered,mn_count";
inline constexpr const char* kDelayHeader = "packet_id,flow_id,sent_us,recv_us,delay_us";
inline constexpr const char* kHandoffHeader = "mn,from,to,kind,decided_us,completed_us,gap_us";
inline constexpr const char* kDropHeader = "t_sec,node,drops";

namespace detail {

inline std::ofstream
openCsv(const std::filesystem::path& p)
{
  // binary mode keeps line endings LF everywhere
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot write " + p.string());
  return out;
}

} // namespace detail

/// Writes throughput.csv, delay.csv, handoffs.csv and drops.csv into `dir`.
inline void
exportCsv(const RunResults& run, const std::filesystem::path& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create " + dir.string() + ": " + ec.message());

  {
    auto out = detail::openCsv(dir / "throughput.csv");
    out << kThroughputHeader << '\n';
    for (const auto& r : run.throughput)
      out << r.tSec << ',' << r.node << ',' << r.bitsDelivered << ',' << r.mnCount << '\n';
    if (!out)
      throw IoError("write failed: throughput.csv");
  }
  {
    auto out = detail::openCsv(dir / "delay.csv");
    out << kDelayHeader << '\n';
    for (const auto& r : run.delays)
      out << r.packetId << ',' << r.flowId << ',' << r.sentAt.micros() << ','
          << r.receivedAt.micros() << ',' << r.delay().count() << '\n';
    if (!out)
      throw IoError("write failed: delay.csv");
  }
  {
    auto out = detail::openCsv(dir / "handoffs.csv");
    out << kHandoffHeader << '\n';
    for (const auto& r : run.handoffs)
      out << r.mn.name() << ',' << r.from.name() << ',' << r.to.name() << ',' << toString(r.kind)
          << ',' << r.decidedAt.micros() << ',' << r.completedAt.micros() << ','
          << r.gap.count() << '\n';
    if (!out)
      throw IoError("write failed: handoffs.csv");
  }
  {
    auto out = detail::openCsv(dir / "drops.csv");
    out << kDropHeader << '\n';
    for (const auto& r : run.drops)
      out << r.tSec << ',' << r.node << ',' << r.drops << '\n';
    if (!out)
      throw IoError("write failed: drops.csv");
  }
}

} // namespace wlanho
