#include "vanet/logs.hpp"

#include <cstdio>
#include <fstream>

namespace vanet {
namespace {

std::string parties(const std::vector<Party>& ps)
{
  if (ps.empty()) return "-";
  std::string out;
  for (const Party& p : ps) {
    if (!out.empty()) out += '|';
    out += std::to_string(raw(p.vehicle));
  }
  return out;
}

std::string fixed(double v, int digits)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

template <class Rows, class Fn>
void write_file(const std::filesystem::path& path, const std::string& header, const Rows& rows,
                Fn&& fn)
{
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << header << '\n';
  for (const auto& r : rows) out << fn(r) << '\n';
}

}  // namespace

std::string format_time(SimTime t) { return fixed(t, 4); }

std::string message_log_header() { return "time,sender,receiver,kind,message_id,hop,bytes"; }

std::string to_csv(const TransmissionRecord& r)
{
  std::string out = format_time(r.time);
  out += ',';
  out += std::to_string(raw(r.sender));
  out += ',';
  out += r.receiver ? std::to_string(raw(*r.receiver)) : std::string("BROADCAST");
  out += ',';
  out += to_string(r.kind);
  out += ',';
  out += std::to_string(raw(r.message_id));
  out += ',';
  out += std::to_string(r.hop);
  out += ',';
  out += std::to_string(r.bytes);
  return out;
}

std::string dispute_log_header()
{
  return "time,event_id,method,score,decision,rewarded,punished";
}

std::string to_csv(const DisputeRecord& r)
{
  return format_time(r.time) + ',' + std::to_string(raw(r.event_id)) + ',' +
         std::string(to_string(r.method)) + ',' + fixed(r.score, 6) + ',' +
         std::string(to_string(r.decision)) + ',' + parties(r.rewarded) + ',' + parties(r.punished);
}

std::string trust_log_header() { return "time,driver_id,trust,band,cause"; }

std::string to_csv(const TrustRecord& r)
{
  return format_time(r.time) + ',' + std::to_string(raw(r.driver)) + ',' + fixed(r.trust, 4) + ',' +
         std::string(trust::to_string(r.band)) + ',' + std::string(trust::to_string(r.cause));
}

void RunLogs::write(const std::filesystem::path& dir) const
{
  std::filesystem::create_directories(dir);
  write_file(dir / "messages.csv", message_log_header(), transmissions,
             [](const TransmissionRecord& r) { return to_csv(r); });
  write_file(dir / "disputes.csv", dispute_log_header(), disputes,
             [](const DisputeRecord& r) { return to_csv(r); });
  write_file(dir / "trust.csv", trust_log_header(), trust,
             [](const TrustRecord& r) { return to_csv(r); });
  write_file(dir / "responses.csv", "receiver,event_id,injected_at,decided_at", responses,
             [](const ResponseRecord& r) {
               return std::to_string(raw(r.receiver)) + ',' + std::to_string(raw(r.event_id)) +
                      ',' + format_time(r.injected_at) + ',' + format_time(r.decided_at);
             });
}

}  // namespace vanet
