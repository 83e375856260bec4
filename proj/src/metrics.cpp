#include "vanet/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>
#include <tuple>

#include "vanet/audit.hpp"
#include "vanet/simulation.hpp"

namespace vanet::metrics {

namespace {

std::string num(double v, int digits = 6)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string mode_name(scenarios::SenderMode m)
{
  return m == scenarios::SenderMode::AllTrue ? "all_true" : "all_untrue";
}

bool counted(const GroundTruth& truth, EventId id, SimTime warmup)
{
  const EventRecord* e = truth.find(id);
  return e && e->observed_at >= warmup;
}

}  // namespace

std::string_view to_string(Cell cell)
{
  switch (cell) {
    case Cell::TN: return "tn";
    case Cell::FP: return "fp";
    case Cell::FN: return "fn";
    case Cell::TP: return "tp";
  }
  return "?";
}

void ClassificationMatrix::add(bool real, Decision decision)
{
  if (decision == Decision::DecidedTrue) ++(real ? tn : fn);
  if (decision == Decision::DecidedFalse) ++(real ? fp : tp);
}

std::uint64_t ClassificationMatrix::count(Cell cell) const
{
  switch (cell) {
    case Cell::TN: return tn;
    case Cell::FP: return fp;
    case Cell::FN: return fn;
    case Cell::TP: return tp;
  }
  return 0;
}

ClassificationMatrix& ClassificationMatrix::operator+=(const ClassificationMatrix& o)
{
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  tp += o.tp;
  return *this;
}

std::optional<double> normalized_likelihood(const ClassificationMatrix& m, Cell cell)
{
  if (m.decided() == 0) return std::nullopt;
  return static_cast<double>(m.count(cell)) / static_cast<double>(m.decided());
}

std::optional<double> RunMetrics::mean_response() const
{
  if (response_times.empty()) return std::nullopt;
  return std::accumulate(response_times.begin(), response_times.end(), 0.0) /
         static_cast<double>(response_times.size());
}

ClassificationMatrix classify(const std::vector<DisputeRecord>& disputes, const GroundTruth& truth,
                              SimTime warmup, std::uint64_t* unresolved, std::uint64_t* opened)
{
  std::map<EventId, Decision> final_decision;
  for (const DisputeRecord& d : disputes) {
    if (counted(truth, d.event_id, warmup)) final_decision[d.event_id] = d.decision;
  }
  ClassificationMatrix m;
  std::uint64_t open = 0;
  for (const auto& [event, decision] : final_decision) {
    m.add(truth.is_real(event), decision);
    if (decision == Decision::Unresolved) ++open;
  }
  if (unresolved) *unresolved = open;
  if (opened) *opened = final_decision.size();
  return m;
}

RunMetrics compute(const RunLogs& logs, const GroundTruth& truth, SimTime warmup)
{
  RunMetrics r;
  std::set<EventId> events;
  for (const auto& [id, e] : truth.all()) {
    if (e.announced_at && e.observed_at >= warmup) events.insert(id);
  }
  r.events = events.size();
  for (const TransmissionRecord& t : logs.transmissions) {
    if (t.event_id && events.contains(*t.event_id)) ++r.event_messages;
  }
  if (r.events > 0) r.messages_per_event = static_cast<double>(r.event_messages) / r.events;
  for (const ResponseRecord& resp : logs.responses) {
    if (events.contains(resp.event_id)) r.response_times.push_back(resp.decided_at - resp.injected_at);
  }
  r.classification = classify(logs.disputes, truth, warmup, &r.unresolved, &r.disputes_opened);
  std::set<DriverId> blocked;
  for (const TrustRecord& t : logs.trust) {
    if (t.cause == trust::TrustCause::Blocked) blocked.insert(t.driver);
  }
  r.blocked_drivers.assign(blocked.begin(), blocked.end());
  return r;
}

RunMetrics compute(const Simulation& sim)
{
  return compute(sim.logs(), sim.truth(), sim.scenario().warmup);
}

void parallel_for(std::size_t jobs, unsigned threads, const std::function<void(std::size_t)>& task)
{
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<SweepRow> run_sweep(const std::vector<int>& densities, const std::vector<double>& p_values,
                                const std::vector<std::uint64_t>& seeds, scenarios::SenderMode mode,
                                unsigned threads)
{
  std::vector<SweepRow> rows;
  for (int d : densities) {
    for (double p : p_values) {
      for (std::uint64_t s : seeds) rows.push_back({d, p, s, mode, {}, 0, 0});
    }
  }
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    SweepRow& row = rows[i];
    Simulation sim(scenarios::fig5_point(row.density, row.p_yes, row.seed, row.mode));
    sim.run();
    const RunMetrics m = compute(sim);
    row.matrix = m.classification;
    row.unresolved = m.unresolved;
    row.violations = audit::run_all(sim).size();
  });
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
  std::string out = "density,p,seed,mode,tn,fp,fn,tp,unresolved,tn_l,fp_l,fn_l,tp_l\n";
  for (const SweepRow& r : rows) {
    out += std::to_string(r.density) + ',' + num(r.p_yes, 2) + ',' + std::to_string(r.seed) + ',' +
           mode_name(r.mode) + ',' + std::to_string(r.matrix.tn) + ',' + std::to_string(r.matrix.fp) +
           ',' + std::to_string(r.matrix.fn) + ',' + std::to_string(r.matrix.tp) + ',' +
           std::to_string(r.unresolved);
    for (Cell c : {Cell::TN, Cell::FP, Cell::FN, Cell::TP}) {
      out += ',' + opt_num(normalized_likelihood(r.matrix, c));
    }
    out += '\n';
  }
  return out;
}

std::vector<SweepCell> aggregate(const std::vector<SweepRow>& rows)
{
  std::map<std::pair<int, double>, SweepCell> cells;
  for (const SweepRow& r : rows) {
    SweepCell& c = cells[{r.density, r.p_yes}];
    c.density = r.density;
    c.p_yes = r.p_yes;
    c.matrix += r.matrix;
    c.unresolved += r.unresolved;
    ++c.runs;
  }
  std::vector<SweepCell> out;
  for (auto& [key, c] : cells) out.push_back(c);
  return out;
}

std::string sweep_summary_csv(const std::vector<SweepCell>& cells)
{
  std::string out = "density,p,runs,tn,fp,fn,tp,unresolved,tn_l,fp_l,fn_l,tp_l\n";
  for (const SweepCell& c : cells) {
    out += std::to_string(c.density) + ',' + num(c.p_yes, 2) + ',' + std::to_string(c.runs) + ',' +
           std::to_string(c.matrix.tn) + ',' + std::to_string(c.matrix.fp) + ',' +
           std::to_string(c.matrix.fn) + ',' + std::to_string(c.matrix.tp) + ',' +
           std::to_string(c.unresolved);
    for (Cell cell : {Cell::TN, Cell::FP, Cell::FN, Cell::TP}) {
      out += ',' + opt_num(normalized_likelihood(c.matrix, cell));
    }
    out += '\n';
  }
  return out;
}

std::vector<OverheadRow> run_overhead_comparison(const std::vector<int>& densities,
                                                 const std::vector<double>& timers,
                                                 const std::vector<std::uint64_t>& seeds,
                                                 unsigned threads)
{
  std::vector<OverheadRow> rows;
  for (int d : densities) {
    for (std::uint64_t s : seeds) {
      rows.push_back({d, "proposed", 0.0, s, 0, 0.0, std::nullopt, 0});
      for (double t : timers) {
        rows.push_back({d, "baseline" + num(t, 0), t, s, 0, 0.0, std::nullopt, 0});
      }
    }
  }
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    OverheadRow& row = rows[i];
    const Protocol protocol = row.timer > 0.0 ? Protocol::Baseline : Protocol::Proposed;
    Simulation sim(scenarios::fig6_point(row.density, protocol, row.timer > 0.0 ? row.timer : 30.0,
                                         row.seed));
    sim.run();
    const RunMetrics m = compute(sim);
    row.events = m.events;
    row.messages_per_event = m.messages_per_event;
    row.mean_response = m.mean_response();
    row.violations = audit::run_all(sim).size();
  });
  return rows;
}

std::string overhead_csv(const std::vector<OverheadRow>& rows)
{
  std::string out = "density,variant,seed,events,messages_per_event,mean_response\n";
  for (const OverheadRow& r : rows) {
    out += std::to_string(r.density) + ',' + r.variant + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.events) + ',' + num(r.messages_per_event, 3) + ',' +
           opt_num(r.mean_response) + '\n';
  }
  return out;
}

std::vector<OverheadCell> aggregate(const std::vector<OverheadRow>& rows)
{
  struct Acc {
    double messages = 0.0, response = 0.0;
    std::size_t runs = 0, responded = 0;
  };
  std::map<std::pair<int, std::string>, Acc> acc;
  for (const OverheadRow& r : rows) {
    Acc& a = acc[{r.density, r.variant}];
    a.messages += r.messages_per_event;
    ++a.runs;
    if (r.mean_response) {
      a.response += *r.mean_response;
      ++a.responded;
    }
  }
  std::vector<OverheadCell> out;
  for (const auto& [key, a] : acc) {
    OverheadCell c{key.first, key.second, a.messages / a.runs, std::nullopt, a.runs};
    if (a.responded > 0) c.mean_response = a.response / a.responded;
    out.push_back(c);
  }
  return out;
}

std::string overhead_summary_csv(const std::vector<OverheadCell>& cells)
{
  std::string out = "density,variant,runs,messages_per_event,mean_response\n";
  for (const OverheadCell& c : cells) {
    out += std::to_string(c.density) + ',' + c.variant + ',' + std::to_string(c.runs) + ',' +
           num(c.messages_per_event, 3) + ',' + opt_num(c.mean_response) + '\n';
  }
  return out;
}

std::string trust_trace_csv(const RunLogs& logs, const std::vector<EntityId>& vehicles)
{
  std::string out = "time,vehicle,trust,band,cause,delta\n";
  for (const TrustRecord& t : logs.trust) {
    if (std::find(vehicles.begin(), vehicles.end(), t.vehicle) == vehicles.end()) continue;
    out += format_time(t.time) + ',' + std::to_string(raw(t.vehicle)) + ',' + num(t.trust, 4) + ',' +
           std::string(trust::to_string(t.band)) + ',' + std::string(trust::to_string(t.cause)) + ',' +
           num(t.delta, 4) + '\n';
  }
  return out;
}

}  // namespace vanet::metrics
