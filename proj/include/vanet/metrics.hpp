#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vanet/ground_truth.hpp"
#include "vanet/logs.hpp"
#include "vanet/scenarios.hpp"

namespace vanet {
class Simulation;
}

namespace vanet::metrics {

enum class Cell { TN, FP, FN, TP };
std::string_view to_string(Cell cell);

/// Real event ruled true: TN; real ruled false: FP; fabricated ruled true:
/// FN; fabricated ruled false: TP.
struct ClassificationMatrix {
  std::uint64_t tn = 0, fp = 0, fn = 0, tp = 0;

  /// Unresolved decisions are ignored.
  void add(bool real, Decision decision);
  std::uint64_t count(Cell cell) const;
  std::uint64_t decided() const { return tn + fp + fn + tp; }
  ClassificationMatrix& operator+=(const ClassificationMatrix& o);
};

/// cell / decided disputes; nullopt when nothing was decided.
std::optional<double> normalized_likelihood(const ClassificationMatrix& m, Cell cell);

struct RunMetrics {
  std::uint64_t events = 0;          ///< announced events at or after warm-up
  std::uint64_t event_messages = 0;  ///< transmissions tied to those events
  double messages_per_event = 0.0;
  std::vector<double> response_times;
  ClassificationMatrix classification;
  std::uint64_t disputes_opened = 0;
  std::uint64_t unresolved = 0;
  std::vector<DriverId> blocked_drivers;

  std::optional<double> mean_response() const;
};

/// The last dispute record of each event decides its cell. Events observed
/// before `warmup` are skipped.
ClassificationMatrix classify(const std::vector<DisputeRecord>& disputes, const GroundTruth& truth,
                              SimTime warmup, std::uint64_t* unresolved = nullptr,
                              std::uint64_t* opened = nullptr);

RunMetrics compute(const RunLogs& logs, const GroundTruth& truth, SimTime warmup);
RunMetrics compute(const Simulation& sim);

/// Runs `jobs` independent tasks on up to `threads` workers (0: hardware).
void parallel_for(std::size_t jobs, unsigned threads, const std::function<void(std::size_t)>& task);

struct SweepRow {
  int density = 0;
  double p_yes = 0.0;
  std::uint64_t seed = 0;
  scenarios::SenderMode mode = scenarios::SenderMode::AllTrue;
  ClassificationMatrix matrix;
  std::uint64_t unresolved = 0;
  std::size_t violations = 0;  ///< invariant audit failures in this run
};

std::vector<SweepRow> run_sweep(const std::vector<int>& densities, const std::vector<double>& p_values,
                                const std::vector<std::uint64_t>& seeds, scenarios::SenderMode mode,
                                unsigned threads = 0);

/// Per-seed rows.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Pooled over seeds: one row per (density, P).
struct SweepCell {
  int density = 0;
  double p_yes = 0.0;
  ClassificationMatrix matrix;
  std::uint64_t unresolved = 0;
  std::size_t runs = 0;
};
std::vector<SweepCell> aggregate(const std::vector<SweepRow>& rows);
std::string sweep_summary_csv(const std::vector<SweepCell>& cells);

struct OverheadRow {
  int density = 0;
  std::string variant;  ///< "proposed" or "baseline<timer>"
  double timer = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t events = 0;
  double messages_per_event = 0.0;
  std::optional<double> mean_response;
  std::size_t violations = 0;
};

std::vector<OverheadRow> run_overhead_comparison(const std::vector<int>& densities,
                                                 const std::vector<double>& timers,
                                                 const std::vector<std::uint64_t>& seeds,
                                                 unsigned threads = 0);
std::string overhead_csv(const std::vector<OverheadRow>& rows);

struct OverheadCell {
  int density = 0;
  std::string variant;
  double messages_per_event = 0.0;  ///< mean over seeds
  std::optional<double> mean_response;
  std::size_t runs = 0;
};
std::vector<OverheadCell> aggregate(const std::vector<OverheadRow>& rows);
std::string overhead_summary_csv(const std::vector<OverheadCell>& cells);

/// time,vehicle,trust,band,cause,delta rows for the given vehicles.
std::string trust_trace_csv(const RunLogs& logs, const std::vector<EntityId>& vehicles);

}  // namespace vanet::metrics
