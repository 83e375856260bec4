// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "properties.hpp"
#include "vanet/audit.hpp"
#include "vanet/metrics.hpp"
#include "vanet/rsu.hpp"
#include "vanet/scenarios.hpp"
#include "vanet/simulation.hpp"

using namespace vanet;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail)
{
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4)
{
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- 1
void worked_example()
{
  const std::vector<FeedbackEntry> fb{{1, 0.5, EntityId{1}, DriverId{1}},
                                      {1, 0.7, EntityId{2}, DriverId{2}},
                                      {-1, 0.65, EntityId{3}, DriverId{3}},
                                      {-1, 0.68, EntityId{4}, DriverId{4}},
                                      {1, 0.9, EntityId{5}, DriverId{5}}};
  const auto start = Clock::now();
  const double score = vote_score(fb);
  const Decision d = decision_for(score);
  const double elapsed = seconds_since(start);
  const bool ok = std::abs(score - 0.77) <= 1e-9 && d == Decision::DecidedTrue && elapsed < 1e-3;
  report(1, ok, "weighted-vote worked example",
         "score " + fmt(score, 12) + ", " + std::string(to_string(d)) + ", " + fmt(elapsed * 1e6) + " us");
}

// ---------------------------------------------------------------- 2
Decision sign_oracle(const std::vector<std::pair<int, int>>& votes)
{
  long sum = 0;
  for (auto [f, k] : votes) sum += long(f) * k;  // trust = k / 20
  return sum > 0 ? Decision::DecidedTrue : sum < 0 ? Decision::DecidedFalse : Decision::Unresolved;
}

bool matches(const std::vector<std::pair<int, int>>& votes, std::vector<FeedbackEntry>& scratch)
{
  scratch.clear();
  for (auto [f, k] : votes) scratch.push_back({f, k / 20.0, EntityId{0}, DriverId{0}});
  return decision_for(vote_score(scratch)) == sign_oracle(votes);
}

void vote_oracle()
{
  const auto start = Clock::now();
  std::vector<FeedbackEntry> scratch;
  std::uint64_t checked = 0, ties = 0, mismatches = 0;
  std::vector<std::pair<int, int>> v;

  // Every ordered vector up to length 5 over all 24 (F, T) pairs.
  std::function<void()> ordered = [&] {
    ++checked;
    ties += sign_oracle(v) == Decision::Unresolved;
    mismatches += !matches(v, scratch);
    if (v.size() == 5) return;
    for (int f = -1; f <= 1; ++f) {
      for (int k = 11; k <= 18; ++k) {
        v.emplace_back(f, k);
        ordered();
        v.pop_back();
      }
    }
  };
  ordered();

  // Lengths 6 to 8: one representative per multiset. The integer score is
  // order-free and an F = 0 entry contributes nothing whatever its T, so the
  // 17 distinct contributions cover every vector; each representative is
  // also checked in reverse order.
  std::vector<std::pair<int, int>> options{{0, 11}};
  for (int f : {-1, 1}) {
    for (int k = 11; k <= 18; ++k) options.emplace_back(f, k);
  }
  std::function<void(std::size_t)> multiset = [&](std::size_t first) {
    if (v.size() >= 6) {
      ++checked;
      ties += sign_oracle(v) == Decision::Unresolved;
      mismatches += !matches(v, scratch);
      std::vector<std::pair<int, int>> rev(v.rbegin(), v.rend());
      mismatches += !matches(rev, scratch);
    }
    if (v.size() == 8) return;
    for (std::size_t i = first; i < options.size(); ++i) {
      v.push_back(options[i]);
      multiset(i);
      v.pop_back();
    }
  };
  multiset(0);

  const double elapsed = seconds_since(start);
  report(2, mismatches == 0 && ties > 0 && elapsed < 10.0, "vote oracle equivalence, n <= 8",
         std::to_string(checked) + " vectors, " + std::to_string(ties) + " ties, " +
             std::to_string(mismatches) + " mismatches, " + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------- 3
void scripted_trace()
{
  const Scenario scenario = scenarios::fig4_trace();
  const double tick = scenario.tick;
  const auto& schedule = scenario.vehicles[0].behavior.announce_schedule;
  const double withhold = scenario.vehicle.trust.withhold_duration;
  Simulation sim(scenario);
  sim.run();
  const EntityId v0{0};
  const RunLogs& logs = sim.logs();

  std::vector<std::string> problems;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };

  // Ordered milestones for V0: discards of untrue announcements, punishments, block.
  std::vector<double> untrue_release;
  for (const auto& a : schedule) {
    if (!a.truthful) untrue_release.push_back(a.time + withhold);
  }
  expect(untrue_release.size() == 3, "three untrue announcements scripted");
  std::vector<std::pair<double, std::string>> seen;
  std::optional<double> blocked_at;
  for (const auto& r : logs.trust) {
    if (r.vehicle != v0) continue;
    if (r.cause == trust::TrustCause::RewardDiscarded &&
        std::find(untrue_release.begin(), untrue_release.end(), r.time) != untrue_release.end()) {
      seen.emplace_back(r.time, "discard");
    } else if (r.cause == trust::TrustCause::RsuPunishment) {
      seen.emplace_back(r.time, "punish" + fmt(-r.delta, 3));
    } else if (r.cause == trust::TrustCause::Blocked) {
      seen.emplace_back(r.time, "blocked@" + fmt(r.trust, 3));
      if (!blocked_at) blocked_at = r.time;
    }
  }
  const std::vector<std::string> order{"discard", "punish0.1", "discard", "punish0.3",
                                       "discard", "punish0.5", "blocked@0.05"};
  std::vector<std::string> got;
  for (const auto& [t, what] : seen) got.push_back(what);
  expect(got == order, "milestone order");

  // Discards at exactly the release times of the untrue announcements.
  std::vector<double> discards;
  for (const auto& [t, what] : seen) {
    if (what == "discard") discards.push_back(t);
  }
  expect(discards == untrue_release, "discards at untrue release times");

  const double targets[] = {220.0, 640.0, 2020.0};
  std::vector<double> punish_times;
  for (const auto& [t, what] : seen) {
    if (what.rfind("punish", 0) == 0) punish_times.push_back(t);
  }
  for (std::size_t i = 0; i < punish_times.size() && i < 3; ++i) {
    expect(std::abs(punish_times[i] - targets[i]) <= tick, "punishment " + std::to_string(i + 1) + " time");
  }
  expect(punish_times.size() == 3, "three punishments");

  // Beacons only afterwards; the one-time blocking ack is allowed.
  std::size_t beacons_after = 0, other_after = 0;
  if (blocked_at) {
    for (const auto& t : logs.transmissions) {
      if (t.sender != v0 || t.time <= *blocked_at) continue;
      if (t.kind == MessageKind::Beacon) {
        ++beacons_after;
      } else if (t.kind != MessageKind::BlockingAck) {
        ++other_after;
      }
    }
  }
  expect(blocked_at.has_value(), "blocked");
  expect(beacons_after > 0 && other_after == 0, "beacons only after blocking");
  expect(audit::run_all(sim).empty(), "invariant audit");

  std::string detail;
  for (const auto& [t, what] : seen) detail += what + "@" + fmt(t, 7) + " ";
  detail += "| beacons after block " + std::to_string(beacons_after) + ", other " + std::to_string(other_after);
  for (const auto& p : problems) detail += " | failed: " + p;
  report(3, problems.empty(), "scripted trust trace", detail);
}

// ---------------------------------------------------------------- 4
struct ShapeCheck {
  bool ok = true;
  std::string detail;
};

// `rising`: TN curve (0 -> 1); otherwise TP curve (1 -> 0).
ShapeCheck check_shape(const std::vector<metrics::SweepCell>& cells, metrics::Cell cell, bool rising,
                       const std::vector<double>& ps)
{
  ShapeCheck out;
  std::map<int, std::map<double, double>> curve;
  for (const auto& c : cells) {
    const auto v = metrics::normalized_likelihood(c.matrix, cell);
    curve[c.density][c.p_yes] = v ? *v : std::nan("");
  }
  for (const auto& [density, by_p] : curve) {
    std::vector<double> y;
    for (double p : ps) y.push_back(by_p.at(p));
    const double lo = rising ? y.front() : y.back();
    const double hi = rising ? y.back() : y.front();
    bool ok = lo == 0.0 && hi == 1.0;
    std::size_t biggest = 0;
    double biggest_step = -1.0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
      const double step = rising ? y[i + 1] - y[i] : y[i] - y[i + 1];
      ok = ok && step >= -0.05;
      if (step > biggest_step) {
        biggest_step = step;
        biggest = i;
      }
    }
    const bool at_mid = std::abs(ps[biggest] - 0.4) < 1e-9 && std::abs(ps[biggest + 1] - 0.6) < 1e-9;
    ok = ok && at_mid;
    out.ok = out.ok && ok;
    out.detail += " d" + std::to_string(density) + "[";
    for (std::size_t i = 0; i < y.size(); ++i) out.detail += (i ? " " : "") + fmt(y[i], 3);
    out.detail += std::string("]") + (ok ? "" : "!");
  }
  return out;
}

void classification_sweep()
{
  const auto start = Clock::now();
  const std::vector<int> densities{10, 30, 50, 70, 90, 100};
  const std::vector<double> ps{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  const auto true_rows = metrics::run_sweep(densities, ps, seeds, scenarios::SenderMode::AllTrue);
  const auto untrue_rows = metrics::run_sweep(densities, ps, seeds, scenarios::SenderMode::AllUntrue);
  std::size_t violations = 0;
  for (const auto* rows : {&true_rows, &untrue_rows}) {
    for (const auto& r : *rows) violations += r.violations;
  }
  const auto tn = check_shape(metrics::aggregate(true_rows), metrics::Cell::TN, true, ps);
  const auto tp = check_shape(metrics::aggregate(untrue_rows), metrics::Cell::TP, false, ps);
  const double elapsed = seconds_since(start);
  report(4, tn.ok && tp.ok && violations == 0 && elapsed < 600.0, "classification endpoints and shape",
         "TN over P:" + tn.detail + " | TP over P:" + tp.detail + " | violations " +
             std::to_string(violations) + ", " + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------- 5, 6
void overhead_and_latency()
{
  const std::vector<int> densities{10, 20, 30, 40, 50, 60, 70};
  std::vector<std::uint64_t> seeds(10);
  std::iota(seeds.begin(), seeds.end(), 1);
  const auto rows = metrics::run_overhead_comparison(densities, {30.0}, seeds);
  const auto cells = metrics::aggregate(rows);
  std::size_t violations = 0;
  for (const auto& r : rows) violations += r.violations;

  std::map<int, double> proposed, baseline;
  for (const auto& c : cells) (c.variant == "proposed" ? proposed : baseline)[c.density] = c.messages_per_event;
  bool ordered = violations == 0;
  std::string detail;
  for (int d : densities) {
    const bool ok = d < 30 || baseline[d] > proposed[d];
    ordered = ordered && ok;
    detail += "d" + std::to_string(d) + " " + fmt(baseline[d]) + "/" + fmt(proposed[d]) + (ok ? "" : "!") + "; ";
  }
  const double ratio = baseline[70] / proposed[70];
  report(5, ordered && ratio >= 2.0, "per-event overhead, baseline(30 s) vs proposed",
         detail + "ratio at 70 = " + fmt(ratio) + ", violations " + std::to_string(violations));

  // Mean over every receiver decision in every run.
  double p_sum = 0, b_sum = 0;
  std::size_t p_n = 0, b_n = 0;
  for (const auto& r : rows) {
    if (!r.mean_response) continue;
    if (r.variant == "proposed") {
      p_sum += *r.mean_response;
      ++p_n;
    } else {
      b_sum += *r.mean_response;
      ++b_n;
    }
  }
  // Every run must have produced decisions to average.
  const bool complete = p_n == densities.size() * seeds.size() && b_n == p_n;
  double p_min_max = 0, b_min = 1e18;
  for (const auto& r : rows) {
    if (!r.mean_response) continue;
    if (r.variant == "proposed") {
      p_min_max = std::max(p_min_max, *r.mean_response);
    } else {
      b_min = std::min(b_min, *r.mean_response);
    }
  }
  const double p_mean = p_n ? p_sum / p_n : std::nan("");
  const double b_mean = b_n ? b_sum / b_n : std::nan("");
  report(6, complete && p_mean < 1.0 && b_mean >= 30.0, "receiver decision latency",
         "proposed mean " + fmt(p_mean) + " s (worst run " + fmt(p_min_max) + "), baseline(30 s) mean " +
             fmt(b_mean) + " s (best run " + fmt(b_min) + "), runs " + std::to_string(p_n) + "/" +
             std::to_string(b_n));
}

// ---------------------------------------------------------------- 7
void property_suites()
{
  namespace p = properties;
  const auto start = Clock::now();
  const std::pair<const char*, std::function<p::Result()>> suites[] = {
      {"clamp", [] { return p::trust_clamp(); }},
      {"complaint", [] { return p::complaint_cancels_reward(); }},
      {"tiers", [] { return p::reward_tier_grid(); }},
      {"3ME", [] { return p::window_oracle(); }},
      {"flood", [] { return p::flood_termination(); }},
      {"determinism", [] { return p::run_determinism(); }},
      {"gating", [] { return p::sender_gating(); }},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, run] : suites) {
    const auto r = run();
    ok = ok && r.ok();
    detail += std::string(name) + " " + std::to_string(r.cases - r.failures) + "/" + std::to_string(r.cases) + "; ";
  }
  const double elapsed = seconds_since(start);
  report(7, ok && elapsed < 60.0, "property suites", detail + fmt(elapsed) + " s");
}

}  // namespace

int main()
{
  worked_example();
  vote_oracle();
  scripted_trace();
  property_suites();
  overhead_and_latency();
  classification_sweep();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
