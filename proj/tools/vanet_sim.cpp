// Command-line front end: single runs, batch sweeps and the scripted trace.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include "vanet/audit.hpp"
#include "vanet/metrics.hpp"
#include "vanet/scenarios.hpp"
#include "vanet/simulation.hpp"

namespace fs = std::filesystem;
using namespace vanet;

namespace {

constexpr int kViolationExit = 3;

void write_file(const fs::path& path, const std::string& text)
{
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string summary(const Simulation& sim, const metrics::RunMetrics& m, std::size_t violations)
{
  std::ostringstream s;
  const auto& c = m.classification;
  s << "scenario " << sim.scenario().name << " seed " << sim.scenario().seed << '\n'
    << "events executed: " << sim.executed() << '\n'
    << "transmissions: " << sim.logs().transmissions.size() << '\n'
    << "announced events: " << m.events << ", messages per event: " << m.messages_per_event << '\n';
  if (auto r = m.mean_response()) s << "mean response time: " << *r << " s\n";
  s << "disputes: " << m.disputes_opened << " (tn " << c.tn << ", fp " << c.fp << ", fn " << c.fn
    << ", tp " << c.tp << ", unresolved " << m.unresolved << ")\n"
    << "blocked drivers:";
  for (DriverId d : m.blocked_drivers) s << ' ' << raw(d);
  s << "\ninvariant violations: " << violations << '\n';
  return s.str();
}

/// Run, write logs and summary, audit; returns the exit code.
int finish_run(Simulation& sim, const fs::path& out)
{
  sim.run();
  const auto violations = audit::run_all(sim);
  const auto m = metrics::compute(sim);
  sim.logs().write(out);
  if (const auto* ta = sim.authority()) ta->write_csv(out);
  const std::string text = summary(sim, m, violations.size());
  write_file(out / "summary.txt", text + audit::format(violations));
  std::cout << text;
  if (!violations.empty()) {
    std::cerr << audit::format(violations);
    return kViolationExit;
  }
  return 0;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count)
{
  std::vector<std::uint64_t> seeds(count);
  std::iota(seeds.begin(), seeds.end(), first);
  return seeds;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"VANET trust-management simulator"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run one scenario file");
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  simulate->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "override the scenario seed");
  simulate->add_option("--out", out_dir, "output directory");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "dispute classification over density and P");
  std::string sweep_scenario = "fig5";
  std::vector<int> densities{10, 30, 50, 70, 90, 100};
  std::vector<double> p_values{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::size_t seeds = 5;
  std::uint64_t first_seed = 1;
  std::string mode = "both";
  unsigned threads = 0;
  sweep->add_option("--scenario", sweep_scenario)->check(CLI::IsMember({"fig5"}));
  sweep->add_option("--densities", densities)->delimiter(',');
  sweep->add_option("--p", p_values, "clarifier YES probabilities")->delimiter(',');
  sweep->add_option("--seeds", seeds, "repetitions per cell");
  sweep->add_option("--first-seed", first_seed);
  sweep->add_option("--mode", mode)->check(CLI::IsMember({"true", "untrue", "both"}));
  sweep->add_option("--threads", threads, "0: one per core");
  sweep->add_option("--out", out_dir);

  // compare
  auto* compare = app.add_subcommand("compare", "overhead and response time against the baseline");
  std::string compare_scenario = "fig6";
  std::vector<double> timers{30.0, 45.0};
  std::vector<int> compare_densities{10, 20, 30, 40, 50, 60, 70};
  std::size_t compare_seeds = 10;
  compare->add_option("--scenario", compare_scenario)->check(CLI::IsMember({"fig6"}));
  compare->add_option("--timers", timers)->delimiter(',');
  compare->add_option("--densities", compare_densities)->delimiter(',');
  compare->add_option("--seeds", compare_seeds);
  compare->add_option("--first-seed", first_seed);
  compare->add_option("--threads", threads);
  compare->add_option("--out", out_dir);

  // trace
  auto* trace = app.add_subcommand("trace", "scripted single-sender trust trace");
  std::string trace_scenario = "fig4";
  trace->add_option("--scenario", trace_scenario)->check(CLI::IsMember({"fig4"}));
  trace->add_option("--out", out_dir);

  // dump
  auto* dump = app.add_subcommand("dump", "print a built-in scenario as JSON");
  std::string dump_scenario = "fig4";
  int density = 50;
  double p_yes = 0.5;
  std::string protocol = "proposed";
  double timer = 30.0;
  std::uint64_t dump_seed = 1;
  dump->add_option("--scenario", dump_scenario)->check(CLI::IsMember({"fig4", "fig5", "fig6"}));
  dump->add_option("--density", density);
  dump->add_option("--p", p_yes);
  dump->add_option("--mode", mode)->check(CLI::IsMember({"true", "untrue"}));
  dump->add_option("--protocol", protocol)->check(CLI::IsMember({"proposed", "baseline"}));
  dump->add_option("--timer", timer);
  dump->add_option("--seed", dump_seed);

  CLI11_PARSE(app, argc, argv);
  const fs::path out(out_dir);

  try {
    if (*simulate) {
      Scenario s = load_scenario(config);
      if (seed) s.seed = *seed;
      Simulation sim(std::move(s));
      return finish_run(sim, out);
    }

    if (*trace) {
      Simulation sim(scenarios::fig4_trace());
      const int code = finish_run(sim, out);
      write_file(out / "trust_trace.csv",
                 metrics::trust_trace_csv(sim.logs(), {EntityId{0}, EntityId{1}, EntityId{2}}));
      return code;
    }

    if (*sweep) {
      std::size_t violations = 0;
      std::vector<std::pair<std::string, scenarios::SenderMode>> modes;
      if (mode != "untrue") modes.emplace_back("all_true", scenarios::SenderMode::AllTrue);
      if (mode != "true") modes.emplace_back("all_untrue", scenarios::SenderMode::AllUntrue);
      for (const auto& [name, m] : modes) {
        const auto rows = metrics::run_sweep(densities, p_values, seed_range(first_seed, seeds), m, threads);
        for (const auto& r : rows) violations += r.violations;
        write_file(out / ("sweep_" + name + ".csv"), metrics::sweep_csv(rows));
        const std::string cells = metrics::sweep_summary_csv(metrics::aggregate(rows));
        write_file(out / ("sweep_" + name + "_summary.csv"), cells);
        std::cout << name << '\n' << cells;
      }
      if (violations > 0) std::cerr << "invariant violations: " << violations << '\n';
      return violations > 0 ? kViolationExit : 0;
    }

    if (*compare) {
      const auto rows = metrics::run_overhead_comparison(compare_densities, timers,
                                                         seed_range(first_seed, compare_seeds), threads);
      std::size_t violations = 0;
      for (const auto& r : rows) violations += r.violations;
      write_file(out / "overhead.csv", metrics::overhead_csv(rows));
      const std::string cells = metrics::overhead_summary_csv(metrics::aggregate(rows));
      write_file(out / "overhead_summary.csv", cells);
      std::cout << cells;
      if (violations > 0) std::cerr << "invariant violations: " << violations << '\n';
      return violations > 0 ? kViolationExit : 0;
    }

    if (*dump) {
      Scenario s;
      if (dump_scenario == "fig4") {
        s = scenarios::fig4_trace();
      } else if (dump_scenario == "fig5") {
        const auto m = mode == "untrue" ? scenarios::SenderMode::AllUntrue : scenarios::SenderMode::AllTrue;
        s = scenarios::fig5_point(density, p_yes, dump_seed, m);
      } else {
        const auto p = protocol == "baseline" ? Protocol::Baseline : Protocol::Proposed;
        s = scenarios::fig6_point(density, p, timer, dump_seed);
      }
      std::cout << scenario_to_json_text(s) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
