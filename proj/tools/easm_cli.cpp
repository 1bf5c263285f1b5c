#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "easm/detection.hpp"
#include "easm/error.hpp"
#include "easm/load_model.hpp"
#include "easm/scenario.hpp"
#include "easm/sim.hpp"
#include "easm/strategies.hpp"

namespace fs = std::filesystem;
using namespace easm;

namespace {

struct CommonOptions {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> strategies;
  int verbosity = 0;
};

ScenarioConfig load_config(const CommonOptions& opts) {
  auto config = load_scenario(opts.scenario);
  if (opts.seed) {
    config.seed = *opts.seed;
    config.step.planner.seed = *opts.seed;
  }
  if (!opts.strategies.empty()) {
    config.strategies.clear();
    for (const auto& name : opts.strategies) {
      const auto kind = parse_strategy(name);
      if (!kind) throw ParseError("unknown strategy '" + name + "'");
      config.strategies.push_back(*kind);
    }
  }
  if (!opts.out.empty()) {
    config.output_dir = opts.out;
  } else if (config.output_dir.is_relative()) {
    config.output_dir = config.base_dir / config.output_dir;
  }
  return config;
}

// Writes next to the target, then renames, so readers never see a partial file.
void write_atomically(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    body(out);
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string fixed(double v, int precision = 3) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

void print_loads(std::ostream& out, const NetworkState& state, std::span<const double> loads) {
  for (std::size_t c = 0; c < loads.size(); ++c) {
    out << (c ? ", " : "") << state.controller(c).id << '=' << fixed(loads[c], 2);
  }
}

int cmd_plan(const CommonOptions& opts) {
  const auto config = load_config(opts);
  const auto state = build_state(config);
  const auto kind = config.strategies.size() == 1 ? config.strategies.front() : StrategyKind::easm;
  const auto& cfg = config.step;
  const auto detection =
      detect(state, cfg.load, cfg.mode, {.zero_policy = config.rebalance.zero_policy});

  auto& out = std::cout;
  out << "scenario " << config.name << " (" << to_string(cfg.mode) << " load, "
      << to_string(kind) << ", seed " << config.seed << ")\n";
  if (opts.verbosity > 0) {
    for (const auto& w : state.domain_size_warnings()) std::cerr << "warning: " << w << '\n';
  }
  out << "load difference matrix:\n";
  const auto m = state.controller_count();
  out << std::setw(10) << "";
  for (std::size_t n = 0; n < m; ++n) out << std::setw(10) << state.controller(n).id;
  out << '\n';
  for (std::size_t i = 0; i < m; ++i) {
    out << std::setw(10) << state.controller(i).id;
    for (std::size_t n = 0; n < m; ++n) out << std::setw(10) << fixed(detection.matrix(i, n));
    out << '\n';
  }
  out << "threshold: " << fixed(detection.threshold) << '\n';
  out << "trigger set:";
  for (const auto& t : detection.triggers) {
    out << " (" << state.controller(t.m).id << ',' << state.controller(t.n).id
        << " delta=" << fixed(t.delta) << ')';
  }
  out << (detection.triggers.empty() ? " none\n" : "\n");

  const auto before = detection.loads;
  out << "loads before: ";
  print_loads(out, state, before);
  out << "\nLBR before: " << fixed(lbr(before), 4) << '\n';

  if (!detection.imbalanced()) {
    out << "no migration needed\n";
    return 0;
  }

  auto step_cfg = cfg;
  step_cfg.rebalance = config.rebalance;
  const auto result = step(kind, state, step_cfg, config.seed);
  const auto after = controller_loads(result.state, cfg.load, cfg.mode);

  out << "migration triplets:\n";
  if (result.report.executed.empty()) {
    out << "  none\n";
    if (!result.report.balanced) out << "stalled: no feasible migration lowers the load variance\n";
  }
  for (const auto& e : result.report.executed) {
    const auto& t = e.triplet;
    out << "  round " << e.round << ": (" << state.controller(t.emigration).id << ", "
        << state.switch_id(t.sw) << ", " << state.controller(t.immigration).id
        << ")  cost=" << fixed(t.cost) << "  simplified_cost=" << fixed(t.simplified_cost)
        << "  efficiency=" << fixed(t.efficiency, 6) << '\n';
  }
  for (const auto& w : result.report.warnings) {
    if (opts.verbosity > 0) std::cerr << "note: " << w << '\n';
  }
  out << "loads after: ";
  print_loads(out, state, after);
  out << "\nLBR after: " << fixed(lbr(after), 4) << '\n';
  out << "rounds: " << result.report.rounds
      << "  balanced: " << (result.report.balanced ? "yes" : "no")
      << "  total cost: " << fixed(result.report.cost())
      << "  total simplified cost: " << fixed(result.report.simplified_cost()) << '\n';

  const auto path = config.output_dir / (config.name + "_plan.csv");
  write_atomically(path, [&](std::ostream& csv) {
    csv << std::setprecision(10);
    csv << "round,emigration,switch,immigration,cost,simplified_cost,efficiency";
    for (const auto& c : state.controllers()) csv << ",before_" << c.id;
    for (const auto& c : state.controllers()) csv << ",after_" << c.id;
    csv << '\n';
    for (const auto& e : result.report.executed) {
      const auto& t = e.triplet;
      csv << e.round << ',' << state.controller(t.emigration).id << ',' << state.switch_id(t.sw)
          << ',' << state.controller(t.immigration).id << ',' << t.cost << ','
          << t.simplified_cost << ',' << t.efficiency;
      for (const auto l : e.loads_before) csv << ',' << l;
      for (const auto l : e.loads_after) csv << ',' << l;
      csv << '\n';
    }
  });
  out << "report: " << path.string() << '\n';
  return 0;
}

int cmd_compare(const CommonOptions& opts, bool parallel) {
  const auto config = load_config(opts);
  if (config.strategies.size() < 2) throw ParseError("compare needs at least two strategies");
  const auto state = build_state(config);
  const auto trace = build_trace(config, state);
  const RunOptions run_options{.check_invariants = true};

  auto run_one = [&](StrategyKind kind) {
    return run(state, kind, trace, config.step, config.seed, run_options);
  };
  std::vector<std::vector<MetricsRecord>> results(config.strategies.size());
  if (parallel) {
    std::vector<std::future<std::vector<MetricsRecord>>> jobs;
    for (const auto kind : config.strategies) jobs.push_back(std::async(std::launch::async, run_one, kind));
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < results.size(); ++i) results[i] = run_one(config.strategies[i]);
  }

  std::vector<RunSummary> summaries;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto name = std::string(to_string(config.strategies[i]));
    const auto path = config.output_dir / (config.name + "_" + name + ".csv");
    write_atomically(path, [&](std::ostream& csv) { write_metrics_csv(csv, state, results[i]); });
    summaries.push_back(summarize(name, results[i]));
    for (const auto& r : results[i]) {
      if (r.error.empty()) continue;
      ++errors;
      std::cerr << "error: " << name << " step " << r.step << ": " << r.error << '\n';
    }
    if (opts.verbosity > 0) std::cerr << "wrote " << path.string() << '\n';
  }
  const auto summary_path = config.output_dir / (config.name + "_summary.csv");
  write_atomically(summary_path, [&](std::ostream& csv) { write_summary_csv(csv, summaries); });

  std::cout << std::left << std::setw(8) << "strategy" << std::right << std::setw(12)
            << "mean_lbr" << std::setw(12) << "final_lbr" << std::setw(14) << "total_cost"
            << std::setw(12) << "migrations" << std::setw(10) << "rounds" << '\n';
  for (const auto& s : summaries) {
    std::cout << std::left << std::setw(8) << s.strategy << std::right << std::setw(12)
              << fixed(s.mean_lbr, 4) << std::setw(12) << fixed(s.final_lbr, 4) << std::setw(14)
              << fixed(s.total_cost, 2) << std::setw(12) << s.total_migrations << std::setw(10)
              << s.total_rounds << '\n';
  }
  std::cout << "summary: " << summary_path.string() << '\n';
  return errors == 0 ? 0 : 1;
}

int cmd_info(const CommonOptions& opts) {
  const auto config = load_config(opts);
  const auto state = build_state(config);
  const auto& topo = state.topology();
  std::cout << "topology: " << (topo.name().empty() ? "(unnamed)" : topo.name()) << ", "
            << topo.node_count() << " nodes, " << topo.link_count() << " links, diameter "
            << topo.diameter() << '\n';
  const auto loads = controller_loads(state, config.step.load, config.step.mode);
  for (std::size_t c = 0; c < state.controller_count(); ++c) {
    const auto& rec = state.controller(c);
    std::cout << rec.id << " @ " << rec.node << ": " << state.switches_of(c).size()
              << " switches, load " << fixed(loads[c], 2) << " / " << fixed(rec.capacity, 0)
              << '\n';
  }
  for (const auto& w : state.domain_size_warnings()) std::cout << "warning: " << w << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Switch migration planner and strategy comparison"};
  app.require_subcommand(1);
  CommonOptions opts;
  bool parallel = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", opts.scenario, "Scenario JSON file")->required();
    sub->add_option("-o,--out", opts.out, "Output directory (overrides the scenario)");
    sub->add_option("--seed", opts.seed, "Seed override");
    sub->add_option("-s,--strategy", opts.strategies, "Strategy override (repeatable)");
    sub->add_flag("-v,--verbose", opts.verbosity, "More diagnostics on stderr");
  };
  auto* plan_cmd = app.add_subcommand("plan", "Detect, plan and execute one rebalance");
  add_common(plan_cmd);
  auto* compare_cmd = app.add_subcommand("compare", "Run every strategy on the same trace");
  add_common(compare_cmd);
  compare_cmd->add_flag("-j,--parallel", parallel, "Run strategies concurrently");
  auto* info_cmd = app.add_subcommand("info", "Summarize the scenario network");
  add_common(info_cmd);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*plan_cmd) return cmd_plan(opts);
    if (*compare_cmd) return cmd_compare(opts, parallel);
    if (*info_cmd) return cmd_info(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
