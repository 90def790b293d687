#include "adjprof/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "adjprof/binomial.hpp"
#include "adjprof/errors.hpp"
#include "adjprof/generator.hpp"
#include "adjprof/io.hpp"
#include "adjprof/optimizer.hpp"
#include "adjprof/profiler.hpp"
#include "adjprof/report.hpp"
#include "adjprof/simulator.hpp"

namespace adjprof {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string tree_path;
  std::string config_path;
  std::string out;
  std::string events_path;
  std::uint64_t seed = 0;
  std::string strategy = "time-first";
  int batch = 1;
  std::optional<Bytes> budget;
  std::optional<Bytes> defer_above;
  std::size_t n = 250;
  int guard = 20;
  std::int64_t steps = 0;
  std::int64_t slots = 0;
  int calls = 10;
  int depth = 3;
  std::string ranges;
  std::string experiment;
  std::vector<std::int64_t> capacities{5, 20, 80};
  // Experiment defaults: 85 static checkpoints inside an 80-step time loop.
  int exp_calls = 85;
  int exp_depth = 4;
  std::int64_t exp_steps = 80;
};

CallTree load_tree(const Options& o) { return parse_tree(read_file(o.tree_path)); }

CheckpointConfig load_config(const Options& o) {
  if (o.config_path.empty()) return {};
  return parse_config(read_file(o.config_path));
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FileError("cannot write '" + path.string() + "'");
  f << text;
}

Strategy make_strategy(const Options& o) {
  Strategy s;
  if (o.strategy == "time-first") s.kind = Strategy::Kind::TimeFirst;
  else if (o.strategy == "memory-first") s.kind = Strategy::Kind::MemoryFirst;
  else throw std::invalid_argument("unknown strategy '" + o.strategy + "'");
  if (o.batch < 1) throw std::invalid_argument("--batch must be >= 1");
  s.batch = o.batch;
  s.budget_bytes = o.budget;
  s.defer_above_bytes = o.defer_above;
  if (s.budget_bytes && *s.budget_bytes <= 0) throw std::invalid_argument("--budget must be positive");
  if (s.defer_above_bytes && *s.defer_above_bytes <= 0)
    throw std::invalid_argument("--defer-above must be positive");
  return s;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  auto tree = load_tree(o);
  auto config = load_config(o);
  AdjointCost cost;
  if (!o.events_path.empty()) {
    std::string log;
    cost = emit_events(tree, config, [&](const TraceEvent& e) { log += format_event(e) + "\n"; });
    write_file(o.events_path, log);
  } else {
    cost = simulate(tree, config);
  }
  Seconds primal = simulate_primal(tree);
  out << "time_s=" << format_seconds(cost.time_s) << "\n";
  out << "peak_bytes=" << cost.peak_bytes << "\n";
  out << "turn_bytes=" << cost.turn_bytes << "\n";
  out << "primal_s=" << format_seconds(primal) << "\n";
  out << "slowdown=" << (primal > 0 ? format_seconds(cost.time_s / primal) : std::string("inf")) << "\n";
  return kOk;
}

int cmd_profile(const Options& o, std::ostream& out) {
  auto tree = load_tree(o);
  auto config = load_config(o);
  AdjointCost cost;
  auto report = profile_run(tree, config, &cost);
  out << "time_s=" << format_seconds(cost.time_s) << " peak_bytes=" << cost.peak_bytes
      << " turn_bytes=" << cost.turn_bytes << "\n";
  out << suggestions_table(report.suggestions);
  if (!o.out.empty()) write_file(fs::path(o.out) / "suggestions.csv", suggestions_csv(report.suggestions));
  return kOk;
}

void write_trajectory(const fs::path& dir, const std::string& stem,
                      const std::vector<TrajectoryPoint>& points) {
  write_file(dir / (stem + ".csv"), trajectory_csv(points));
  for (const auto& p : points)
    write_file(dir / (stem + "_suggestions") / ("step_" + std::to_string(p.step) + ".csv"),
               suggestions_csv(p.suggestions));
}

int cmd_optimize(const Options& o, std::ostream& out) {
  auto tree = load_tree(o);
  auto config = load_config(o);
  auto points = optimize(tree, config, make_strategy(o));
  out << trajectory_csv(points);
  if (!o.out.empty()) write_trajectory(o.out, "trajectory", points);
  return kOk;
}

int cmd_random(const Options& o, std::ostream& out) {
  auto tree = load_tree(o);
  auto config = load_config(o);
  auto points = random_configs(tree, o.n, o.seed, config);
  auto csv = scatter_csv(points);
  out << csv;
  if (!o.out.empty()) write_file(fs::path(o.out) / "scatter.csv", csv);
  return kOk;
}

int cmd_pareto(const Options& o, std::ostream& out) {
  auto tree = load_tree(o);
  auto config = load_config(o);
  auto front = pareto(tree, o.guard, config);
  auto csv = pareto_csv(front);
  out << csv;
  if (!o.out.empty()) write_file(fs::path(o.out) / "pareto.csv", csv);
  return kOk;
}

int cmd_revolve(const Options& o, std::ostream& out) {
  auto schedule = make_schedule(o.steps, o.slots);
  out << revolve_header() << revolve_row(schedule, o.slots);
  return kOk;
}

int cmd_gen(const Options& o, std::ostream& out) {
  auto tree = generate_tree(o.seed, o.calls, o.depth, parse_ranges(o.ranges));
  auto text = serialize_tree(tree);
  if (o.out.empty()) out << text;
  else write_file(o.out, text);
  return kOk;
}

// gen -> random -> optimize (both strategies, plus binomial capacities on the
// time-step loop) -> pareto when small enough.
int run_experiment(const Options& o, std::ostream& out) {
  if (o.experiment != "fig6") throw std::invalid_argument("unknown experiment '" + o.experiment + "'");
  if (o.out.empty()) throw std::invalid_argument("--experiment requires --out DIR");
  const fs::path dir(o.out);
  fs::create_directories(dir);

  CostRanges ranges = parse_ranges(o.ranges);
  ranges.time_steps = o.exp_steps;
  auto tree = generate_tree(o.seed, o.exp_calls, o.exp_depth, ranges);
  write_file(dir / "tree.json", serialize_tree(tree));

  std::ostringstream summary;
  const Seconds primal = simulate_primal(tree);
  summary << "static_checkpoints=" << static_refs(tree).size() << "\n";
  summary << "primal_s=" << format_seconds(primal) << "\n";

  auto scatter = random_configs(tree, o.n, o.seed);
  write_file(dir / "scatter.csv", scatter_csv(scatter));
  summary << "random_configs=" << scatter.size() << "\n";

  auto report_line = [&](const std::string& name, const std::vector<TrajectoryPoint>& pts) {
    const auto& first = pts.front();
    const auto& last = pts.back();
    summary << name << ": steps=" << pts.size() - 1 << " initial=(" << format_seconds(first.time_s)
            << " s, " << first.peak_bytes << " B) final=(" << format_seconds(last.time_s) << " s, "
            << last.peak_bytes << " B)\n";
  };

  Options strategy_opts = o;
  for (const char* kind : {"time-first", "memory-first"}) {
    strategy_opts.strategy = kind;
    auto pts = optimize(tree, {}, make_strategy(strategy_opts));
    std::string stem = std::string("trajectory_") + (kind[0] == 't' ? "time_first" : "memory_first");
    write_trajectory(dir, stem, pts);
    report_line(stem, pts);
  }

  if (o.exp_steps > 0) {
    strategy_opts.strategy = "time-first";
    for (auto d : o.capacities) {
      CheckpointConfig base;
      base.binomial["tsteps"] = d;
      auto pts = optimize(tree, base, make_strategy(strategy_opts));
      std::string stem = "trajectory_binomial_d" + std::to_string(d);
      write_trajectory(dir, stem, pts);
      report_line(stem, pts);
    }
  }

  try {
    auto front = pareto(tree, o.guard);
    write_file(dir / "pareto.csv", pareto_csv(front));
    summary << "pareto_points=" << front.size() << "\n";
  } catch (const GuardError& e) {
    summary << "pareto skipped: " << e.what() << "\n";
  }

  write_file(dir / "summary.txt", summary.str());
  out << summary.str();
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Checkpointing profiler and schedule optimizer for stack-based adjoints", "adjprof"};
  app.require_subcommand(0, 1);
  app.add_option("--experiment", o.experiment, "Run an experiment driver (fig6)");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--calls", o.exp_calls, "Static checkpoints in the generated tree");
  app.add_option("--depth", o.exp_depth, "Maximum nesting depth of the generated tree");
  app.add_option("--steps", o.exp_steps, "Time steps of the generated outer loop");
  app.add_option("--n", o.n, "Random configurations");
  app.add_option("--ranges", o.ranges, "Generator cost ranges, key=lo:hi,...");
  app.add_option("--guard", o.guard, "Maximum static checkpoints for exhaustive search");
  app.add_option("--capacities", o.capacities, "Binomial capacities to try on the time-step loop");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--tree", o.tree_path, "Tree file")->required();
    sub->add_option("--config", o.config_path, "Config file");
    sub->add_option("--out", o.out, "Output directory");
  };

  auto* simulate_cmd = app.add_subcommand("simulate", "Exact time and stack cost of a configuration");
  common(simulate_cmd);
  simulate_cmd->add_option("--events", o.events_path, "Write the callback event log to this file");

  auto* profile_cmd = app.add_subcommand("profile", "Predict the effect of inhibiting each active checkpoint");
  common(profile_cmd);

  auto* optimize_cmd = app.add_subcommand("optimize", "Greedy improvement by repeated profiling");
  common(optimize_cmd);
  optimize_cmd->add_option("--strategy", o.strategy, "time-first | memory-first")
      ->check(CLI::IsMember({"time-first", "memory-first"}));
  optimize_cmd->add_option("--batch", o.batch, "Suggestions applied per step");
  optimize_cmd->add_option("--budget", o.budget, "Peak stack budget in bytes");
  optimize_cmd->add_option("--defer-above", o.defer_above, "Defer suggestions costing more bytes than this");

  auto* random_cmd = app.add_subcommand("random", "Evaluate random configurations");
  common(random_cmd);
  random_cmd->add_option("--n", o.n, "Number of configurations");
  random_cmd->add_option("--seed", o.seed, "Random seed");

  auto* pareto_cmd = app.add_subcommand("pareto", "Exhaustive Pareto front");
  common(pareto_cmd);
  pareto_cmd->add_option("--guard", o.guard, "Maximum static checkpoints");

  auto* revolve_cmd = app.add_subcommand("revolve", "Binomial schedule counts for l steps and d slots");
  revolve_cmd->add_option("--steps,-l", o.steps, "Number of time steps")->required();
  revolve_cmd->add_option("--slots,-d", o.slots, "Snapshot capacity")->required();

  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic tree");
  gen_cmd->add_option("--seed", o.seed, "Random seed");
  gen_cmd->add_option("--calls", o.calls, "Number of call nodes");
  gen_cmd->add_option("--depth", o.depth, "Maximum nesting depth");
  gen_cmd->add_option("--ranges", o.ranges, "Cost ranges, key=lo:hi,...");
  gen_cmd->add_option("--out", o.out, "Output file (stdout when absent)");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("adjprof");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!o.experiment.empty()) return run_experiment(o, out);
    if (simulate_cmd->parsed()) return cmd_simulate(o, out);
    if (profile_cmd->parsed()) return cmd_profile(o, out);
    if (optimize_cmd->parsed()) return cmd_optimize(o, out);
    if (random_cmd->parsed()) return cmd_random(o, out);
    if (pareto_cmd->parsed()) return cmd_pareto(o, out);
    if (revolve_cmd->parsed()) return cmd_revolve(o, out);
    if (gen_cmd->parsed()) return cmd_gen(o, out);
    err << app.help();
    return kUsage;
  } catch (const FileError& e) {
    err << "error: " << e.what() << "\n";
    return kFileNotFound;
  } catch (const TreeError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const GuardError& e) {
    err << "error: " << e.what() << "\n";
    return kGuardExceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kModelError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kFileNotFound;
  }
}

}  // namespace adjprof
