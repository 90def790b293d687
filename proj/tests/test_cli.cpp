#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "adjprof/cli.hpp"
#include "adjprof/io.hpp"
#include "adjprof/report.hpp"
#include "adjprof/simulator.hpp"
#include "fixtures.hpp"

using namespace adjprof;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("adjprof-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text) const {
    auto p = path / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

std::string slurp(const fs::path& p) { return read_file(p.string()); }

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

// Every file under `dir`, relative path to contents.
std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return files;
}

}  // namespace

TEST_CASE("simulate prints the T1 totals") {
  TempDir tmp("simulate");
  auto tree = tmp.file("t1.json", serialize_tree(fixtures::t1()));
  auto r = cli({"simulate", "--tree", tree});
  CHECK(r.code == kOk);
  CHECK(r.out ==
        "time_s=21.000000000\npeak_bytes=44\nturn_bytes=44\nprimal_s=6.000000000\nslowdown=3.500000000\n");

  auto cfg = tmp.file("c.cfg", "inhibit C@42\n");
  r = cli({"simulate", "--tree", tree, "--config", cfg, "--events", (tmp.path / "ev.tsv").string()});
  CHECK(r.code == kOk);
  CHECK(r.out.rfind("time_s=18.000000000\npeak_bytes=60\n", 0) == 0);
  CHECK(slurp(tmp.path / "ev.tsv") == "TURN\t-\t-\t9.000000000\t60\n");
}

TEST_CASE("profile writes the suggestion CSV") {
  TempDir tmp("profile");
  auto tree = tmp.file("t1.json", serialize_tree(fixtures::t1()));
  auto r = cli({"profile", "--tree", tree, "--out", (tmp.path / "out").string()});
  CHECK(r.code == kOk);
  CHECK(slurp(tmp.path / "out" / "suggestions.csv") ==
        "ref,occurrences,category,dt_s,dtn_bytes,dpk_bytes\nC@42,1,3,-3.000000000,16,16\n");
}

TEST_CASE("optimize on a tree without checkpoints") {
  TempDir tmp("flat");
  CallTree t;
  t.name = "flat";
  t.items.push_back({Segment{"s", 1, 2, 3, 4}});
  auto tree = tmp.file("flat.json", serialize_tree(t));
  auto r = cli({"optimize", "--tree", tree, "--strategy", "memory-first"});
  CHECK(r.code == kOk);
  CHECK(r.out == "step,time_s,peak_bytes,applied\n0,5.000000000,4,\n");
}

TEST_CASE("exit codes") {
  TempDir tmp("codes");
  auto tree = tmp.file("t1.json", serialize_tree(fixtures::t1()));
  CHECK(cli({}).code == kUsage);
  CHECK(cli({"frobnicate"}).code == kUsage);
  CHECK(cli({"simulate"}).code == kUsage);
  CHECK(cli({"optimize", "--tree", tree, "--strategy", "fastest"}).code == kUsage);
  CHECK(cli({"simulate", "--tree", (tmp.path / "missing.json").string()}).code == kFileNotFound);
  CHECK(cli({"simulate", "--tree", tmp.file("bad.json", "{")}).code == kParseError);
  CHECK(cli({"simulate", "--tree", tree, "--config", tmp.file("bad.cfg", "keep C")}).code ==
        kParseError);
  CHECK(cli({"simulate", "--tree", tree, "--config", tmp.file("loop.cfg", "binomial X 2")}).code ==
        kModelError);
  auto big = tmp.file("big.json", serialize_tree(generate_tree(1, 12, 3, {})));
  CHECK(cli({"pareto", "--tree", big, "--guard", "10"}).code == kGuardExceeded);
  CHECK(cli({"--help"}).code == kOk);
}

TEST_CASE("random on the 85-checkpoint tree") {
  TempDir tmp("random");
  auto r = cli({"gen", "--seed", "1", "--calls", "85", "--depth", "4", "--out",
                (tmp.path / "tree.json").string()});
  REQUIRE(r.code == kOk);
  auto tree = parse_tree(slurp(tmp.path / "tree.json"));
  CHECK(static_refs(tree).size() == 85);
  r = cli({"random", "--tree", (tmp.path / "tree.json").string(), "--n", "250", "--seed", "1",
           "--out", tmp.path.string()});
  REQUIRE(r.code == kOk);
  auto rows = csv_rows(slurp(tmp.path / "scatter.csv"));
  CHECK(rows.size() == 250);
  auto configs = sample_configs(tree, 250, 1);
  for (std::size_t i = 0; i < rows.size(); i += 25) {
    auto cost = simulate(tree, configs[i]);
    CHECK(rows[i][1] == format_seconds(cost.time_s));
    CHECK(rows[i][2] == std::to_string(cost.peak_bytes));
  }
}

TEST_CASE("emitted CSVs re-validate against simulate") {
  TempDir tmp("revalidate");
  auto tree_path = tmp.file("tree.json", serialize_tree(fixtures::suite_tree(7)));
  auto tree = parse_tree(slurp(tree_path));

  REQUIRE(cli({"pareto", "--tree", tree_path, "--out", tmp.path.string()}).code == kOk);
  for (const auto& row : csv_rows(slurp(tmp.path / "pareto.csv"))) {
    auto cost = simulate(tree, parse_config_token(row.at(2)));
    CHECK(row[0] == format_seconds(cost.time_s));
    CHECK(row[1] == std::to_string(cost.peak_bytes));
  }

  REQUIRE(cli({"optimize", "--tree", tree_path, "--batch", "2", "--out", tmp.path.string()}).code ==
          kOk);
  CheckpointConfig config;
  for (const auto& row : csv_rows(slurp(tmp.path / "trajectory.csv"))) {
    for (const auto& r : parse_config_token(row.at(3)).inhibited) config.inhibited.insert(r);
    auto cost = simulate(tree, config);
    CHECK(row[1] == format_seconds(cost.time_s));
    CHECK(row[2] == std::to_string(cost.peak_bytes));
    CHECK(fs::exists(tmp.path / "trajectory_suggestions" / ("step_" + row[0] + ".csv")));
  }
}

TEST_CASE("revolve row") {
  auto r = cli({"revolve", "--steps", "10", "--slots", "2"});
  CHECK(r.code == kOk);
  CHECK(r.out.rfind("l\td\tr\tE\tstores\trestores\n10\t2\t3\t30\t", 0) == 0);
}

TEST_CASE("outputs are byte-identical across runs") {
  TempDir tmp("determinism");
  auto run_all = [&](const std::string& tag) {
    auto dir = tmp.path / tag;
    fs::create_directories(dir);
    auto tree = (dir / "tree.json").string();
    std::string log;
    auto step = [&](std::vector<std::string> args) {
      auto r = cli(args);
      REQUIRE(r.code == kOk);
      log += r.out;
    };
    step({"gen", "--seed", "4", "--calls", "9", "--depth", "3", "--ranges", "loops=0.3", "--out", tree});
    step({"simulate", "--tree", tree, "--events", (dir / "events.tsv").string()});
    step({"profile", "--tree", tree, "--out", dir.string()});
    step({"optimize", "--tree", tree, "--out", (dir / "tf").string()});
    step({"optimize", "--tree", tree, "--strategy", "memory-first", "--out", (dir / "mf").string()});
    step({"random", "--tree", tree, "--n", "40", "--seed", "3", "--out", dir.string()});
    step({"pareto", "--tree", tree, "--out", dir.string()});
    step({"revolve", "--steps", "80", "--slots", "20"});
    step({"--experiment", "fig6", "--out", (dir / "fig6").string(), "--seed", "2", "--calls", "12",
          "--steps", "8", "--n", "30"});
    std::ofstream(dir / "stdout.txt") << log;
    return snapshot_dir(dir);
  };
  auto a = run_all("a");
  auto b = run_all("b");
  CHECK(a.size() > 10);
  CHECK(a == b);
}
