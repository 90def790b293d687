#include <doctest.h>

#include <algorithm>

#include "adjprof/errors.hpp"
#include "adjprof/optimizer.hpp"
#include "fixtures.hpp"

using namespace adjprof;
using fixtures::close;

namespace {

Suggestion sugg(const char* ref, double dt, Bytes dpk) {
  Suggestion s;
  s.ref = StaticRef::parse(ref);
  s.occurrences = 1;
  s.dt = dt;
  s.dpk = dpk;
  s.category = categorize({dt, 0, dpk});
  return s;
}

ProfileReport report_of(std::vector<Suggestion> s) {
  ProfileReport r;
  r.suggestions = std::move(s);
  return r;
}

std::vector<std::string> names(const std::vector<Suggestion>& v) {
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(s.ref.str());
  return out;
}

}  // namespace

TEST_CASE("time-first exhausts peak-neutral suggestions first") {
  auto r = report_of({sugg("B@1", -9, 100), sugg("A@1", -5, 0)});
  Strategy time_first;
  CHECK(names(next_suggestions(r, time_first, 0)) == std::vector<std::string>{"A@1"});
  Strategy memory_first{Strategy::Kind::MemoryFirst};
  CHECK(names(next_suggestions(r, memory_first, 0)) == std::vector<std::string>{"A@1"});
}

TEST_CASE("strategy ordering") {
  auto r = report_of({sugg("A@1", -1, -10), sugg("B@1", -4, 0), sugg("C@1", -9, 50),
                      sugg("D@1", -20, 500), sugg("E@1", -3, 5)});
  Strategy tf;
  tf.batch = 5;
  CHECK(names(next_suggestions(r, tf, 0)) ==
        std::vector<std::string>{"B@1", "A@1", "D@1", "C@1", "E@1"});
  tf.defer_above_bytes = 100;
  CHECK(names(next_suggestions(r, tf, 0)) ==
        std::vector<std::string>{"B@1", "A@1", "C@1", "E@1", "D@1"});
  Strategy mf{Strategy::Kind::MemoryFirst, 5};
  CHECK(names(next_suggestions(r, mf, 0)) ==
        std::vector<std::string>{"A@1", "B@1", "E@1", "C@1", "D@1"});
  mf.budget_bytes = 1000;
  CHECK(names(next_suggestions(r, mf, 960)) == std::vector<std::string>{"A@1", "B@1", "E@1"});
}

TEST_CASE("T1 trajectory") {
  auto pts = optimize(fixtures::t1(), {}, {});
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].time_s == doctest::Approx(21.0));
  CHECK(pts[0].peak_bytes == 44);
  CHECK(pts[0].applied.empty());
  CHECK(pts[1].time_s == doctest::Approx(18.0));
  CHECK(pts[1].peak_bytes == 60);
  CHECK(pts[1].applied == std::vector<StaticRef>{StaticRef("C", 42)});
  CHECK(pts[1].suggestions.empty());
}

TEST_CASE("budget blocks the T1 suggestion") {
  for (auto kind : {Strategy::Kind::TimeFirst, Strategy::Kind::MemoryFirst}) {
    Strategy s{kind};
    s.budget_bytes = 50;
    auto pts = optimize(fixtures::t1(), {}, s);
    CHECK(pts.size() == 1);
    auto report = profile_run(fixtures::t1(), {});
    CHECK(next_suggestions(report, s, 44).empty());
  }
}

TEST_CASE("degenerate starting points") {
  CallTree empty;
  empty.name = "flat";
  empty.items.push_back({Segment{"s", 1, 2, 3, 4}});
  CHECK(optimize(empty, {}, {Strategy::Kind::MemoryFirst}).size() == 1);
  CHECK(optimize(fixtures::t1(), fixtures::inhibit({"C"}), {}).size() == 1);
}

TEST_CASE("trajectories improve time and end at all-inhibited") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CAPTURE(seed);
    auto tree = fixtures::suite_tree(seed);
    CheckpointConfig all;
    for (const auto& r : static_refs(tree)) all.inhibited.insert(r);
    auto floor = simulate(tree, all);
    for (auto kind : {Strategy::Kind::TimeFirst, Strategy::Kind::MemoryFirst}) {
      for (int batch : {1, 3}) {
        Strategy s{kind, batch};
        auto pts = optimize(tree, {}, s);
        for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].time_s < pts[i - 1].time_s);
        CHECK(close(pts.back().time_s, floor.time_s));
        CHECK(pts.back().peak_bytes == floor.peak_bytes);
      }
    }
  }
}

TEST_CASE("random sampling is deterministic and uniform-ish") {
  auto tree = generate_tree(5, 10, 3, {});
  auto a = sample_configs(tree, 250, 1);
  auto b = sample_configs(tree, 250, 1);
  auto c = sample_configs(tree, 250, 2);
  REQUIRE(a.size() == 250);
  std::size_t inhibited = 0, differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].inhibited == b[i].inhibited);
    differ += a[i].inhibited != c[i].inhibited;
    inhibited += a[i].inhibited.size();
  }
  CHECK(differ > 200);
  CHECK(inhibited > 1100);
  CHECK(inhibited < 1400);
}

TEST_CASE("parallel evaluation matches the serial reference") {
  CostRanges r;
  r.loop_probability = 0.3;
  auto tree = generate_tree(11, 20, 4, r);
  auto configs = sample_configs(tree, 300, 3);
  for (std::size_t i = 0; i < configs.size(); i += 4)
    for (const auto& id : loop_ids(tree)) configs[i].binomial[id] = 1 + static_cast<std::int64_t>(i % 4);
  auto serial = evaluate_configs_serial(tree, configs);
  auto parallel = evaluate_configs(tree, configs);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].config.inhibited == parallel[i].config.inhibited);
    CHECK(serial[i].time_s == parallel[i].time_s);
    CHECK(serial[i].peak_bytes == parallel[i].peak_bytes);
  }
}

TEST_CASE("parallel evaluation reports the first failing config") {
  auto tree = fixtures::t1();
  std::vector<CheckpointConfig> configs(50);
  configs[17].binomial["first"] = 1;
  configs[31].binomial["second"] = 1;
  try {
    evaluate_configs(tree, configs);
    FAIL("expected ConfigMismatch");
  } catch (const ConfigMismatch& e) {
    CHECK(std::string(e.what()).find("first") != std::string::npos);
  }
}

TEST_CASE("enumeration and guard") {
  auto tree = generate_tree(2, 4, 2, {});
  auto all = enumerate_configs(tree);
  CHECK(all.size() == 16);
  CHECK(all.front().inhibited.empty());
  CHECK(all.back().inhibited.size() == 4);
  CHECK_THROWS_AS(enumerate_configs(generate_tree(2, 21, 3, {}), 20), GuardError);
  CHECK_NOTHROW(enumerate_configs(tree, 4));
  CHECK_THROWS_AS(enumerate_configs(tree, 3), GuardError);
}

TEST_CASE("pareto front") {
  std::vector<Evaluated> pts{{{}, 3, 10}, {{}, 1, 30}, {{}, 2, 20}, {{}, 2, 25},
                             {{}, 4, 10}, {{}, 1, 30}, {{}, 5, 5}};
  auto front = pareto_front(pts);
  std::vector<std::pair<double, Bytes>> got;
  for (const auto& p : front) got.push_back({p.time_s, p.peak_bytes});
  CHECK(got == std::vector<std::pair<double, Bytes>>{{1, 30}, {1, 30}, {2, 20}, {3, 10}, {5, 5}});
  CHECK(dominates(pts[0], pts[4]));
  CHECK_FALSE(dominates(pts[1], pts[5]));

  // Brute-force check against the definition on a real tree.
  auto tree = fixtures::suite_tree(9);
  auto everything = evaluate_configs(tree, enumerate_configs(tree));
  auto ex = pareto(tree);
  for (const auto& p : everything) {
    bool dominated = std::any_of(everything.begin(), everything.end(),
                                 [&](const Evaluated& q) { return dominates(q, p); });
    bool on_front = std::any_of(ex.begin(), ex.end(), [&](const Evaluated& q) {
      return q.config.inhibited == p.config.inhibited;
    });
    CHECK(dominated != on_front);
  }
}
