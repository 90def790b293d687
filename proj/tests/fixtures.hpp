#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "adjprof/generator.hpp"
#include "adjprof/io.hpp"
#include "adjprof/model.hpp"

namespace fixtures {

using namespace adjprof;

inline Segment seg(std::string label, Seconds p, Seconds f, Seconds b, Bytes tape) {
  return Segment{std::move(label), p, f, b, tape};
}

inline CallNode call(std::string proc, std::int64_t site, Bytes snap, Seconds tw, Seconds tr,
                     Body body) {
  CallNode c;
  c.ref = StaticRef(std::move(proc), site);
  c.snapshot_bytes = snap;
  c.t_snp_write = tw;
  c.t_snp_read = tr;
  c.body = std::move(body);
  return c;
}

inline LoopNode loop(std::string id, std::int64_t n, Bytes snap, Seconds tw, Seconds tr, Body body) {
  LoopNode l;
  l.id = std::move(id);
  l.iterations = n;
  l.step_snapshot_bytes = snap;
  l.t_snp_write = tw;
  l.t_snp_read = tr;
  l.body = std::move(body);
  return l;
}

// U; C@42 { body }; D
inline CallTree t1() {
  CallTree t;
  t.name = "t1";
  t.items.push_back({seg("U", 1, 2, 2, 10)});
  t.items.push_back({call("C", 42, 4, 0.5, 0.5, {TreeItem{seg("body", 2, 3, 3, 20)}})});
  t.items.push_back({seg("D", 3, 4, 4, 30)});
  return t;
}

// A call whose snapshot dwarfs everything it saves.
inline CallTree snapshot_heavy() {
  CallTree t;
  t.name = "snapshot-heavy";
  t.items.push_back({seg("U", 1, 1, 1, 0)});
  t.items.push_back({call("C", 1, 50, 0.1, 0.1, {TreeItem{seg("body", 1, 1, 1, 5)}})});
  t.items.push_back({seg("D", 1, 1, 1, 10)});
  return t;
}

inline StaticRef ref(const char* token) { return StaticRef::parse(token); }

inline CheckpointConfig inhibit(std::initializer_list<const char*> refs) {
  CheckpointConfig c;
  for (auto r : refs) c.inhibited.insert(ref(r));
  return c;
}

// Exactness-suite tree: at most 10 static checkpoints, 2 levels, 40 nodes.
inline CallTree suite_tree(std::uint64_t seed) {
  CostRanges ranges;
  ranges.loop_probability = 0.25;
  ranges.loop_iterations = {2, 5};
  const int calls = 1 + static_cast<int>(seed % 10);
  auto tree = generate_tree(seed, calls, 2, ranges);
  if (node_count(tree) > 40) {
    ranges.loop_probability = 0;
    tree = generate_tree(seed, calls, 2, ranges);
  }
  return tree;
}

// Random inhibition sets plus random capacities for some loops.
inline std::vector<CheckpointConfig> suite_configs(const CallTree& tree, std::uint64_t seed,
                                                   int n) {
  std::mt19937_64 rng(seed * 7919 + 17);
  auto refs = static_refs(tree);
  auto loops = loop_ids(tree);
  std::vector<CheckpointConfig> out;
  out.push_back({});
  for (int k = 1; k < n; ++k) {
    CheckpointConfig c;
    for (const auto& r : refs)
      if (rng() >> 63) c.inhibited.insert(r);
    for (const auto& id : loops)
      if (rng() % 3 == 0) c.binomial[id] = 1 + static_cast<std::int64_t>(rng() % 6);
    out.push_back(std::move(c));
  }
  return out;
}

inline bool close(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace fixtures
