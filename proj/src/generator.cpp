#include "adjprof/generator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace adjprof {

namespace {

// std::*_distribution output is implementation-defined; map raw engine bits
// ourselves so that trees are identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(const Range& r) { return r.lo + (r.hi - r.lo) * unit(); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }
  std::int64_t integer(const Range& r) {
    return integer(static_cast<std::int64_t>(std::llround(r.lo)),
                   static_cast<std::int64_t>(std::llround(r.hi)));
  }
  bool chance(double p) { return unit() < p; }

private:
  std::mt19937_64 engine_;
};

double millis(double x) { return std::round(x * 1000.0) / 1000.0; }

struct Proto {
  enum class Kind { Root, Call, Loop, Seg } kind;
  int depth = 0;
  std::vector<int> children;
  TreeItem item;  // payload without body
};

Body assemble(const std::vector<Proto>& protos, int index) {
  Body body;
  for (int child : protos[index].children) {
    TreeItem item = protos[child].item;
    if (auto* c = std::get_if<CallNode>(&item.node)) c->body = assemble(protos, child);
    else if (auto* l = std::get_if<LoopNode>(&item.node)) l->body = assemble(protos, child);
    body.push_back(std::move(item));
  }
  return body;
}

}  // namespace

CallTree generate_tree(std::uint64_t seed, int n_calls, int max_depth, const CostRanges& ranges) {
  if (n_calls < 1 || max_depth < 1)
    throw std::invalid_argument("generate_tree: n_calls and max_depth must be positive");
  Rng rng(seed);
  std::vector<Proto> protos;
  protos.push_back({Proto::Kind::Root, 0, {}, {}});
  std::vector<std::string> procs;
  int loops = 0;

  for (int i = 0; i < n_calls; ++i) {
    std::vector<int> candidates;
    for (int p = 0; p < static_cast<int>(protos.size()); ++p)
      if (protos[p].kind != Proto::Kind::Seg && protos[p].depth < max_depth) candidates.push_back(p);
    int parent = candidates[rng.integer(0, static_cast<std::int64_t>(candidates.size()) - 1)];

    if (ranges.loop_probability > 0 && protos[parent].depth + 2 <= max_depth &&
        rng.chance(ranges.loop_probability)) {
      LoopNode loop;
      loop.id = "L" + std::to_string(loops++);
      loop.iterations = std::max<std::int64_t>(1, rng.integer(ranges.loop_iterations));
      loop.step_snapshot_bytes = rng.integer(ranges.snapshot_bytes);
      loop.t_snp_write = millis(rng.uniform(ranges.t_snp));
      loop.t_snp_read = millis(rng.uniform(ranges.t_snp));
      protos.push_back({Proto::Kind::Loop, protos[parent].depth + 1, {}, std::move(loop)});
      int loop_index = static_cast<int>(protos.size()) - 1;
      protos[parent].children.push_back(loop_index);
      parent = loop_index;
    }

    CallNode call;
    if (!procs.empty() && rng.chance(ranges.proc_reuse)) {
      call.ref.proc = procs[rng.integer(0, static_cast<std::int64_t>(procs.size()) - 1)];
    } else {
      call.ref.proc = "p" + std::to_string(procs.size());
      procs.push_back(call.ref.proc);
    }
    call.ref.site = 10 * (i + 1) + rng.integer(0, 9);
    call.snapshot_bytes = rng.integer(ranges.snapshot_bytes);
    call.t_snp_write = millis(rng.uniform(ranges.t_snp));
    call.t_snp_read = millis(rng.uniform(ranges.t_snp));
    protos.push_back({Proto::Kind::Call, protos[parent].depth + 1, {}, std::move(call)});
    protos[parent].children.push_back(static_cast<int>(protos.size()) - 1);
  }

  int segments = 0;
  const auto n_containers = protos.size();
  for (std::size_t p = 0; p < n_containers; ++p) {
    auto count = std::max<std::int64_t>(1, rng.integer(ranges.segments_per_body));
    for (std::int64_t k = 0; k < count; ++k) {
      Segment s;
      s.label = "s" + std::to_string(segments++);
      s.t_primal = millis(rng.uniform(ranges.t_primal));
      s.t_fwd = millis(s.t_primal * rng.uniform(ranges.fwd_factor));
      s.t_bwd = millis(s.t_primal * rng.uniform(ranges.bwd_factor));
      s.tape_bytes = rng.integer(ranges.tape_bytes);
      auto at = rng.integer(0, static_cast<std::int64_t>(protos[p].children.size()));
      protos.push_back({Proto::Kind::Seg, protos[p].depth + 1, {}, std::move(s)});
      auto& children = protos[p].children;  // after the push, which may reallocate
      children.insert(children.begin() + at, static_cast<int>(protos.size()) - 1);
    }
  }

  CallTree tree;
  tree.name = "gen-" + std::to_string(seed);
  tree.items = assemble(protos, 0);
  if (ranges.time_steps > 0) {
    LoopNode steps;
    steps.id = "tsteps";
    steps.iterations = ranges.time_steps;
    steps.step_snapshot_bytes = rng.integer(ranges.snapshot_bytes);
    steps.t_snp_write = millis(rng.uniform(ranges.t_snp));
    steps.t_snp_read = millis(rng.uniform(ranges.t_snp));
    steps.body = std::move(tree.items);
    tree.items.clear();
    tree.items.push_back(std::move(steps));
  }
  return tree;
}

namespace {

Range parse_range(const std::string& key, std::string_view value) {
  auto colon = value.find(':');
  try {
    if (colon == std::string_view::npos) {
      double x = std::stod(std::string(value));
      return {x, x};
    }
    Range r{std::stod(std::string(value.substr(0, colon))),
            std::stod(std::string(value.substr(colon + 1)))};
    if (r.hi < r.lo) throw std::invalid_argument("empty range");
    return r;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad range for '" + key + "': '" + std::string(value) + "'");
  }
}

}  // namespace

CostRanges parse_ranges(std::string_view spec) {
  CostRanges r;
  while (!spec.empty()) {
    auto comma = spec.find(',');
    std::string_view entry = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (entry.empty()) continue;
    auto eq = entry.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("expected key=value in '" + std::string(entry) + "'");
    std::string key(entry.substr(0, eq));
    auto value = entry.substr(eq + 1);
    Range v = parse_range(key, value);
    if (key == "t_primal") r.t_primal = v;
    else if (key == "fwd_factor") r.fwd_factor = v;
    else if (key == "bwd_factor") r.bwd_factor = v;
    else if (key == "tape") r.tape_bytes = v;
    else if (key == "snapshot") r.snapshot_bytes = v;
    else if (key == "t_snp") r.t_snp = v;
    else if (key == "segments") r.segments_per_body = v;
    else if (key == "iterations") r.loop_iterations = v;
    else if (key == "proc_reuse") r.proc_reuse = v.lo;
    else if (key == "loops") r.loop_probability = v.lo;
    else if (key == "time_steps") r.time_steps = static_cast<std::int64_t>(v.lo);
    else throw std::invalid_argument("unknown range key '" + key + "'");
    if (v.lo < 0) throw std::invalid_argument("negative value for '" + key + "'");
  }
  return r;
}

}  // namespace adjprof
