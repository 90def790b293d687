#include "adjprof/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "adjprof/errors.hpp"

namespace adjprof {

namespace {

bool admissible(const Suggestion& s, const Strategy& strategy, Bytes current_peak) {
  return !strategy.budget_bytes || current_peak + s.dpk <= *strategy.budget_bytes;
}

// Larger time gain first, then ref order for determinism.
bool by_gain(const Suggestion& a, const Suggestion& b) {
  if (std::abs(a.dt) != std::abs(b.dt)) return std::abs(a.dt) > std::abs(b.dt);
  return a.ref < b.ref;
}

}  // namespace

std::vector<Suggestion> next_suggestions(const ProfileReport& report, const Strategy& strategy,
                                         Bytes current_peak) {
  std::vector<Suggestion> pool;
  for (const auto& s : report.suggestions)
    if (admissible(s, strategy, current_peak)) pool.push_back(s);

  if (strategy.kind == Strategy::Kind::TimeFirst) {
    // 0: no peak increase; 1: increase within the deferral threshold; 2: deferred.
    auto tier = [&](const Suggestion& s) {
      if (s.dpk <= 0) return 0;
      if (strategy.defer_above_bytes && s.dpk > *strategy.defer_above_bytes) return 2;
      return 1;
    };
    std::sort(pool.begin(), pool.end(), [&](const Suggestion& a, const Suggestion& b) {
      if (tier(a) != tier(b)) return tier(a) < tier(b);
      return by_gain(a, b);
    });
  } else {
    std::sort(pool.begin(), pool.end(), [](const Suggestion& a, const Suggestion& b) {
      if (a.dpk != b.dpk) return a.dpk < b.dpk;
      return by_gain(a, b);
    });
  }
  if (pool.size() > static_cast<std::size_t>(std::max(1, strategy.batch)))
    pool.resize(static_cast<std::size_t>(std::max(1, strategy.batch)));
  return pool;
}

std::vector<TrajectoryPoint> optimize(const CallTree& tree, const CheckpointConfig& config0,
                                      const Strategy& strategy) {
  std::vector<TrajectoryPoint> points;
  CheckpointConfig config = config0;
  std::vector<StaticRef> applied;
  for (int step = 0;; ++step) {
    AdjointCost cost;
    auto report = profile_run(tree, config, &cost);
    TrajectoryPoint point;
    point.step = step;
    point.config = config;
    point.time_s = cost.time_s;
    point.peak_bytes = cost.peak_bytes;
    point.applied = std::move(applied);
    point.suggestions = report.suggestions;
    points.push_back(std::move(point));

    auto next = next_suggestions(report, strategy, cost.peak_bytes);
    if (next.empty()) break;
    applied.clear();
    for (const auto& s : next) {
      config.inhibited.insert(s.ref);
      applied.push_back(s.ref);
    }
  }
  return points;
}

std::vector<CheckpointConfig> sample_configs(const CallTree& tree, std::size_t n, std::uint64_t seed,
                                             const CheckpointConfig& base) {
  auto refs = static_refs(tree);
  std::mt19937_64 rng(seed);
  std::vector<CheckpointConfig> configs;
  configs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CheckpointConfig c;
    c.binomial = base.binomial;
    for (const auto& ref : refs)
      if (rng() >> 63) c.inhibited.insert(ref);
    configs.push_back(std::move(c));
  }
  return configs;
}

std::vector<Evaluated> random_configs(const CallTree& tree, std::size_t n, std::uint64_t seed,
                                      const CheckpointConfig& base) {
  auto configs = sample_configs(tree, n, seed, base);
  return evaluate_configs(tree, configs);
}

std::vector<CheckpointConfig> enumerate_configs(const CallTree& tree, int guard,
                                                const CheckpointConfig& base) {
  auto refs = static_refs(tree);
  if (static_cast<int>(refs.size()) > guard || refs.size() >= 63)
    throw GuardError("exhaustive enumeration over " + std::to_string(refs.size()) +
                     " static checkpoints exceeds the guard of " + std::to_string(guard));
  std::vector<CheckpointConfig> configs;
  const std::uint64_t count = std::uint64_t{1} << refs.size();
  configs.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    CheckpointConfig c;
    c.binomial = base.binomial;
    for (std::size_t i = 0; i < refs.size(); ++i)
      if (mask >> i & 1) c.inhibited.insert(refs[i]);
    configs.push_back(std::move(c));
  }
  return configs;
}

bool dominates(const Evaluated& a, const Evaluated& b) {
  return a.time_s <= b.time_s && a.peak_bytes <= b.peak_bytes &&
         (a.time_s < b.time_s || a.peak_bytes < b.peak_bytes);
}

std::vector<Evaluated> pareto_front(std::span<const Evaluated> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].time_s != points[b].time_s) return points[a].time_s < points[b].time_s;
    return points[a].peak_bytes < points[b].peak_bytes;
  });
  // Sweep by increasing time: a point survives iff its peak is below every
  // strictly faster point's peak (equal points do not dominate each other).
  std::vector<Evaluated> front;
  Bytes best_peak = 0;
  bool any = false;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t group_end = k;
    while (group_end < order.size() && points[order[group_end]].time_s == points[order[k]].time_s)
      ++group_end;
    Bytes group_min = points[order[k]].peak_bytes;
    for (std::size_t g = k; g < group_end; ++g) {
      const auto& p = points[order[g]];
      if (p.peak_bytes == group_min && (!any || p.peak_bytes < best_peak)) front.push_back(p);
    }
    if (!any || group_min < best_peak) best_peak = group_min;
    any = true;
    k = group_end;
  }
  return front;
}

std::vector<Evaluated> pareto(const CallTree& tree, int guard, const CheckpointConfig& base) {
  auto configs = enumerate_configs(tree, guard, base);
  auto all = evaluate_configs(tree, configs);
  return pareto_front(all);
}

}  // namespace adjprof
