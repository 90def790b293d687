#pragma once

// Greedy configuration search driven by re-profiling, plus the baselines it
// is compared against: random configurations and exhaustive Pareto fronts.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adjprof/model.hpp"
#include "adjprof/profiler.hpp"
#include "adjprof/simulator.hpp"

namespace adjprof {

struct Strategy {
  enum class Kind { TimeFirst, MemoryFirst };
  Kind kind = Kind::TimeFirst;
  int batch = 1;
  std::optional<Bytes> budget_bytes;
  std::optional<Bytes> defer_above_bytes;  // TimeFirst only
};

struct TrajectoryPoint {
  int step = 0;
  CheckpointConfig config;
  Seconds time_s = 0;
  Bytes peak_bytes = 0;
  std::vector<StaticRef> applied;       // empty at step 0
  std::vector<Suggestion> suggestions;  // report of this step's profiling run
};

/// Up to `strategy.batch` suggestions to apply next; empty when none is admissible.
std::vector<Suggestion> next_suggestions(const ProfileReport& report, const Strategy& strategy,
                                         Bytes current_peak);

/// Profile, apply, repeat until no admissible suggestion remains.
std::vector<TrajectoryPoint> optimize(const CallTree& tree, const CheckpointConfig& config0,
                                      const Strategy& strategy);

struct Evaluated {
  CheckpointConfig config;
  Seconds time_s = 0;
  Bytes peak_bytes = 0;
};

/// Simulates every config; results are in input order. Runs in parallel when
/// OpenMP is available.
std::vector<Evaluated> evaluate_configs(const CallTree& tree,
                                        std::span<const CheckpointConfig> configs);

/// Single-threaded reference for evaluate_configs.
std::vector<Evaluated> evaluate_configs_serial(const CallTree& tree,
                                               std::span<const CheckpointConfig> configs);

/// `n` configs, each static ref inhibited with probability 1/2. Binomial
/// entries of `base` are carried over.
std::vector<CheckpointConfig> sample_configs(const CallTree& tree, std::size_t n,
                                             std::uint64_t seed,
                                             const CheckpointConfig& base = {});

std::vector<Evaluated> random_configs(const CallTree& tree, std::size_t n, std::uint64_t seed,
                                      const CheckpointConfig& base = {});

/// Every subset of the static refs, in subset-index order (bit i inhibits ref i).
/// Throws GuardError when the tree has more than `guard` static refs.
std::vector<CheckpointConfig> enumerate_configs(const CallTree& tree, int guard = 20,
                                                const CheckpointConfig& base = {});

/// a weakly dominates b: no worse on both axes, strictly better on one.
bool dominates(const Evaluated& a, const Evaluated& b);

/// Non-dominated subset, ordered by time, then peak, then input order.
std::vector<Evaluated> pareto_front(std::span<const Evaluated> points);

/// Exhaustive front over all 2^m inhibition patterns.
std::vector<Evaluated> pareto(const CallTree& tree, int guard = 20,
                              const CheckpointConfig& base = {});

}  // namespace adjprof
