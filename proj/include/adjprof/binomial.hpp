#pragma once

// Binomial (revolve-style) reversal of homogeneous time-stepping loops.
//
// Conventions: `slots` (d) counts every stored state, including the loop's
// initial state. E counts every execution of the step body during the
// reversal, primal advances and taping executions alike; each step is taped
// exactly once, immediately before its own backward sweep.

#include <cstdint>
#include <vector>

#include "adjprof/model.hpp"

namespace adjprof {

struct BinomialCost {
  std::int64_t step_executions = 0;  // E
  std::int64_t repetition = 0;       // r: max executions of one step, minus 1
  std::int64_t snapshot_slots = 0;   // d
};

/// Smallest r with C(d + r, r) >= l.
std::int64_t min_repetition(std::int64_t steps, std::int64_t slots);

/// Minimal E(l, d) from the split recursion
///   E(1, d) = 1, E(l, 1) = l(l+1)/2,
///   E(l, d) = min_{1<=m<l} m + E(l-m, d-1) + E(m, d).
std::int64_t step_executions(std::int64_t steps, std::int64_t slots);

struct ScheduleAction {
  enum class Kind { Advance, Store, Restore, Reverse };
  Kind kind;
  std::int64_t count = 0;  // Advance: number of steps
  std::int64_t step = 0;   // Reverse: 1-based step index
  bool operator==(const ScheduleAction&) const = default;
};

/// Optimal reversal schedule, starting with the initial state current and
/// already stored in one slot.
struct BinomialSchedule {
  std::int64_t steps = 0;
  std::int64_t slots = 0;  // effective capacity, min(d, l)
  std::int64_t step_executions = 0;
  std::int64_t repetition = 0;
  // Snapshot traffic including the initial-state write and its first read.
  std::int64_t writes = 0;
  std::int64_t reads = 0;
  std::vector<ScheduleAction> actions;

  BinomialCost cost() const { return {step_executions, repetition, slots}; }
};

/// Throws std::invalid_argument unless steps >= 1 and slots >= 1.
BinomialSchedule make_schedule(std::int64_t steps, std::int64_t slots);

struct LoopCost {
  Seconds time = 0;  // whole forward + reverse contribution of the loop
  Bytes peak = 0;    // peak above the stack level at which the loop is reversed
  std::int64_t step_executions = 0;
};

/// Closed-form cost of reversing `loop` with capacity d, inner calls set by
/// `inner_config`:
///   time = (E - l) * primal(step) + l * roundtrip(step) + writes * t_w + reads * t_r
///   peak = min(d, l) * step_snapshot_bytes + peak(roundtrip(step))
LoopCost loop_cost(const LoopNode& loop, std::int64_t slots,
                   const CheckpointConfig& inner_config);

}  // namespace adjprof
