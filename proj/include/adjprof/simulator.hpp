#pragma once

// Exact discrete simulation of a stack-based adjoint under a checkpointing
// configuration, and the profiling callback stream it produces.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "adjprof/model.hpp"

namespace adjprof {

struct AdjointCost {
  Seconds time_s = 0;
  Bytes peak_bytes = 0;
  Bytes turn_bytes = 0;  // stack at the outermost turn point
  Bytes final_stack_bytes = 0;
  std::int64_t pushes = 0;  // every pop matched the most recent unmatched push
  std::int64_t pops = 0;
  std::map<StaticRef, std::int64_t> primal_reexecutions;
  std::map<std::string, std::int64_t> step_executions;
};

enum class EventKind {
  SnpWrite,
  BeginAdvance,
  EndAdvance,
  Turn,
  SnpRead,
  BeginReverse,
  EndReverse,
  // Round trip of one time step inside a binomial loop reversal. `ref` holds
  // the loop id as proc, without site.
  StepBegin,
  StepEnd,
};

std::string_view to_string(EventKind kind);

struct TraceEvent {
  EventKind kind;
  StaticRef ref;  // empty proc for Turn
  Seconds clock_s = 0;
  Bytes stack_bytes = 0;

  bool operator==(const TraceEvent&) const = default;
};

using EventSink = std::function<void(const TraceEvent&)>;

/// Runs the root round trip. Throws ConfigMismatch on a dangling binomial
/// loop id and InternalError if the stack discipline is broken.
AdjointCost simulate(const CallTree& tree, const CheckpointConfig& config);

/// Same traversal as simulate(), forwarding every callback to `sink`.
AdjointCost emit_events(const CallTree& tree, const CheckpointConfig& config,
                        const EventSink& sink);

/// Convenience: collects the event stream into a vector.
std::vector<TraceEvent> collect_events(const CallTree& tree, const CheckpointConfig& config,
                                       AdjointCost* cost = nullptr);

/// Plain primal run time of the whole tree.
Seconds simulate_primal(const CallTree& tree);

/// Event-log line: kind, proc, site, clock (9 decimals), stack; tab-separated.
/// Missing fields print as "-".
std::string format_event(const TraceEvent& event);

}  // namespace adjprof
