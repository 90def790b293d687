#pragma once

#include <cstdint>
#include <string_view>

#include "adjprof/model.hpp"

namespace adjprof {

struct Range {
  double lo = 0;
  double hi = 0;
};

/// Cost ranges for synthetic trees. Times are drawn uniformly and rounded to
/// milliseconds; byte counts are drawn uniformly as integers.
struct CostRanges {
  Range t_primal{0.1, 2.0};
  Range fwd_factor{1.2, 2.5};  // t_fwd = t_primal * factor
  Range bwd_factor{1.5, 3.0};  // t_bwd = t_primal * factor
  Range tape_bytes{0, 4096};
  Range snapshot_bytes{0, 2048};
  Range t_snp{0.001, 0.05};
  Range segments_per_body{1, 2};
  Range loop_iterations{2, 4};
  double proc_reuse = 0.25;   // probability a call reuses an existing proc name
  double loop_probability = 0.0;
  std::int64_t time_steps = 0;  // > 0 wraps the root in loop "tsteps"
};

/// Parses "key=lo:hi,key=value,..." over CostRanges field names
/// (t_primal, fwd_factor, bwd_factor, tape, snapshot, t_snp, segments,
/// iterations, proc_reuse, loops, time_steps). Throws std::invalid_argument.
CostRanges parse_ranges(std::string_view spec);

/// Deterministic synthetic tree with exactly `n_calls` call nodes, distinct
/// (proc, site) pairs, non-empty call bodies and nesting depth <= max_depth
/// (calls and loops both count as one level).
CallTree generate_tree(std::uint64_t seed, int n_calls, int max_depth,
                       const CostRanges& ranges = {});

}  // namespace adjprof
