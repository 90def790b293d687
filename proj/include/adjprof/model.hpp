#pragma once

// Annotated call trees and checkpointing configurations.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace adjprof {

using Seconds = double;
using Bytes = std::int64_t;

/// A static checkpoint location: procedure name plus optional call-site line.
/// A site-less ref stands for every call site of the procedure.
struct StaticRef {
  std::string proc;
  std::optional<std::int64_t> site;

  StaticRef() = default;
  StaticRef(std::string p, std::optional<std::int64_t> s = std::nullopt)
      : proc(std::move(p)), site(s) {}

  /// "proc@site", or "proc" when site-less.
  std::string str() const;

  /// Inverse of str(). Throws std::invalid_argument on a malformed token.
  static StaticRef parse(std::string_view token);

  bool operator==(const StaticRef& o) const { return proc == o.proc && site == o.site; }
  bool operator<(const StaticRef& o) const {
    if (proc != o.proc) return proc < o.proc;
    return site < o.site;  // nullopt sorts first
  }
};

/// Straight-line code fragment.
struct Segment {
  std::string label;
  Seconds t_primal = 0;
  Seconds t_fwd = 0;
  Seconds t_bwd = 0;
  Bytes tape_bytes = 0;

  bool operator==(const Segment&) const = default;
};

struct TreeItem;

/// A potential checkpoint: one call site of a procedure.
struct CallNode {
  StaticRef ref;  // site always set
  Bytes snapshot_bytes = 0;
  Seconds t_snp_write = 0;
  Seconds t_snp_read = 0;
  std::vector<TreeItem> body;

  bool operator==(const CallNode& o) const;
};

/// Homogeneous time-stepping loop; `body` is one iteration.
struct LoopNode {
  std::string id;
  std::int64_t iterations = 1;
  Bytes step_snapshot_bytes = 0;
  Seconds t_snp_write = 0;
  Seconds t_snp_read = 0;
  std::vector<TreeItem> body;

  bool operator==(const LoopNode& o) const;
};

struct TreeItem {
  std::variant<Segment, CallNode, LoopNode> node;

  TreeItem() = default;
  TreeItem(Segment s) : node(std::move(s)) {}
  TreeItem(CallNode c) : node(std::move(c)) {}
  TreeItem(LoopNode l) : node(std::move(l)) {}

  bool operator==(const TreeItem& o) const { return node == o.node; }
};

using Body = std::vector<TreeItem>;

struct CallTree {
  std::string name;
  Body items;

  bool operator==(const CallTree& o) const { return name == o.name && items == o.items; }
};

/// Which checkpoints are inhibited and which loops use binomial reversal.
struct CheckpointConfig {
  std::set<StaticRef> inhibited;
  std::map<std::string, std::int64_t> binomial;  // loop id -> capacity d

  /// A call is active unless its exact ref or its proc-wide ref is inhibited.
  bool is_active(const StaticRef& call_ref) const;

  bool operator==(const CheckpointConfig&) const = default;
};

/// Sited refs of every CallNode, in pre-order.
std::vector<StaticRef> static_refs(const CallTree& tree);

/// Ids of every LoopNode, in pre-order.
std::vector<std::string> loop_ids(const CallTree& tree);

/// Plain primal execution time of a body; loops count `iterations` times.
Seconds primal_time(const Body& body);

/// Number of items (segments, calls and loops) in the whole tree.
std::size_t node_count(const CallTree& tree);

/// Checks the tree invariants (non-negative costs, unique refs and loop ids,
/// identifiers without whitespace). Throws TreeError.
void validate(const CallTree& tree);

/// Throws ConfigMismatch if a binomial entry names a loop absent from the tree.
void check_config(const CallTree& tree, const CheckpointConfig& config);

}  // namespace adjprof
