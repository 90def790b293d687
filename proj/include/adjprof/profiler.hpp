#pragma once

// Single-run prediction of the effect of inhibiting each active checkpoint.
//
// The profiler consumes the callback stream and folds round trips bottom-up
// and right-to-left. For a frame whose remaining code is C;D (C an active
// checkpoint, D everything to its right) the base quantities combine as
//
//   t(CD)  = t1 + t(D) + t2 + t(C)
//   Tn(CD) = Tn(D)
//   Pk(CD) = max(Pk(D), Pk(C))
//
// and, for every static checkpoint X, the predicted change when X alone is
// switched to inhibited:
//
//   X != C:  dt  = dt(D) + dt(C)
//            dTn = dTn(D)
//            dPk = max(Pk(D) + dPk(D), Pk(C) + dPk(C)) - Pk(CD)
//   X == C:  dt  = dt(D) + dt(C) - t1 - t2
//            dTn = Tn(C) + dTn(C) + dTn(D) - Snp
//            dPk = max(Tn(C) + dTn(C) + Pk(D) + dPk(D) - Snp, Pk(C) + dPk(C)) - Pk(CD)
//
// All stack sizes are absolute within the run.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "adjprof/model.hpp"
#include "adjprof/simulator.hpp"

namespace adjprof {

struct DeltaTriple {
  Seconds dt = 0;
  Bytes dtn = 0;
  Bytes dpk = 0;
  bool operator==(const DeltaTriple&) const = default;
};

using DeltaMap = std::map<StaticRef, DeltaTriple>;

struct FrameStats {
  Seconds t = 0;
  Bytes tn = 0;
  Bytes pk = 0;
  DeltaMap deltas;
};

/// Measurements of one dynamic checkpoint occurrence.
struct PendingOccurrence {
  StaticRef ref;
  Seconds t1 = 0;  // snapshot write + primal re-run
  Seconds t2 = 0;  // snapshot read
  Bytes snp = 0;   // stack just after the snapshot push
};

/// Round trip on C;D from the round trips on C and on D.
FrameStats combine(const FrameStats& c, const FrameStats& suffix, const PendingOccurrence& occ,
                   const StaticRef& c_ref);

/// A nested round trip that is not a call-tree checkpoint (one step of a
/// binomial loop reversal) placed in front of `suffix`. Only the X != C rules
/// apply; the step adds no stack of its own to the frame's turn.
FrameStats combine_nested(const FrameStats& step, const FrameStats& suffix);

enum class Category : int { GainsMemory = 1, PeakUnchanged = 2, CostsMemory = 3 };

Category categorize(const DeltaTriple& d);

struct Suggestion {
  StaticRef ref;
  std::int64_t occurrences = 0;
  Seconds dt = 0;
  Bytes dtn = 0;
  Bytes dpk = 0;
  Category category = Category::PeakUnchanged;
  bool multi_site = false;  // proc observed at several sites
};

struct ProfileReport {
  FrameStats root;
  std::vector<Suggestion> suggestions;  // sorted by category, then |dt| descending
};

/// Called after every fold step with the operands and the result.
struct CombineObserver {
  std::function<void(const FrameStats& c, const FrameStats& suffix, const PendingOccurrence& occ,
                     const FrameStats& result)>
      on_checkpoint;
  std::function<void(const FrameStats& step, const FrameStats& suffix, const FrameStats& result)>
      on_step;
};

/// Online consumer of the callback stream.
class Profiler {
public:
  explicit Profiler(CombineObserver observer = {});

  /// Throws StreamError on a protocol violation.
  void on_event(const TraceEvent& event);

  /// Closes the root round trip, which ended at `end_clock`.
  ProfileReport finish(Seconds end_clock);

  std::size_t max_frame_depth() const { return max_depth_; }
  /// Largest number of delta entries alive at once over all open frames.
  std::size_t peak_live_entries() const { return peak_live_; }
  std::size_t end_reverse_count() const { return end_reverse_count_; }

private:
  enum class FrameKind { Root, Checkpoint, Step };

  struct Pending {
    StaticRef ref;
    Seconds write_clock = 0;
    Seconds end_advance_clock = 0;
    Bytes snp = 0;
    int state = 0;  // 1 written, 2 advancing, 3 advanced
  };

  struct Frame {
    FrameKind kind = FrameKind::Root;
    StaticRef ref;
    Seconds start = 0;
    bool turned = false;
    std::vector<Pending> pending;
    FrameStats suffix;
    std::optional<Pending> reading;
    Seconds read_clock = 0;
    Seconds t2 = 0;
    bool reversing = false;  // BEGIN_REVERSE seen for `reading`
  };

  [[noreturn]] void fail(const std::string& what) const;
  Frame& top() { return frames_.back(); }
  FrameStats close_top(Seconds clock);
  void track_live();

  CombineObserver observer_;
  std::vector<Frame> frames_;
  std::map<StaticRef, std::int64_t> occurrences_;
  Seconds last_clock_ = 0;
  std::size_t index_ = 0;
  std::size_t max_depth_ = 1;
  std::size_t peak_live_ = 0;
  std::size_t end_reverse_count_ = 0;
  bool finished_ = false;
};

/// Profiles a complete stream of a run that ended at `end_clock`.
ProfileReport profile(std::span<const TraceEvent> events, Seconds end_clock,
                      CombineObserver observer = {});

/// Simulates `config` on `tree` and profiles the resulting stream.
ProfileReport profile_run(const CallTree& tree, const CheckpointConfig& config,
                          AdjointCost* cost = nullptr);

}  // namespace adjprof
