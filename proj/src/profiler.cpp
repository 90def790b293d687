#include "adjprof/profiler.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "adjprof/errors.hpp"

namespace adjprof {

FrameStats combine(const FrameStats& c, const FrameStats& suffix, const PendingOccurrence& occ,
                   const StaticRef& c_ref) {
  FrameStats cd;
  cd.t = occ.t1 + suffix.t + occ.t2 + c.t;
  cd.tn = suffix.tn;
  cd.pk = std::max(suffix.pk, c.pk);

  static const DeltaTriple zero{};
  auto lookup = [](const DeltaMap& m, const StaticRef& x) -> const DeltaTriple& {
    auto it = m.find(x);
    return it == m.end() ? zero : it->second;
  };
  auto other = [&](const StaticRef& x) {
    const auto& dd = lookup(suffix.deltas, x);
    const auto& dc = lookup(c.deltas, x);
    cd.deltas[x] = DeltaTriple{dd.dt + dc.dt, dd.dtn,
                               std::max(suffix.pk + dd.dpk, c.pk + dc.dpk) - cd.pk};
  };

  // Both maps are sorted; walk their union once.
  auto i = c.deltas.begin();
  auto j = suffix.deltas.begin();
  while (i != c.deltas.end() || j != suffix.deltas.end()) {
    const StaticRef* x;
    if (j == suffix.deltas.end() || (i != c.deltas.end() && i->first < j->first)) {
      x = &(i++)->first;
    } else if (i == c.deltas.end() || j->first < i->first) {
      x = &(j++)->first;
    } else {
      x = &i->first;
      ++i;
      ++j;
    }
    if (!(*x == c_ref)) other(*x);
  }

  const auto& dd = lookup(suffix.deltas, c_ref);
  const auto& dc = lookup(c.deltas, c_ref);
  cd.deltas[c_ref] = DeltaTriple{
      dd.dt + dc.dt - occ.t1 - occ.t2,
      c.tn + dc.dtn + dd.dtn - occ.snp,
      std::max(c.tn + dc.dtn + suffix.pk + dd.dpk - occ.snp, c.pk + dc.dpk) - cd.pk,
  };
  return cd;
}

FrameStats combine_nested(const FrameStats& step, const FrameStats& suffix) {
  FrameStats out;
  out.t = suffix.t + step.t;
  out.tn = suffix.tn;
  out.pk = std::max(suffix.pk, step.pk);
  std::set<StaticRef> keys;
  for (const auto& [x, d] : step.deltas) keys.insert(x);
  for (const auto& [x, d] : suffix.deltas) keys.insert(x);
  for (const auto& x : keys) {
    DeltaTriple ds, dd;
    if (auto it = step.deltas.find(x); it != step.deltas.end()) ds = it->second;
    if (auto it = suffix.deltas.find(x); it != suffix.deltas.end()) dd = it->second;
    out.deltas[x] = DeltaTriple{dd.dt + ds.dt, dd.dtn,
                                std::max(suffix.pk + dd.dpk, step.pk + ds.dpk) - out.pk};
  }
  return out;
}

Category categorize(const DeltaTriple& d) {
  if (d.dpk < 0) return Category::GainsMemory;
  if (d.dpk == 0) return Category::PeakUnchanged;
  return Category::CostsMemory;
}

Profiler::Profiler(CombineObserver observer) : observer_(std::move(observer)) {
  frames_.push_back(Frame{});
}

void Profiler::fail(const std::string& what) const { throw StreamError(what, index_); }

void Profiler::track_live() {
  std::size_t live = 0;
  for (const auto& f : frames_) live += f.suffix.deltas.size();
  peak_live_ = std::max(peak_live_, live);
  max_depth_ = std::max(max_depth_, frames_.size());
}

FrameStats Profiler::close_top(Seconds clock) {
  Frame& f = top();
  if (!f.turned) fail("round trip closed without a TURN");
  if (!f.pending.empty()) fail("checkpoint " + f.pending.back().ref.str() + " never reversed");
  if (f.reading) fail("checkpoint " + f.reading->ref.str() + " read but not reversed");
  FrameStats stats = std::move(f.suffix);
  stats.t = clock - f.start;
  return stats;
}

void Profiler::on_event(const TraceEvent& e) {
  if (finished_) fail("event after end of run");
  if (e.clock_s < last_clock_) fail("clock regression");
  last_clock_ = e.clock_s;

  Frame& f = top();
  auto expect_forward = [&] {
    if (f.turned) fail(std::string(to_string(e.kind)) + " after the frame's TURN");
  };
  auto expect_backward = [&] {
    if (!f.turned) fail(std::string(to_string(e.kind)) + " before the frame's TURN");
  };

  switch (e.kind) {
    case EventKind::SnpWrite:
      expect_forward();
      if (!f.pending.empty() && f.pending.back().state != 3)
        fail("SNP_WRITE " + e.ref.str() + " inside the advance of " + f.pending.back().ref.str());
      f.pending.push_back(Pending{e.ref, e.clock_s, 0, e.stack_bytes, 1});
      break;
    case EventKind::BeginAdvance:
      expect_forward();
      if (f.pending.empty() || f.pending.back().state != 1 || !(f.pending.back().ref == e.ref))
        fail("BEGIN_ADVANCE " + e.ref.str() + " without matching SNP_WRITE");
      f.pending.back().state = 2;
      break;
    case EventKind::EndAdvance:
      expect_forward();
      if (f.pending.empty() || f.pending.back().state != 2 || !(f.pending.back().ref == e.ref))
        fail("END_ADVANCE " + e.ref.str() + " without matching BEGIN_ADVANCE");
      f.pending.back().state = 3;
      f.pending.back().end_advance_clock = e.clock_s;
      break;
    case EventKind::Turn:
      expect_forward();
      if (!f.pending.empty() && f.pending.back().state != 3)
        fail("TURN inside the advance of " + f.pending.back().ref.str());
      f.turned = true;
      f.suffix = FrameStats{0, e.stack_bytes, e.stack_bytes, {}};
      f.read_clock = e.clock_s;
      break;
    case EventKind::SnpRead:
      expect_backward();
      if (f.reading) fail("SNP_READ " + e.ref.str() + " while " + f.reading->ref.str() + " is pending");
      if (f.pending.empty()) fail("SNP_READ " + e.ref.str() + " without a forward occurrence");
      if (!(f.pending.back().ref == e.ref))
        fail("SNP_READ " + e.ref.str() + " does not match last forward occurrence " +
             f.pending.back().ref.str());
      f.reading = f.pending.back();
      f.pending.pop_back();
      f.read_clock = e.clock_s;
      f.reversing = false;
      break;
    case EventKind::BeginReverse: {
      expect_backward();
      if (!f.reading || f.reversing || !(f.reading->ref == e.ref))
        fail("BEGIN_REVERSE " + e.ref.str() + " without matching SNP_READ");
      f.reversing = true;
      f.t2 = e.clock_s - f.read_clock;
      Frame child;
      child.kind = FrameKind::Checkpoint;
      child.ref = e.ref;
      child.start = e.clock_s;
      frames_.push_back(std::move(child));
      break;
    }
    case EventKind::EndReverse: {
      if (frames_.size() < 2 || f.kind != FrameKind::Checkpoint || !(f.ref == e.ref))
        fail("END_REVERSE " + e.ref.str() + " without matching BEGIN_REVERSE");
      FrameStats child = close_top(e.clock_s);
      frames_.pop_back();
      Frame& parent = top();
      const Pending& occ = *parent.reading;
      PendingOccurrence measured{occ.ref, occ.end_advance_clock - occ.write_clock, parent.t2, occ.snp};
      FrameStats suffix = std::move(parent.suffix);
      suffix.t = parent.read_clock - occ.end_advance_clock;
      parent.suffix = combine(child, suffix, measured, e.ref);
      if (observer_.on_checkpoint) observer_.on_checkpoint(child, suffix, measured, parent.suffix);
      ++occurrences_[e.ref];
      ++end_reverse_count_;
      parent.reading.reset();
      parent.reversing = false;
      parent.read_clock = e.clock_s;
      break;
    }
    case EventKind::StepBegin: {
      expect_backward();
      if (f.reading) fail("STEP_BEGIN while " + f.reading->ref.str() + " is pending");
      Frame child;
      child.kind = FrameKind::Step;
      child.ref = e.ref;
      child.start = e.clock_s;
      frames_.push_back(std::move(child));
      break;
    }
    case EventKind::StepEnd: {
      if (frames_.size() < 2 || f.kind != FrameKind::Step || !(f.ref == e.ref))
        fail("STEP_END " + e.ref.str() + " without matching STEP_BEGIN");
      FrameStats step = close_top(e.clock_s);
      frames_.pop_back();
      Frame& parent = top();
      FrameStats suffix = std::move(parent.suffix);
      parent.suffix = combine_nested(step, suffix);
      if (observer_.on_step) observer_.on_step(step, suffix, parent.suffix);
      break;
    }
  }
  ++index_;
  track_live();
}

ProfileReport Profiler::finish(Seconds end_clock) {
  if (finished_) fail("finish called twice");
  if (frames_.size() != 1) fail("run ended with " + std::to_string(frames_.size() - 1) + " open round trips");
  if (end_clock < last_clock_) fail("end clock precedes the last event");
  ProfileReport report;
  report.root = close_top(end_clock);
  finished_ = true;

  std::map<std::string, int> sites_per_proc;
  for (const auto& [ref, d] : report.root.deltas) ++sites_per_proc[ref.proc];
  for (const auto& [ref, d] : report.root.deltas) {
    Suggestion s;
    s.ref = ref;
    s.occurrences = occurrences_[ref];
    s.dt = d.dt;
    s.dtn = d.dtn;
    s.dpk = d.dpk;
    s.category = categorize(d);
    s.multi_site = sites_per_proc[ref.proc] > 1;
    report.suggestions.push_back(std::move(s));
  }
  std::stable_sort(report.suggestions.begin(), report.suggestions.end(),
                   [](const Suggestion& a, const Suggestion& b) {
                     if (a.category != b.category) return a.category < b.category;
                     return std::abs(a.dt) > std::abs(b.dt);
                   });
  return report;
}

ProfileReport profile(std::span<const TraceEvent> events, Seconds end_clock, CombineObserver observer) {
  Profiler p(std::move(observer));
  for (const auto& e : events) p.on_event(e);
  return p.finish(end_clock);
}

ProfileReport profile_run(const CallTree& tree, const CheckpointConfig& config, AdjointCost* cost) {
  Profiler p;
  auto result = emit_events(tree, config, [&](const TraceEvent& e) { p.on_event(e); });
  auto report = p.finish(result.time_s);
  if (cost) *cost = std::move(result);
  return report;
}

}  // namespace adjprof
