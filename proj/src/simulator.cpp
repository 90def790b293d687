#include "adjprof/simulator.hpp"

#include <cstdio>

#include "adjprof/binomial.hpp"
#include "adjprof/errors.hpp"

namespace adjprof {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::SnpWrite: return "SNP_WRITE";
    case EventKind::BeginAdvance: return "BEGIN_ADVANCE";
    case EventKind::EndAdvance: return "END_ADVANCE";
    case EventKind::Turn: return "TURN";
    case EventKind::SnpRead: return "SNP_READ";
    case EventKind::BeginReverse: return "BEGIN_REVERSE";
    case EventKind::EndReverse: return "END_REVERSE";
    case EventKind::StepBegin: return "STEP_BEGIN";
    case EventKind::StepEnd: return "STEP_END";
  }
  return "?";
}

std::string format_event(const TraceEvent& e) {
  char clock[64];
  std::snprintf(clock, sizeof clock, "%.9f", e.clock_s);
  std::string out(to_string(e.kind));
  out += '\t';
  out += e.ref.proc.empty() ? "-" : e.ref.proc;
  out += '\t';
  out += e.ref.site ? std::to_string(*e.ref.site) : "-";
  out += '\t';
  out += clock;
  out += '\t';
  out += std::to_string(e.stack_bytes);
  return out;
}

namespace {

class Run {
public:
  Run(const CheckpointConfig& config, const EventSink* sink) : config_(config), sink_(sink) {}

  AdjointCost execute(const Body& root) {
    round_trip(root);
    if (stack_ != 0 || !pushes_.empty())
      throw InternalError("final stack is " + std::to_string(stack_) + " bytes, expected 0");
    cost_.time_s = clock_;
    cost_.peak_bytes = peak_;
    cost_.turn_bytes = root_turn_.value_or(0);
    cost_.final_stack_bytes = stack_;
    return std::move(cost_);
  }

private:
  void emit(EventKind kind, const StaticRef& ref, Seconds clock) {
    if (sink_) (*sink_)(TraceEvent{kind, ref, clock, stack_});
  }

  void push(Bytes n) {
    pushes_.push_back(n);
    ++cost_.pushes;
    stack_ += n;
    if (stack_ > peak_) peak_ = stack_;
  }

  void pop(Bytes n) {
    if (pushes_.empty() || pushes_.back() != n)
      throw InternalError("non-LIFO pop of " + std::to_string(n) + " bytes");
    pushes_.pop_back();
    ++cost_.pops;
    stack_ -= n;
  }

  // Counts step executions of loops run as plain primal code.
  void count_primal(const Body& body, std::int64_t times) {
    for (const auto& item : body) {
      if (auto* c = std::get_if<CallNode>(&item.node)) {
        count_primal(c->body, times);
      } else if (auto* l = std::get_if<LoopNode>(&item.node)) {
        cost_.step_executions[l->id] += times * l->iterations;
        count_primal(l->body, times * l->iterations);
      }
    }
  }

  const BinomialSchedule& schedule(const LoopNode& loop, std::int64_t d) {
    auto key = std::make_pair(loop.iterations, d);
    auto it = schedules_.find(key);
    if (it == schedules_.end()) it = schedules_.emplace(key, make_schedule(loop.iterations, d)).first;
    return it->second;
  }

  void round_trip(const Body& body) {
    forward(body);
    if (!root_turn_) root_turn_ = stack_;
    emit(EventKind::Turn, StaticRef{}, clock_);
    backward(body);
  }

  void forward(const Body& body) {
    for (const auto& item : body) {
      if (auto* s = std::get_if<Segment>(&item.node)) {
        clock_ += s->t_fwd;
        push(s->tape_bytes);
      } else if (auto* c = std::get_if<CallNode>(&item.node)) {
        if (!config_.is_active(c->ref)) {
          forward(c->body);
          continue;
        }
        Seconds before = clock_;
        push(c->snapshot_bytes);
        emit(EventKind::SnpWrite, c->ref, before);
        clock_ += c->t_snp_write;
        emit(EventKind::BeginAdvance, c->ref, clock_);
        clock_ += primal_time(c->body);
        count_primal(c->body, 1);
        ++cost_.primal_reexecutions[c->ref];
        emit(EventKind::EndAdvance, c->ref, clock_);
      } else {
        const auto& l = std::get<LoopNode>(item.node);
        if (config_.binomial.count(l.id)) {
          // Initial-state snapshot; the reversal itself happens in the backward sweep.
          clock_ += l.t_snp_write;
          push(l.step_snapshot_bytes);
          continue;
        }
        for (std::int64_t i = 0; i < l.iterations; ++i) forward(l.body);
        cost_.step_executions[l.id] += l.iterations;
      }
    }
  }

  void backward(const Body& body) {
    for (auto it = body.rbegin(); it != body.rend(); ++it) {
      const auto& item = *it;
      if (auto* s = std::get_if<Segment>(&item.node)) {
        clock_ += s->t_bwd;
        pop(s->tape_bytes);
      } else if (auto* c = std::get_if<CallNode>(&item.node)) {
        if (!config_.is_active(c->ref)) {
          backward(c->body);
          continue;
        }
        emit(EventKind::SnpRead, c->ref, clock_);
        pop(c->snapshot_bytes);
        clock_ += c->t_snp_read;
        emit(EventKind::BeginReverse, c->ref, clock_);
        round_trip(c->body);
        emit(EventKind::EndReverse, c->ref, clock_);
      } else {
        const auto& l = std::get<LoopNode>(item.node);
        if (auto d = config_.binomial.find(l.id); d != config_.binomial.end()) {
          reverse_binomial(l, d->second);
          continue;
        }
        for (std::int64_t i = 0; i < l.iterations; ++i) backward(l.body);
      }
    }
  }

  // The loop holds min(d, l) snapshot slots while it is reversed: the
  // initial-state one pushed by the forward sweep plus a flat reservation.
  void reverse_binomial(const LoopNode& loop, std::int64_t d) {
    const auto& sched = schedule(loop, d);
    const Bytes reserve = (sched.slots - 1) * loop.step_snapshot_bytes;
    const Seconds step_primal = primal_time(loop.body);
    const StaticRef loop_ref(loop.id);

    clock_ += loop.t_snp_read;
    push(reserve);
    for (const auto& a : sched.actions) {
      switch (a.kind) {
        case ScheduleAction::Kind::Advance:
          clock_ += static_cast<Seconds>(a.count) * step_primal;
          cost_.step_executions[loop.id] += a.count;
          count_primal(loop.body, a.count);
          break;
        case ScheduleAction::Kind::Store:
          clock_ += loop.t_snp_write;
          break;
        case ScheduleAction::Kind::Restore:
          clock_ += loop.t_snp_read;
          break;
        case ScheduleAction::Kind::Reverse:
          emit(EventKind::StepBegin, loop_ref, clock_);
          round_trip(loop.body);
          ++cost_.step_executions[loop.id];
          emit(EventKind::StepEnd, loop_ref, clock_);
          break;
      }
    }
    pop(reserve);
    pop(loop.step_snapshot_bytes);
  }

  const CheckpointConfig& config_;
  const EventSink* sink_;
  Seconds clock_ = 0;
  Bytes stack_ = 0;
  Bytes peak_ = 0;
  std::optional<Bytes> root_turn_;
  std::vector<Bytes> pushes_;
  std::map<std::pair<std::int64_t, std::int64_t>, BinomialSchedule> schedules_;
  AdjointCost cost_;
};

}  // namespace

AdjointCost simulate(const CallTree& tree, const CheckpointConfig& config) {
  check_config(tree, config);
  return Run(config, nullptr).execute(tree.items);
}

AdjointCost emit_events(const CallTree& tree, const CheckpointConfig& config, const EventSink& sink) {
  check_config(tree, config);
  return Run(config, &sink).execute(tree.items);
}

std::vector<TraceEvent> collect_events(const CallTree& tree, const CheckpointConfig& config,
                                       AdjointCost* cost) {
  std::vector<TraceEvent> events;
  auto result = emit_events(tree, config, [&](const TraceEvent& e) { events.push_back(e); });
  if (cost) *cost = std::move(result);
  return events;
}

Seconds simulate_primal(const CallTree& tree) { return primal_time(tree.items); }

}  // namespace adjprof
