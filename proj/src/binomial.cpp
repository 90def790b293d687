#include "adjprof/binomial.hpp"

#include <algorithm>
#include <stdexcept>

#include "adjprof/simulator.hpp"

namespace adjprof {

namespace {

void require_positive(std::int64_t steps, std::int64_t slots) {
  if (steps < 1) throw std::invalid_argument("binomial: number of steps must be >= 1");
  if (slots < 1) throw std::invalid_argument("binomial: number of slots must be >= 1");
}

// E(l, d) and the smallest optimal first split for all l <= steps, d <= slots.
struct Table {
  std::int64_t max_d;
  std::vector<std::int64_t> cost;
  std::vector<std::int64_t> split;

  Table(std::int64_t steps, std::int64_t slots)
      : max_d(slots),
        cost(static_cast<std::size_t>((steps + 1) * (slots + 1)), 0),
        split(cost.size(), 0) {
    for (std::int64_t l = 1; l <= steps; ++l) {
      for (std::int64_t d = 1; d <= slots; ++d) {
        auto& e = at(cost, l, d);
        if (l == 1) {
          e = 1;
        } else if (d == 1) {
          e = l * (l + 1) / 2;
        } else {
          e = -1;
          for (std::int64_t m = 1; m < l; ++m) {
            auto c = m + at(cost, l - m, d - 1) + at(cost, m, d);
            if (e < 0 || c < e) {
              e = c;
              at(split, l, d) = m;
            }
          }
        }
      }
    }
  }

  std::int64_t& at(std::vector<std::int64_t>& v, std::int64_t l, std::int64_t d) {
    return v[static_cast<std::size_t>(l * (max_d + 1) + d)];
  }
  std::int64_t get(const std::vector<std::int64_t>& v, std::int64_t l, std::int64_t d) const {
    return v[static_cast<std::size_t>(l * (max_d + 1) + d)];
  }
};

struct Builder {
  const Table& table;
  BinomialSchedule& out;
  std::vector<std::int64_t> executions;

  void advance(std::int64_t from, std::int64_t count) {
    if (count <= 0) return;
    out.actions.push_back({ScheduleAction::Kind::Advance, count, 0});
    for (std::int64_t k = from; k < from + count; ++k) ++executions[static_cast<std::size_t>(k)];
  }
  void reverse(std::int64_t step) {
    out.actions.push_back({ScheduleAction::Kind::Reverse, 0, step + 1});
    ++executions[static_cast<std::size_t>(step)];
  }

  // Reverses steps [offset, offset + l) whose initial state is current and stored.
  void run(std::int64_t offset, std::int64_t l, std::int64_t d) {
    if (l == 1) {
      reverse(offset);
      return;
    }
    if (d == 1) {
      for (std::int64_t k = l; k >= 1; --k) {
        if (k < l) {
          out.actions.push_back({ScheduleAction::Kind::Restore, 0, 0});
          ++out.reads;
        }
        advance(offset, k - 1);
        reverse(offset + k - 1);
      }
      return;
    }
    std::int64_t m = table.get(table.split, l, d);
    advance(offset, m);
    out.actions.push_back({ScheduleAction::Kind::Store, 0, 0});
    ++out.writes;
    run(offset + m, l - m, d - 1);
    out.actions.push_back({ScheduleAction::Kind::Restore, 0, 0});
    ++out.reads;
    run(offset, m, d);
  }
};

}  // namespace

std::int64_t min_repetition(std::int64_t steps, std::int64_t slots) {
  require_positive(steps, slots);
  // C(d + r, r) grows with r; stop as soon as it reaches l.
  __extension__ typedef unsigned __int128 wide;
  wide c = 1;
  std::int64_t r = 0;
  while (c < static_cast<wide>(steps)) {
    ++r;
    c = c * static_cast<wide>(slots + r) / static_cast<wide>(r);
  }
  return r;
}

std::int64_t step_executions(std::int64_t steps, std::int64_t slots) {
  require_positive(steps, slots);
  slots = std::min(slots, steps);
  Table table(steps, slots);
  return table.get(table.cost, steps, slots);
}

BinomialSchedule make_schedule(std::int64_t steps, std::int64_t slots) {
  require_positive(steps, slots);
  BinomialSchedule s;
  s.steps = steps;
  s.slots = std::min(slots, steps);
  Table table(steps, s.slots);
  s.step_executions = table.get(table.cost, steps, s.slots);
  s.writes = 1;
  s.reads = 1;
  Builder b{table, s, std::vector<std::int64_t>(static_cast<std::size_t>(steps), 0)};
  b.run(0, steps, s.slots);
  s.repetition = *std::max_element(b.executions.begin(), b.executions.end()) - 1;
  return s;
}

LoopCost loop_cost(const LoopNode& loop, std::int64_t slots, const CheckpointConfig& inner_config) {
  auto schedule = make_schedule(loop.iterations, slots);

  CallTree step{loop.id, loop.body};
  CheckpointConfig inner = inner_config;
  auto ids = loop_ids(step);
  std::erase_if(inner.binomial, [&](const auto& entry) {
    return std::find(ids.begin(), ids.end(), entry.first) == ids.end();
  });
  auto round_trip = simulate(step, inner);

  const auto l = loop.iterations;
  LoopCost cost;
  cost.step_executions = schedule.step_executions;
  cost.time = static_cast<Seconds>(schedule.step_executions - l) * primal_time(loop.body) +
              static_cast<Seconds>(l) * round_trip.time_s +
              static_cast<Seconds>(schedule.writes) * loop.t_snp_write +
              static_cast<Seconds>(schedule.reads) * loop.t_snp_read;
  cost.peak = schedule.slots * loop.step_snapshot_bytes + round_trip.peak_bytes;
  return cost;
}

}  // namespace adjprof
