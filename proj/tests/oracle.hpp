#pragma once

// Reference models used only by the tests. They restate the execution model
// directly and share no code with the library beyond the data types.

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <tuple>
#include <variant>

#include "adjprof/model.hpp"

namespace oracle {

using adjprof::Body;
using adjprof::Bytes;
using adjprof::CallNode;
using adjprof::CheckpointConfig;
using adjprof::LoopNode;
using adjprof::Seconds;
using adjprof::Segment;

// Revolve closed form for the number of step executions (initial sweep
// included, every step taped once).
inline std::int64_t closed_form_executions(std::int64_t l, std::int64_t d) {
  d = std::min(d, l);
  std::int64_t r = 0, range = 1;
  while (range < l) {
    ++r;
    range = range * (r + d) / r;
  }
  return r * l - range * r / (d + 1) + l;
}

// Shortest path over reversal states: current state (or none), the set of
// stored states, and the number of steps still to reverse. Moves: advance one
// step, reverse the last pending step, store, restore, drop a stored state.
inline std::int64_t exhaustive_executions(int l, int d) {
  using State = std::tuple<int, std::set<int>, int>;
  std::map<State, std::int64_t> dist;
  using Item = std::pair<std::int64_t, State>;
  auto cmp = [](const Item& a, const Item& b) { return a.first > b.first; };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
  State start{0, {0}, l};
  dist[start] = 0;
  pq.push({0, start});
  while (!pq.empty()) {
    auto [c, s] = pq.top();
    pq.pop();
    if (dist[s] < c) continue;
    auto [cur, stored, n] = s;
    if (n == 0) return c;
    std::vector<std::pair<State, int>> moves;
    if (cur >= 0) {
      if (cur < n - 1) moves.push_back({{cur + 1, stored, n}, 1});
      if (cur == n - 1) {
        std::set<int> kept;
        for (int p : stored)
          if (p < n - 1) kept.insert(p);
        moves.push_back({{-1, kept, n - 1}, 1});
      }
      if (!stored.count(cur) && static_cast<int>(stored.size()) < d) {
        auto more = stored;
        more.insert(cur);
        moves.push_back({{cur, more, n}, 0});
      }
    }
    for (int p : stored) {
      if (p != cur) moves.push_back({{p, stored, n}, 0});
      auto fewer = stored;
      fewer.erase(p);
      moves.push_back({{cur, fewer, n}, 0});
    }
    for (auto& [next, w] : moves) {
      auto it = dist.find(next);
      if (it == dist.end() || it->second > c + w) {
        dist[next] = c + w;
        pq.push({c + w, next});
      }
    }
  }
  return -1;
}

// Snapshot writes of the recursive schedule that splits at the smallest
// optimal m (initial-state write included).
inline std::int64_t schedule_writes(std::int64_t l, std::int64_t d) {
  d = std::min(d, l);
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> memo;
  auto execs = [&](auto&& self, std::int64_t n, std::int64_t k) -> std::int64_t {
    if (n == 1) return 1;
    if (k == 1) return n * (n + 1) / 2;
    auto key = std::make_pair(n, k);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::int64_t best = -1;
    for (std::int64_t m = 1; m < n; ++m) {
      auto e = m + self(self, n - m, k - 1) + self(self, m, k);
      if (best < 0 || e < best) best = e;
    }
    return memo[key] = best;
  };
  auto stores = [&](auto&& self, std::int64_t n, std::int64_t k) -> std::int64_t {
    if (n == 1 || k == 1) return 0;
    auto target = execs(execs, n, k);
    for (std::int64_t m = 1; m < n; ++m)
      if (m + execs(execs, n - m, k - 1) + execs(execs, m, k) == target)
        return 1 + self(self, n - m, k - 1) + self(self, m, k);
    return 0;
  };
  return 1 + stores(stores, l, d);
}

struct Cost {
  Seconds time = 0;
  Bytes peak = 0;
  Bytes turn = 0;
};

// Straight interpretation of the execution model on an explicit stack level.
class Reference {
public:
  explicit Reference(const CheckpointConfig& config) : config_(config) {}

  Cost run(const Body& root) {
    Bytes level = 0;
    Cost c;
    round_trip(root, level, &c.turn);
    c.time = time_;
    c.peak = peak_;
    return c;
  }

private:
  static Seconds primal(const Body& body) {
    Seconds t = 0;
    for (const auto& item : body) {
      if (auto* s = std::get_if<Segment>(&item.node)) t += s->t_primal;
      else if (auto* c = std::get_if<CallNode>(&item.node)) t += primal(c->body);
      else {
        auto& l = std::get<LoopNode>(item.node);
        t += static_cast<Seconds>(l.iterations) * primal(l.body);
      }
    }
    return t;
  }

  void at(Bytes level) { peak_ = std::max(peak_, level); }

  void round_trip(const Body& body, Bytes& level, Bytes* turn = nullptr) {
    forward(body, level);
    if (turn) *turn = level;
    backward(body, level);
  }

  void forward(const Body& body, Bytes& level) {
    for (const auto& item : body) {
      if (auto* s = std::get_if<Segment>(&item.node)) {
        time_ += s->t_fwd;
        at(level += s->tape_bytes);
      } else if (auto* c = std::get_if<CallNode>(&item.node)) {
        if (!config_.is_active(c->ref)) {
          forward(c->body, level);
        } else {
          time_ += c->t_snp_write + primal(c->body);
          at(level += c->snapshot_bytes);
        }
      } else {
        auto& l = std::get<LoopNode>(item.node);
        if (config_.binomial.count(l.id)) {
          time_ += l.t_snp_write;
          at(level += l.step_snapshot_bytes);
        } else {
          for (std::int64_t i = 0; i < l.iterations; ++i) forward(l.body, level);
        }
      }
    }
  }

  void backward(const Body& body, Bytes& level) {
    for (auto it = body.rbegin(); it != body.rend(); ++it) {
      if (auto* s = std::get_if<Segment>(&it->node)) {
        time_ += s->t_bwd;
        level -= s->tape_bytes;
      } else if (auto* c = std::get_if<CallNode>(&it->node)) {
        if (!config_.is_active(c->ref)) {
          backward(c->body, level);
        } else {
          level -= c->snapshot_bytes;
          time_ += c->t_snp_read;
          round_trip(c->body, level);
        }
      } else {
        auto& l = std::get<LoopNode>(it->node);
        auto d = config_.binomial.find(l.id);
        if (d == config_.binomial.end()) {
          for (std::int64_t i = 0; i < l.iterations; ++i) backward(l.body, level);
          continue;
        }
        const auto n = l.iterations;
        const auto slots = std::min(d->second, n);
        const auto execs = closed_form_executions(n, slots);
        // The step round trip always starts at the same level, so its cost
        // is measured once and repeated.
        Bytes inner_level = level - l.step_snapshot_bytes + slots * l.step_snapshot_bytes;
        at(inner_level);
        const Seconds before = time_;
        round_trip(l.body, inner_level);
        const Seconds rt = time_ - before;
        time_ = before + static_cast<Seconds>(execs - n) * primal(l.body) +
                static_cast<Seconds>(n) * rt +
                static_cast<Seconds>(schedule_writes(n, slots) - 1) * l.t_snp_write +
                static_cast<Seconds>(n) * l.t_snp_read;
        level -= l.step_snapshot_bytes;
      }
    }
  }

  const CheckpointConfig& config_;
  Seconds time_ = 0;
  Bytes peak_ = 0;
};

inline Cost reference_cost(const adjprof::CallTree& tree, const CheckpointConfig& config) {
  return Reference(config).run(tree.items);
}

}  // namespace oracle
