#include "adjprof/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include "adjprof/errors.hpp"

namespace adjprof {

TreeError::TreeError(Kind kind, const std::string& what, std::size_t line, std::size_t column)
    : Error(what), kind_(kind), line_(line), column_(column) {}

ConfigError::ConfigError(Kind kind, const std::string& what, std::size_t line)
    : Error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

StreamError::StreamError(const std::string& what, std::size_t event_index)
    : Error("event " + std::to_string(event_index) + ": " + what), index_(event_index) {}

std::string StaticRef::str() const {
  if (!site) return proc;
  return proc + "@" + std::to_string(*site);
}

namespace {

bool is_identifier(std::string_view s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) || c == '@' || c == ';' || c == ',' || c == '#';
  });
}

}  // namespace

StaticRef StaticRef::parse(std::string_view token) {
  auto at = token.find('@');
  std::string_view proc = token.substr(0, at);
  if (!is_identifier(proc)) throw std::invalid_argument("bad procedure name in '" + std::string(token) + "'");
  if (at == std::string_view::npos) return StaticRef(std::string(proc));
  std::string_view site = token.substr(at + 1);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(site.data(), site.data() + site.size(), value);
  if (site.empty() || ec != std::errc() || ptr != site.data() + site.size() || value < 0)
    throw std::invalid_argument("bad call site in '" + std::string(token) + "'");
  return StaticRef(std::string(proc), value);
}

bool CallNode::operator==(const CallNode& o) const {
  return ref == o.ref && snapshot_bytes == o.snapshot_bytes && t_snp_write == o.t_snp_write &&
         t_snp_read == o.t_snp_read && body == o.body;
}

bool LoopNode::operator==(const LoopNode& o) const {
  return id == o.id && iterations == o.iterations && step_snapshot_bytes == o.step_snapshot_bytes &&
         t_snp_write == o.t_snp_write && t_snp_read == o.t_snp_read && body == o.body;
}

bool CheckpointConfig::is_active(const StaticRef& call_ref) const {
  if (inhibited.empty()) return true;
  if (inhibited.count(call_ref)) return false;
  return !inhibited.count(StaticRef(call_ref.proc));
}

namespace {

template <class Fn>
void walk(const Body& body, Fn&& fn) {
  for (const auto& item : body) {
    fn(item);
    if (auto* c = std::get_if<CallNode>(&item.node)) walk(c->body, fn);
    else if (auto* l = std::get_if<LoopNode>(&item.node)) walk(l->body, fn);
  }
}

}  // namespace

std::vector<StaticRef> static_refs(const CallTree& tree) {
  std::vector<StaticRef> refs;
  walk(tree.items, [&](const TreeItem& item) {
    if (auto* c = std::get_if<CallNode>(&item.node)) refs.push_back(c->ref);
  });
  return refs;
}

std::vector<std::string> loop_ids(const CallTree& tree) {
  std::vector<std::string> ids;
  walk(tree.items, [&](const TreeItem& item) {
    if (auto* l = std::get_if<LoopNode>(&item.node)) ids.push_back(l->id);
  });
  return ids;
}

Seconds primal_time(const Body& body) {
  Seconds t = 0;
  for (const auto& item : body) {
    if (auto* s = std::get_if<Segment>(&item.node)) t += s->t_primal;
    else if (auto* c = std::get_if<CallNode>(&item.node)) t += primal_time(c->body);
    else {
      const auto& l = std::get<LoopNode>(item.node);
      t += static_cast<Seconds>(l.iterations) * primal_time(l.body);
    }
  }
  return t;
}

std::size_t node_count(const CallTree& tree) {
  std::size_t n = 0;
  walk(tree.items, [&](const TreeItem&) { ++n; });
  return n;
}

namespace {

void require_non_negative(double v, const std::string& field, const std::string& where) {
  if (!(v >= 0))
    throw TreeError(TreeError::Kind::NegativeValue, where + ": " + field + " must be >= 0");
}

}  // namespace

void validate(const CallTree& tree) {
  std::set<StaticRef> refs;
  std::set<std::string> loops;
  walk(tree.items, [&](const TreeItem& item) {
    if (auto* s = std::get_if<Segment>(&item.node)) {
      std::string where = "segment '" + s->label + "'";
      require_non_negative(s->t_primal, "t_primal", where);
      require_non_negative(s->t_fwd, "t_fwd", where);
      require_non_negative(s->t_bwd, "t_bwd", where);
      require_non_negative(static_cast<double>(s->tape_bytes), "tape_bytes", where);
    } else if (auto* c = std::get_if<CallNode>(&item.node)) {
      if (!is_identifier(c->ref.proc))
        throw TreeError(TreeError::Kind::Schema, "call: invalid procedure name '" + c->ref.proc + "'");
      if (!c->ref.site)
        throw TreeError(TreeError::Kind::Schema, "call '" + c->ref.proc + "' has no site");
      std::string where = "call " + c->ref.str();
      require_non_negative(static_cast<double>(*c->ref.site), "site", where);
      require_non_negative(static_cast<double>(c->snapshot_bytes), "snapshot_bytes", where);
      require_non_negative(c->t_snp_write, "t_snp_write", where);
      require_non_negative(c->t_snp_read, "t_snp_read", where);
      if (!refs.insert(c->ref).second)
        throw TreeError(TreeError::Kind::DuplicateCall, "duplicate call site " + c->ref.str());
    } else {
      const auto& l = std::get<LoopNode>(item.node);
      if (!is_identifier(l.id))
        throw TreeError(TreeError::Kind::Schema, "loop: invalid id '" + l.id + "'");
      std::string where = "loop '" + l.id + "'";
      if (l.iterations < 1)
        throw TreeError(TreeError::Kind::Schema, where + ": iterations must be >= 1");
      require_non_negative(static_cast<double>(l.step_snapshot_bytes), "step_snapshot_bytes", where);
      require_non_negative(l.t_snp_write, "t_snp_write", where);
      require_non_negative(l.t_snp_read, "t_snp_read", where);
      if (!loops.insert(l.id).second)
        throw TreeError(TreeError::Kind::DuplicateLoop, "duplicate loop id '" + l.id + "'");
    }
  });
}

void check_config(const CallTree& tree, const CheckpointConfig& config) {
  if (config.binomial.empty()) return;
  auto ids = loop_ids(tree);
  for (const auto& [id, d] : config.binomial) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
      throw ConfigMismatch("binomial capacity given for unknown loop '" + id + "'");
    if (d < 1) throw ConfigMismatch("binomial capacity for loop '" + id + "' must be >= 1");
  }
}

}  // namespace adjprof
