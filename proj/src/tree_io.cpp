#include <fstream>
#include <sstream>

#include <json.hpp>

#include "adjprof/io.hpp"

namespace adjprof {

using json = nlohmann::ordered_json;

namespace {

using Kind = TreeError::Kind;

[[noreturn]] void schema(const std::string& what) { throw TreeError(Kind::Schema, what); }

void expect_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) schema(where + ": expected an object");
  for (const char* k : keys)
    if (!obj.contains(k)) schema(where + ": missing field '" + k + "'");
  if (obj.size() != keys.size()) {
    for (const auto& [k, v] : obj.items()) {
      bool known = false;
      for (const char* expected : keys) known = known || k == expected;
      if (!known) schema(where + ": unexpected field '" + k + "'");
    }
  }
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) schema(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

Seconds get_seconds(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) schema(where + ": '" + key + "' must be a number");
  double x = v.get<double>();
  if (!(x >= 0)) throw TreeError(Kind::NegativeValue, where + ": '" + key + "' must be >= 0");
  return x;
}

std::int64_t get_count(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) schema(where + ": '" + key + "' must be an integer");
  if (v.is_number_unsigned()) return static_cast<std::int64_t>(v.get<std::uint64_t>());
  auto x = v.get<std::int64_t>();
  if (x < 0) throw TreeError(Kind::NegativeValue, where + ": '" + key + "' must be >= 0");
  return x;
}

Body parse_items(const json& arr, const std::string& where);

TreeItem parse_item(const json& obj, const std::string& where) {
  if (!obj.is_object() || obj.size() != 1)
    schema(where + ": an item must be an object with exactly one of 'seg', 'call', 'loop'");
  const std::string tag = obj.begin().key();
  const json& v = obj.begin().value();
  if (tag == "seg") {
    expect_keys(v, {"label", "t_primal", "t_fwd", "t_bwd", "tape_bytes"}, where + ".seg");
    Segment s;
    s.label = get_string(v, "label", where);
    std::string w = "segment '" + s.label + "'";
    s.t_primal = get_seconds(v, "t_primal", w);
    s.t_fwd = get_seconds(v, "t_fwd", w);
    s.t_bwd = get_seconds(v, "t_bwd", w);
    s.tape_bytes = get_count(v, "tape_bytes", w);
    return s;
  }
  if (tag == "call") {
    expect_keys(v, {"proc", "site", "snapshot_bytes", "t_snp_write", "t_snp_read", "items"},
                where + ".call");
    CallNode c;
    c.ref.proc = get_string(v, "proc", where);
    c.ref.site = get_count(v, "site", "call '" + c.ref.proc + "'");
    std::string w = "call " + c.ref.str();
    c.snapshot_bytes = get_count(v, "snapshot_bytes", w);
    c.t_snp_write = get_seconds(v, "t_snp_write", w);
    c.t_snp_read = get_seconds(v, "t_snp_read", w);
    c.body = parse_items(v.at("items"), w);
    return c;
  }
  if (tag == "loop") {
    expect_keys(v, {"id", "iterations", "step_snapshot_bytes", "t_snp_write", "t_snp_read", "items"},
                where + ".loop");
    LoopNode l;
    l.id = get_string(v, "id", where);
    std::string w = "loop '" + l.id + "'";
    l.iterations = get_count(v, "iterations", w);
    if (l.iterations < 1) schema(w + ": 'iterations' must be >= 1");
    l.step_snapshot_bytes = get_count(v, "step_snapshot_bytes", w);
    l.t_snp_write = get_seconds(v, "t_snp_write", w);
    l.t_snp_read = get_seconds(v, "t_snp_read", w);
    l.body = parse_items(v.at("items"), w);
    return l;
  }
  schema(where + ": unknown item kind '" + tag + "'");
}

Body parse_items(const json& arr, const std::string& where) {
  if (!arr.is_array()) schema(where + ": 'items' must be an array");
  Body body;
  body.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    body.push_back(parse_item(arr[i], where + ".items[" + std::to_string(i) + "]"));
  return body;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view doc, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < doc.size(); ++i) {
    if (doc[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json dump_items(const Body& body) {
  json arr = json::array();
  for (const auto& item : body) {
    json v;
    if (auto* s = std::get_if<Segment>(&item.node)) {
      v["seg"] = {{"label", s->label},
                  {"t_primal", s->t_primal},
                  {"t_fwd", s->t_fwd},
                  {"t_bwd", s->t_bwd},
                  {"tape_bytes", s->tape_bytes}};
    } else if (auto* c = std::get_if<CallNode>(&item.node)) {
      v["call"] = {{"proc", c->ref.proc},
                   {"site", c->ref.site.value_or(0)},
                   {"snapshot_bytes", c->snapshot_bytes},
                   {"t_snp_write", c->t_snp_write},
                   {"t_snp_read", c->t_snp_read},
                   {"items", dump_items(c->body)}};
    } else {
      const auto& l = std::get<LoopNode>(item.node);
      v["loop"] = {{"id", l.id},
                   {"iterations", l.iterations},
                   {"step_snapshot_bytes", l.step_snapshot_bytes},
                   {"t_snp_write", l.t_snp_write},
                   {"t_snp_read", l.t_snp_read},
                   {"items", dump_items(l.body)}};
    }
    arr.push_back(std::move(v));
  }
  return arr;
}

}  // namespace

CallTree parse_tree(std::string_view doc) {
  json root;
  try {
    root = json::parse(doc.begin(), doc.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    auto [line, column] = line_column(doc, e.byte > 0 ? e.byte - 1 : 0);
    throw TreeError(Kind::Syntax,
                    "syntax error at line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ": " + e.what(),
                    line, column);
  }
  expect_keys(root, {"name", "items"}, "root");
  CallTree tree;
  tree.name = get_string(root, "name", "root");
  tree.items = parse_items(root.at("items"), "root");
  validate(tree);
  return tree;
}

std::string serialize_tree(const CallTree& tree) {
  json root;
  root["name"] = tree.name;
  root["items"] = dump_items(tree.items);
  return root.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace adjprof
