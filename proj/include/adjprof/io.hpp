#pragma once

#include <string>
#include <string_view>

#include "adjprof/errors.hpp"
#include "adjprof/model.hpp"

namespace adjprof {

/// Parses a JSON tree document:
///   {"name": s, "items": [...]}
/// where each item is exactly one of {"seg": {...}}, {"call": {...}}, {"loop": {...}}.
/// The result is validated. Throws TreeError.
CallTree parse_tree(std::string_view doc);

/// Canonical JSON form; parse_tree(serialize_tree(t)) == t.
std::string serialize_tree(const CallTree& tree);

/// Parses the line-oriented config format:
///   inhibit NAME | inhibit NAME@LINE | binomial LOOPID D
/// `#` starts a comment, blank lines are ignored. Throws ConfigError.
CheckpointConfig parse_config(std::string_view doc);

std::string serialize_config(const CheckpointConfig& config);

/// Reads a whole file. Throws FileError when it cannot be opened.
std::string read_file(const std::string& path);

class FileError : public Error {
public:
  using Error::Error;
};

}  // namespace adjprof
