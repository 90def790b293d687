#include <charconv>
#include <sstream>

#include "adjprof/io.hpp"

namespace adjprof {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

CheckpointConfig parse_config(std::string_view doc) {
  using Kind = ConfigError::Kind;
  CheckpointConfig config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= doc.size()) {
    std::size_t eol = doc.find('\n', pos);
    if (eol == std::string_view::npos) eol = doc.size();
    std::string_view line = doc.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto words = split_ws(line);
    if (words.empty()) continue;

    if (words[0] == "inhibit") {
      if (words.size() != 2)
        throw ConfigError(Kind::Malformed, "expected 'inhibit NAME' or 'inhibit NAME@LINE'", line_no);
      auto token = words[1];
      auto at = token.find('@');
      if (at == 0) throw ConfigError(Kind::Malformed, "empty procedure name", line_no);
      try {
        config.inhibited.insert(StaticRef::parse(token));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(at == std::string_view::npos ? Kind::Malformed : Kind::MalformedSite,
                          e.what(), line_no);
      }
    } else if (words[0] == "binomial") {
      if (words.size() != 3)
        throw ConfigError(Kind::Malformed, "expected 'binomial LOOPID D'", line_no);
      auto d_text = words[2];
      std::int64_t d = 0;
      auto [ptr, ec] = std::from_chars(d_text.data(), d_text.data() + d_text.size(), d);
      if (ec != std::errc() || ptr != d_text.data() + d_text.size())
        throw ConfigError(Kind::BadCapacity, "capacity '" + std::string(d_text) + "' is not an integer",
                          line_no);
      if (d < 1) throw ConfigError(Kind::BadCapacity, "capacity must be >= 1", line_no);
      config.binomial[std::string(words[1])] = d;
    } else {
      throw ConfigError(Kind::UnknownDirective, "unknown directive '" + std::string(words[0]) + "'",
                        line_no);
    }
    if (eol == doc.size()) break;
  }
  return config;
}

std::string serialize_config(const CheckpointConfig& config) {
  std::ostringstream out;
  for (const auto& ref : config.inhibited) out << "inhibit " << ref.str() << "\n";
  for (const auto& [id, d] : config.binomial) out << "binomial " << id << " " << d << "\n";
  return out.str();
}

}  // namespace adjprof
