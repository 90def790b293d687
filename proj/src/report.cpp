#include "adjprof/report.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace adjprof {

std::string format_seconds(Seconds s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", s);
  return buf;
}

std::string config_token(const CheckpointConfig& config) {
  std::string out;
  for (const auto& ref : config.inhibited) {
    if (!out.empty()) out += ';';
    out += ref.str();
  }
  return out;
}

CheckpointConfig parse_config_token(std::string_view token) {
  CheckpointConfig config;
  while (!token.empty()) {
    auto semi = token.find(';');
    auto part = token.substr(0, semi);
    if (!part.empty()) config.inhibited.insert(StaticRef::parse(part));
    token = semi == std::string_view::npos ? std::string_view{} : token.substr(semi + 1);
  }
  return config;
}

std::string suggestions_csv(std::span<const Suggestion> suggestions) {
  std::string out = "ref,occurrences,category,dt_s,dtn_bytes,dpk_bytes\n";
  for (const auto& s : suggestions) {
    out += s.ref.str() + "," + std::to_string(s.occurrences) + "," +
           std::to_string(static_cast<int>(s.category)) + "," + format_seconds(s.dt) + "," +
           std::to_string(s.dtn) + "," + std::to_string(s.dpk) + "\n";
  }
  return out;
}

std::string suggestions_table(std::span<const Suggestion> suggestions) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "ref" << std::right << std::setw(6) << "occ" << std::setw(5)
      << "cat" << std::setw(18) << "dt_s" << std::setw(14) << "dtn_bytes" << std::setw(14)
      << "dpk_bytes" << "\n";
  bool any_multi = false;
  for (const auto& s : suggestions) {
    std::string name = s.ref.str() + (s.multi_site ? " *" : "");
    any_multi = any_multi || s.multi_site;
    out << std::left << std::setw(24) << name << std::right << std::setw(6) << s.occurrences
        << std::setw(5) << static_cast<int>(s.category) << std::setw(18) << format_seconds(s.dt)
        << std::setw(14) << s.dtn << std::setw(14) << s.dpk << "\n";
  }
  if (suggestions.empty()) out << "(no active checkpoint)\n";
  if (any_multi)
    out << "* procedure called at several sites: the prediction covers this site only\n";
  return out.str();
}

std::string trajectory_csv(std::span<const TrajectoryPoint> points) {
  std::string out = "step,time_s,peak_bytes,applied\n";
  for (const auto& p : points) {
    std::string applied;
    for (const auto& r : p.applied) {
      if (!applied.empty()) applied += ';';
      applied += r.str();
    }
    out += std::to_string(p.step) + "," + format_seconds(p.time_s) + "," +
           std::to_string(p.peak_bytes) + "," + applied + "\n";
  }
  return out;
}

std::string scatter_csv(std::span<const Evaluated> points) {
  std::string out = "config_id,time_s,peak_bytes\n";
  for (std::size_t i = 0; i < points.size(); ++i)
    out += std::to_string(i) + "," + format_seconds(points[i].time_s) + "," +
           std::to_string(points[i].peak_bytes) + "\n";
  return out;
}

std::string pareto_csv(std::span<const Evaluated> front) {
  std::string out = "time_s,peak_bytes,config\n";
  for (const auto& p : front)
    out += format_seconds(p.time_s) + "," + std::to_string(p.peak_bytes) + "," +
           config_token(p.config) + "\n";
  return out;
}

std::string revolve_header() { return "l\td\tr\tE\tstores\trestores\n"; }

std::string revolve_row(const BinomialSchedule& s, std::int64_t requested_slots) {
  return std::to_string(s.steps) + "\t" + std::to_string(requested_slots) + "\t" +
         std::to_string(s.repetition) + "\t" + std::to_string(s.step_executions) + "\t" +
         std::to_string(s.writes) + "\t" + std::to_string(s.reads) + "\n";
}

}  // namespace adjprof
