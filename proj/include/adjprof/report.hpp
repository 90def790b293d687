#pragma once

// Text and CSV renderings. Seconds always print with 9 decimals, bytes as
// plain integers, so that outputs can be compared byte for byte.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adjprof/binomial.hpp"
#include "adjprof/optimizer.hpp"
#include "adjprof/profiler.hpp"

namespace adjprof {

std::string format_seconds(Seconds s);

/// Inhibited refs joined with ';' ("proc@site" or "proc").
std::string config_token(const CheckpointConfig& config);

/// Inverse of config_token for the inhibition set.
CheckpointConfig parse_config_token(std::string_view token);

std::string suggestions_csv(std::span<const Suggestion> suggestions);
std::string suggestions_table(std::span<const Suggestion> suggestions);

std::string trajectory_csv(std::span<const TrajectoryPoint> points);
std::string scatter_csv(std::span<const Evaluated> points);
std::string pareto_csv(std::span<const Evaluated> front);

std::string revolve_header();
/// One table row; `requested_slots` is the d asked for (the schedule may use fewer).
std::string revolve_row(const BinomialSchedule& schedule, std::int64_t requested_slots);

}  // namespace adjprof
