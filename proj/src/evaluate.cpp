#include <exception>
#include <limits>

#include "adjprof/optimizer.hpp"

namespace adjprof {

std::vector<Evaluated> evaluate_configs_serial(const CallTree& tree,
                                               std::span<const CheckpointConfig> configs) {
  std::vector<Evaluated> out;
  out.reserve(configs.size());
  for (const auto& c : configs) {
    auto cost = simulate(tree, c);
    out.push_back({c, cost.time_s, cost.peak_bytes});
  }
  return out;
}

std::vector<Evaluated> evaluate_configs(const CallTree& tree,
                                        std::span<const CheckpointConfig> configs) {
  const auto n = static_cast<std::ptrdiff_t>(configs.size());
  std::vector<Evaluated> out(configs.size());
  // First failure by index, so the reported error does not depend on scheduling.
  std::ptrdiff_t failed_at = std::numeric_limits<std::ptrdiff_t>::max();
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      auto cost = simulate(tree, configs[static_cast<std::size_t>(i)]);
      out[static_cast<std::size_t>(i)] = {configs[static_cast<std::size_t>(i)], cost.time_s,
                                          cost.peak_bytes};
    } catch (...) {
#pragma omp critical(adjprof_evaluate_failure)
      if (i < failed_at) {
        failed_at = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace adjprof
