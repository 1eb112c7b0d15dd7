#pragma once

#include <cstdint>

#include "divclus/core.hpp"

namespace divclus {

struct CoresetConfig {
  // Target size m = ceil(c0 * k * D / nu^2) for median,
  // ceil(c0 * k * D^3 / nu^4) for means, capped at |C|.
  double c0 = 20.0;
};

// Sensitivity-sampled weighted client subset. With m >= |C| the full
// client set is returned unchanged (exact costs). Deterministic given the
// seed; duplicate draws are merged by summing weights.
WeightedClientSet build_coreset(const MetricInstance& instance, int k, double nu,
                                double delta, std::uint64_t seed,
                                const CoresetConfig& config = {});

// The instance's own clients at their own weights.
WeightedClientSet passthrough_clients(const MetricInstance& instance);

}  // namespace divclus
