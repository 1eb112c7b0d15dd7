#pragma once

#include <cstdint>
#include <vector>

#include "divclus/core.hpp"

namespace divclus {

struct SyntheticInstance {
  std::vector<std::vector<double>> coords;  // U = C = F
  GroupSystem groups;
  Requirements req;
};

struct GeneratorConfig {
  double sigma = 0.05;  // per-blob standard deviation
};

// Gaussian blobs with centers uniform in the unit box; every point joins g
// groups, g uniform in [1, max(1, floor(t/2))], ids sampled without
// replacement. Identical seeds yield identical instances. `r` defaults to
// all-ones when empty.
SyntheticInstance generate_synthetic(int n, int dim, int blobs, int t, int k,
                                     std::uint64_t seed, std::vector<int> r = {},
                                     const GeneratorConfig& config = {});

}  // namespace divclus
