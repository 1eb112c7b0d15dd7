#pragma once

#include <cstdint>

#include "divclus/core.hpp"
#include "divclus/feasibility.hpp"

namespace divclus {

struct Ls0Config {
  double eps_ls = 0.01;  // accept a swap only if cost drops below (1 - eps_ls/k) x current
  int p = 1;             // swap size
  int restarts = 1;
  long long max_accepted_swaps = 50000;  // loop guard; never hit at default eps_ls
};

// Unconstrained local search from a uniform random k-subset; best
// improving swap of up to p facilities per round. Coverage/feasibility
// fields are left empty (requirements are ignored by design).
Solution local_search_ls0(const MetricInstance& instance, int k, std::uint64_t seed,
                          const Ls0Config& config = {});

struct KmppConfig {
  int restarts = 5;
};

// D^2-sampled seeding, min cost over restarts. Pads with duplicate ids
// (tagged "kmpp[pad]") when fewer distinct facilities than k are reachable.
Solution kmeanspp_seed(const MetricInstance& instance, int k, std::uint64_t seed,
                       const KmppConfig& config = {});

enum class PatternSource { kEs, kDp, kAll };

// Pool-restricted local search: one random facility per pattern pool, then
// improving swaps within the facility's own pool; min cost over the
// considered patterns (all feasible ones for kEs/kAll, the DP pick for kDp).
Solution local_search_ls1(const MetricInstance& instance, const GroupSystem& groups,
                          const Requirements& req, std::uint64_t seed,
                          PatternSource pattern_source, double eps_ls = 0.01);

}  // namespace divclus
