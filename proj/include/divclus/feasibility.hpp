#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "divclus/core.hpp"

namespace divclus {

// A k-multiset of facility classes, stored as per-class multiplicities
// aligned with the canonical class vector.
struct ConstraintPattern {
  std::vector<int> counts;

  int total() const;
  std::vector<int> aggregate(const std::vector<FacilityClass>& classes, int t) const;
};

// All k-multisets of classes whose signature sum dominates r and whose
// per-class multiplicity stays within the class frequency. Canonical
// order: lexicographic on non-decreasing class-index sequences.
std::vector<ConstraintPattern> enumerate_feasible_patterns(
    const std::vector<FacilityClass>& classes, const Requirements& req);

// Streaming variant for the bicriteria path: first feasible pattern in
// canonical order, or nullopt.
std::optional<ConstraintPattern> first_feasible_pattern(
    const std::vector<FacilityClass>& classes, const Requirements& req);

struct DpResult {
  bool feasible = false;
  std::optional<ConstraintPattern> picks;
  long long state_count = 0;  // states per table layer
};

// Set-multicover dynamic program over classes duplicated min(frequency, k)
// times, with per-coordinate requirement capping. Two rolling value layers
// plus a take-bit log for solution extraction.
DpResult dp_feasible(const std::vector<FacilityClass>& classes, const Requirements& req);

// Product of (r[i]+1): exact per-layer DP state count.
long long dp_state_count(const Requirements& req);

struct FractionalSolution {
  bool feasible = false;
  std::vector<double> x;  // per class, aligned with the class vector
};

// Covering LP: sum_E x_E * gamma_E >= r, sum x_E <= k, 0 <= x_E <= freq(E).
// Any feasible point; constraints honored to 1e-7.
FractionalSolution lp_solve_fractional(const std::vector<FacilityClass>& classes,
                                       const Requirements& req);

// Same LP under a caller-chosen linear objective (used to move to another
// vertex when rounding keeps failing).
FractionalSolution lp_solve_fractional_with_objective(
    const std::vector<FacilityClass>& classes, const Requirements& req,
    const std::vector<double>& objective);

struct LpRoundConfig {
  int max_attempts = 100;
  // After this many failures the LP is re-solved with a randomized
  // objective (coefficients uniform in [0,1]) to move to another vertex.
  int resolve_after = 50;
};

// One unconditional rounding draw: each x_i drops to floor(x_i) with
// probability 1 - x_i + floor(x_i), else ceils.
std::vector<int> round_fractional(const std::vector<double>& x, std::uint64_t seed);

// Randomized rounding of a fractional solution: repeats round_fractional
// until the rounded vector still covers r with at most k picks within the
// class frequencies; nullopt means rounding failed, not that the instance
// is infeasible.
std::optional<ConstraintPattern> lp_round(const std::vector<FacilityClass>& classes,
                                          const std::vector<double>& x,
                                          const Requirements& req, std::uint64_t seed,
                                          const LpRoundConfig& config = {});

// One distinct facility per multiset element, chosen at random within each
// class. Throws if a multiplicity exceeds the class frequency.
std::vector<int> materialize_pattern(const std::vector<FacilityClass>& classes,
                                     const ConstraintPattern& pattern, std::uint64_t seed);

Solution pattern_to_solution(const MetricInstance& instance, const GroupSystem& groups,
                             const Requirements& req,
                             const std::vector<FacilityClass>& classes,
                             const ConstraintPattern& pattern, std::uint64_t seed,
                             std::string algorithm = "pattern");

namespace detail {
// Full DP value table, layers 0..|E'| by capped state; 255 = unreachable.
// Kept as a test surface for the recursion's layer monotonicity and the
// state-capping equivalence.
std::vector<std::vector<std::uint8_t>> dp_value_layers(
    const std::vector<FacilityClass>& classes, const Requirements& req);
}  // namespace detail

}  // namespace divclus
