#include "divclus/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "divclus/rng.hpp"
#include "divclus/simplex.hpp"

namespace divclus {

int ConstraintPattern::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0);
}

std::vector<int> ConstraintPattern::aggregate(const std::vector<FacilityClass>& classes,
                                              int t) const {
  std::vector<int> agg(t, 0);
  for (std::size_t e = 0; e < counts.size(); ++e) {
    if (counts[e] == 0) continue;
    const std::uint64_t sig = classes[e].signature;
    for (int i = 0; i < t; ++i)
      if (sig >> i & 1) agg[i] += counts[e];
  }
  return agg;
}

namespace {

// Adds `mult` copies of signature `sig` into `agg` (t lanes).
void add_signature(std::vector<int>& agg, std::uint64_t sig, int mult) {
  for (std::size_t i = 0; i < agg.size(); ++i)
    if (sig >> i & 1) agg[i] += mult;
}

template <typename Emit>
void enumerate_patterns_rec(const std::vector<FacilityClass>& classes,
                            const Requirements& req, std::size_t index, int remaining,
                            std::vector<int>& counts, std::vector<int>& agg, Emit&& emit) {
  if (remaining == 0) {
    if (dominates(agg, req.r)) emit(counts);
    return;
  }
  if (index >= classes.size()) return;
  const int cap = std::min(remaining, classes[index].frequency());
  // Optimistic bound: even taking everything left cannot help if some
  // coordinate is unreachable; skipped, desk-scale enumeration is cheap.
  for (int m = 0; m <= cap; ++m) {
    counts[index] = m;
    add_signature(agg, classes[index].signature, m);
    enumerate_patterns_rec(classes, req, index + 1, remaining - m, counts, agg, emit);
    add_signature(agg, classes[index].signature, -m);
    counts[index] = 0;
  }
}

}  // namespace

std::vector<ConstraintPattern> enumerate_feasible_patterns(
    const std::vector<FacilityClass>& classes, const Requirements& req) {
  std::vector<ConstraintPattern> out;
  std::vector<int> counts(classes.size(), 0);
  std::vector<int> agg(req.t(), 0);
  enumerate_patterns_rec(classes, req, 0, req.k, counts, agg,
                         [&](const std::vector<int>& c) { out.push_back({c}); });
  return out;
}

std::optional<ConstraintPattern> first_feasible_pattern(
    const std::vector<FacilityClass>& classes, const Requirements& req) {
  std::optional<ConstraintPattern> found;
  std::vector<int> counts(classes.size(), 0);
  std::vector<int> agg(req.t(), 0);
  struct Stop {};
  try {
    enumerate_patterns_rec(classes, req, 0, req.k, counts, agg, [&](const std::vector<int>& c) {
      found = ConstraintPattern{c};
      throw Stop{};
    });
  } catch (const Stop&) {
  }
  return found;
}

long long dp_state_count(const Requirements& req) {
  long long prod = 1;
  for (int ri : req.r) {
    prod *= (ri + 1);
    if (prod > std::numeric_limits<long long>::max() / 64)
      throw CapExceededError("dp state count overflow");
  }
  return prod;
}

DpResult dp_feasible(const std::vector<FacilityClass>& classes, const Requirements& req) {
  const int t = req.t();
  const long long states = dp_state_count(req);
  DpResult res;
  res.state_count = states;

  // Mixed-radix state index over (r[0]+1) x ... x (r[t-1]+1).
  std::vector<long long> stride(t, 1);
  for (int i = 1; i < t; ++i) stride[i] = stride[i - 1] * (req.r[i - 1] + 1);

  // E' duplicates each class min(frequency, k) times.
  std::vector<int> layer_class;
  for (std::size_t e = 0; e < classes.size(); ++e) {
    const int copies = std::min(classes[e].frequency(), req.k);
    for (int c = 0; c < copies; ++c) layer_class.push_back(static_cast<int>(e));
  }

  constexpr std::uint8_t kInf = 255;
  std::vector<std::uint8_t> prev(states, kInf), cur(states);
  prev[0] = 0;

  std::vector<std::vector<std::uint64_t>> take_bits(
      layer_class.size(), std::vector<std::uint64_t>((states + 63) / 64, 0));

  for (std::size_t layer = 0; layer < layer_class.size(); ++layer) {
    const std::uint64_t sig = classes[layer_class[layer]].signature;
    std::vector<int> eta(t, 0);
    for (long long s = 0; s < states; ++s) {
      // Predecessor when taking this class: coordinatewise
      // max(eta - gamma, 0) in the capped state space.
      long long ps = s;
      for (int i = 0; i < t; ++i) {
        if (sig >> i & 1) {
          const int lowered = std::max(eta[i] - 1, 0);
          ps += (lowered - eta[i]) * stride[i];
        }
      }
      const std::uint8_t skip = prev[s];
      const std::uint8_t take = prev[ps] == kInf ? kInf : static_cast<std::uint8_t>(prev[ps] + 1);
      if (take < skip) {
        cur[s] = take;
        take_bits[layer][s >> 6] |= 1ULL << (s & 63);
      } else {
        cur[s] = skip;
      }
      // Increment mixed-radix counter.
      for (int i = 0; i < t; ++i) {
        if (++eta[i] <= req.r[i]) break;
        eta[i] = 0;
      }
    }
    std::swap(prev, cur);
  }

  const long long goal = states - 1;
  res.feasible = prev[goal] <= req.k;
  if (!res.feasible) return res;

  // Walk the take bits back from the goal state.
  std::vector<int> counts(classes.size(), 0);
  long long s = goal;
  for (int layer = static_cast<int>(layer_class.size()) - 1; layer >= 0 && s != 0; --layer) {
    if (take_bits[layer][s >> 6] >> (s & 63) & 1) {
      const std::uint64_t sig = classes[layer_class[layer]].signature;
      ++counts[layer_class[layer]];
      long long ns = s;
      long long rem = s;
      for (int i = t - 1; i >= 0; --i) {
        const int ei = static_cast<int>(rem / stride[i]);
        rem %= stride[i];
        if (sig >> i & 1) ns += (std::max(ei - 1, 0) - ei) * stride[i];
      }
      s = ns;
    }
  }
  res.picks = ConstraintPattern{counts};
  return res;
}

FractionalSolution lp_solve_fractional(const std::vector<FacilityClass>& classes,
                                       const Requirements& req) {
  const std::vector<double> zero(classes.size(), 0.0);
  return lp_solve_fractional_with_objective(classes, req, zero);
}

FractionalSolution lp_solve_fractional_with_objective(
    const std::vector<FacilityClass>& classes, const Requirements& req,
    const std::vector<double>& objective) {
  const int n = static_cast<int>(classes.size());
  const int t = req.t();
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<int> sense;
  for (int i = 0; i < t; ++i) {
    std::vector<double> row(n, 0.0);
    for (int e = 0; e < n; ++e)
      if (classes[e].signature >> i & 1) row[e] = 1.0;
    A.push_back(std::move(row));
    b.push_back(req.r[i]);
    sense.push_back(+1);
  }
  A.emplace_back(n, 1.0);
  b.push_back(req.k);
  sense.push_back(-1);
  for (int e = 0; e < n; ++e) {
    std::vector<double> row(n, 0.0);
    row[e] = 1.0;
    A.push_back(std::move(row));
    b.push_back(classes[e].frequency());
    sense.push_back(-1);
  }
  const LpResult lp = simplex_solve(A, b, sense, objective);
  FractionalSolution out;
  if (lp.status != LpStatus::kOptimal) return out;
  out.feasible = true;
  out.x = lp.x;
  return out;
}

namespace {

std::vector<int> round_fractional_draw(const std::vector<double>& x, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> counts(x.size(), 0);
  for (std::size_t e = 0; e < x.size(); ++e) {
    const double fl = std::floor(x[e]);
    const double p_floor = 1.0 - x[e] + fl;
    counts[e] = (unif(rng) < p_floor) ? static_cast<int>(fl) : static_cast<int>(fl) + 1;
  }
  return counts;
}

}  // namespace

std::vector<int> round_fractional(const std::vector<double>& x, std::uint64_t seed) {
  Rng rng(seed);
  return round_fractional_draw(x, rng);
}

std::optional<ConstraintPattern> lp_round(const std::vector<FacilityClass>& classes,
                                          const std::vector<double>& x_in,
                                          const Requirements& req, std::uint64_t seed,
                                          const LpRoundConfig& config) {
  std::vector<double> x = x_in;
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    if (attempt == config.resolve_after) {
      std::vector<double> obj(classes.size());
      for (auto& o : obj) o = unif(rng);
      const FractionalSolution again = lp_solve_fractional_with_objective(classes, req, obj);
      if (again.feasible) x = again.x;
    }
    std::vector<int> counts = round_fractional_draw(x, rng);
    const int total = std::accumulate(counts.begin(), counts.end(), 0);
    if (total > req.k) continue;
    std::vector<int> agg(req.t(), 0);
    for (std::size_t e = 0; e < counts.size(); ++e) add_signature(agg, classes[e].signature, counts[e]);
    if (!dominates(agg, req.r)) continue;
    bool freq_ok = true;
    for (std::size_t e = 0; e < counts.size(); ++e)
      if (counts[e] > classes[e].frequency()) freq_ok = false;
    if (!freq_ok) continue;
    return ConstraintPattern{counts};
  }
  return std::nullopt;
}

std::vector<int> materialize_pattern(const std::vector<FacilityClass>& classes,
                                     const ConstraintPattern& pattern, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> facilities;
  for (std::size_t e = 0; e < pattern.counts.size(); ++e) {
    const int m = pattern.counts[e];
    if (m == 0) continue;
    if (m > classes[e].frequency())
      throw std::logic_error("pattern multiplicity exceeds class frequency");
    // Partial Fisher-Yates: m distinct members.
    std::vector<int> pool = classes[e].members;
    for (int i = 0; i < m; ++i) {
      std::uniform_int_distribution<int> pick(i, static_cast<int>(pool.size()) - 1);
      std::swap(pool[i], pool[pick(rng)]);
      facilities.push_back(pool[i]);
    }
  }
  std::sort(facilities.begin(), facilities.end());
  return facilities;
}

namespace detail {

std::vector<std::vector<std::uint8_t>> dp_value_layers(
    const std::vector<FacilityClass>& classes, const Requirements& req) {
  const int t = req.t();
  const long long states = dp_state_count(req);
  std::vector<long long> stride(t, 1);
  for (int i = 1; i < t; ++i) stride[i] = stride[i - 1] * (req.r[i - 1] + 1);
  std::vector<int> layer_class;
  for (std::size_t e = 0; e < classes.size(); ++e)
    for (int c = 0; c < std::min(classes[e].frequency(), req.k); ++c)
      layer_class.push_back(static_cast<int>(e));

  constexpr std::uint8_t kInf = 255;
  std::vector<std::vector<std::uint8_t>> layers(layer_class.size() + 1,
                                                std::vector<std::uint8_t>(states, kInf));
  layers[0][0] = 0;
  for (std::size_t layer = 0; layer < layer_class.size(); ++layer) {
    const std::uint64_t sig = classes[layer_class[layer]].signature;
    std::vector<int> eta(t, 0);
    for (long long s = 0; s < states; ++s) {
      long long ps = s;
      for (int i = 0; i < t; ++i)
        if (sig >> i & 1) ps += (std::max(eta[i] - 1, 0) - eta[i]) * stride[i];
      const std::uint8_t skip = layers[layer][s];
      const std::uint8_t take =
          layers[layer][ps] == kInf ? kInf : static_cast<std::uint8_t>(layers[layer][ps] + 1);
      layers[layer + 1][s] = std::min(skip, take);
      for (int i = 0; i < t; ++i) {
        if (++eta[i] <= req.r[i]) break;
        eta[i] = 0;
      }
    }
  }
  return layers;
}

}  // namespace detail

Solution pattern_to_solution(const MetricInstance& instance, const GroupSystem& groups,
                             const Requirements& req,
                             const std::vector<FacilityClass>& classes,
                             const ConstraintPattern& pattern, std::uint64_t seed,
                             std::string algorithm) {
  std::vector<int> facilities = materialize_pattern(classes, pattern, seed);
  Solution sol;
  sol.facilities = facilities;
  sol.cost = facilities.empty() ? 0.0 : evaluate_cost(instance, facilities);
  sol.coverage = coverage(facilities, groups);
  sol.feasible = dominates(sol.coverage, req.r) && static_cast<int>(facilities.size()) <= req.k;
  sol.algorithm = std::move(algorithm);
  sol.budget = req.k;
  return sol;
}

}  // namespace divclus
