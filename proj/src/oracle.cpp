#include "divclus/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace divclus {
namespace oracle {

namespace {

long long binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (long long i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (1LL << 60)) return 1LL << 60;
  }
  return r;
}

// Packed 8-bit lanes for coverage checks (t <= 8, counts <= 127); falls
// back to plain vectors beyond.
bool lanes_usable(const GroupSystem& groups, const Requirements& req) {
  return groups.t <= 8 && req.k <= 127;
}

std::uint64_t pack_signature(std::uint64_t sig, int t) {
  std::uint64_t packed = 0;
  for (int i = 0; i < t; ++i)
    if (sig >> i & 1) packed |= 1ULL << (8 * i);
  return packed;
}

std::uint64_t pack_requirement(const std::vector<int>& r) {
  std::uint64_t packed = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    packed |= static_cast<std::uint64_t>(r[i]) << (8 * i);
  return packed;
}

// Lanewise a >= b for 8-bit lanes, assuming no lane exceeds 127.
bool lanes_dominate(std::uint64_t a, std::uint64_t b) {
  constexpr std::uint64_t high = 0x8080808080808080ULL;
  // (a | high) - b has the high bit of each lane set iff a_lane >= b_lane.
  return ((((a | high) - b) & high) == high);
}

template <typename Visit>
void for_each_ksubset(int n, int k, Visit&& visit) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    if (!visit(idx)) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::optional<std::vector<int>> feasible_ksubset(const GroupSystem& groups,
                                                 const Requirements& req,
                                                 const OracleConfig& config) {
  const int n = groups.num_facilities();
  const int k = req.k;
  if (binomial(n, k) > config.subset_cap)
    throw CapExceededError("subset enumeration exceeds oracle cap");
  std::optional<std::vector<int>> found;
  if (lanes_usable(groups, req)) {
    std::vector<std::uint64_t> packed(n);
    for (int f = 0; f < n; ++f) packed[f] = pack_signature(groups.membership[f], groups.t);
    const std::uint64_t need = pack_requirement(req.r);
    // Running lane sums along the combination prefix.
    std::vector<std::uint64_t> prefix(k + 1, 0);
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return std::nullopt;
    int dirty = 0;  // prefix[0..dirty] valid
    for (;;) {
      for (int i = dirty; i < k; ++i) prefix[i + 1] = prefix[i] + packed[idx[i]];
      if (lanes_dominate(prefix[k], need)) {
        found = idx;
        return found;
      }
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) return std::nullopt;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      dirty = i;
    }
  }
  for_each_ksubset(n, k, [&](const std::vector<int>& idx) {
    if (dominates(coverage(idx, groups), req.r)) {
      found = idx;
      return false;
    }
    return true;
  });
  return found;
}

std::optional<Solution> exact_divkmed(const MetricInstance& instance,
                                      const GroupSystem& groups, const Requirements& req,
                                      const OracleConfig& config) {
  const int n = instance.num_facilities();
  const int k = req.k;
  if (binomial(n, k) > config.subset_cap)
    throw CapExceededError("subset enumeration exceeds oracle cap");

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_set;
  for_each_ksubset(n, k, [&](const std::vector<int>& idx) {
    if (dominates(coverage(idx, groups), req.r)) {
      const double c = evaluate_cost(instance, idx);
      if (c < best) {
        best = c;
        best_set = idx;
      }
    }
    return true;
  });
  if (best_set.empty()) return std::nullopt;
  return make_solution(instance, groups, req, std::move(best_set), "oracle", req.k);
}

std::vector<ConstraintPattern> exact_feasible_multisets(
    const std::vector<FacilityClass>& classes, const Requirements& req,
    const OracleConfig& config) {
  if (binomial(static_cast<long long>(classes.size()) + req.k - 1, req.k) > config.subset_cap)
    throw CapExceededError("multiset enumeration exceeds oracle cap");
  // Plain multiset recursion, independent of the solver's enumerator.
  std::vector<ConstraintPattern> out;
  std::vector<int> counts(classes.size(), 0);
  auto rec = [&](auto&& self, std::size_t e, int left) -> void {
    if (e == classes.size()) {
      if (left != 0) return;
      std::vector<int> agg(req.t(), 0);
      for (std::size_t i = 0; i < classes.size(); ++i)
        for (int b = 0; b < req.t(); ++b)
          if (classes[i].signature >> b & 1) agg[b] += counts[i];
      if (dominates(agg, req.r)) out.push_back(ConstraintPattern{counts});
      return;
    }
    for (int m = 0; m <= std::min(left, classes[e].frequency()); ++m) {
      counts[e] = m;
      self(self, e + 1, left - m);
      counts[e] = 0;
    }
  };
  rec(rec, 0, req.k);
  return out;
}

SubmodularMax exact_submodular_max(const FictitiousExtension& ext,
                                   const WeightedClientSet& clients,
                                   const OracleConfig& config) {
  const int k = ext.num_pools();
  long long product = 1;
  for (const auto& pool : ext.pools()) {
    product *= static_cast<long long>(pool.size());
    if (product > config.product_cap)
      throw CapExceededError("pool product exceeds oracle cap");
  }
  const MetricInstance& inst = ext.instance();
  const bool means = inst.objective() == Objective::kMeans;

  SubmodularMax best;
  best.value = -1;
  std::vector<int> pick(k, -1);
  auto rec = [&](auto&& self, int j) -> void {
    if (j == k) {
      // Evaluate improv from scratch through the extension's surface.
      double with_s = 0;
      for (std::size_t i = 0; i < clients.size(); ++i) {
        double d = ext.nearest_fictitious(static_cast<int>(i));
        for (int f : pick) d = std::min(d, inst.distance(clients.clients[i], f));
        with_s += clients.weights[i] * (means ? d * d : d);
      }
      const double value = ext.fictitious_cost() - with_s;
      if (value > best.value) {
        best.value = value;
        best.selection = pick;
      }
      return;
    }
    for (int f : ext.pools()[j]) {
      bool dup = false;
      for (int i = 0; i < j; ++i)
        if (pick[i] == f) dup = true;
      if (dup) continue;
      pick[j] = f;
      self(self, j + 1);
    }
    pick[j] = -1;
  };
  rec(rec, 0);
  return best;
}

}  // namespace oracle
}  // namespace divclus
