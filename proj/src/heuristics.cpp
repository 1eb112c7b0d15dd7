#include "divclus/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "divclus/rng.hpp"

namespace divclus {

namespace {

double phi(double d, bool means) { return means ? d * d : d; }

// Nearest and second-nearest open facility per client.
struct Assignment {
  std::vector<double> d1, d2;
  std::vector<int> n1;

  void rebuild(const MetricInstance& instance, const std::vector<int>& S) {
    const int nc = instance.num_clients();
    d1.assign(nc, std::numeric_limits<double>::infinity());
    d2.assign(nc, std::numeric_limits<double>::infinity());
    n1.assign(nc, -1);
    for (int c = 0; c < nc; ++c) {
      for (int f : S) {
        const double d = instance.distance(c, f);
        if (d < d1[c] || (d == d1[c] && n1[c] > f)) {
          d2[c] = d1[c];
          d1[c] = d;
          n1[c] = f;
        } else if (d < d2[c]) {
          d2[c] = d;
        }
      }
    }
  }
};

double assignment_cost(const MetricInstance& instance, const Assignment& asg, bool means) {
  double total = 0;
  for (int c = 0; c < instance.num_clients(); ++c)
    total += instance.client_weight(c) * phi(asg.d1[c], means);
  return total;
}

// Cost after swapping `out` (may be -1 for none) for `in` given the
// current nearest/second-nearest structure. Exact for single swaps.
double single_swap_cost(const MetricInstance& instance, const Assignment& asg, bool means,
                        int out, int in) {
  double total = 0;
  for (int c = 0; c < instance.num_clients(); ++c) {
    double base = (asg.n1[c] == out) ? asg.d2[c] : asg.d1[c];
    if (in >= 0) base = std::min(base, instance.distance(c, in));
    total += instance.client_weight(c) * phi(base, means);
  }
  return total;
}

Solution single_ls0_run(const MetricInstance& instance, int k, std::uint64_t seed,
                        const Ls0Config& config) {
  const int nf = instance.num_facilities();
  const bool means = instance.objective() == Objective::kMeans;
  Rng rng(seed);

  // Uniform random k-subset (partial Fisher-Yates).
  std::vector<int> all(nf);
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, nf - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  std::vector<int> S(all.begin(), all.begin() + k);
  std::sort(S.begin(), S.end());

  Assignment asg;
  asg.rebuild(instance, S);
  double cost = assignment_cost(instance, asg, means);

  const double accept_factor = 1.0 - config.eps_ls / k;
  long long accepted = 0;
  for (;;) {
    if (accepted >= config.max_accepted_swaps)
      throw std::runtime_error("ls0 exceeded its accepted-swap guard");
    double best_cost = cost;
    std::vector<int> best_out, best_in;

    if (config.p == 1) {
      std::vector<bool> open(nf, false);
      for (int f : S) open[f] = true;
      for (int out : S) {
        for (int in = 0; in < nf; ++in) {
          if (open[in]) continue;
          const double c2 = single_swap_cost(instance, asg, means, out, in);
          if (c2 < best_cost) {
            best_cost = c2;
            best_out = {out};
            best_in = {in};
          }
        }
      }
    } else {
      // Exhaustive swap sets up to size p; desk scale only.
      std::vector<int> closed;
      for (int f = 0; f < nf; ++f)
        if (std::find(S.begin(), S.end(), f) == S.end()) closed.push_back(f);
      for (int q = 1; q <= config.p; ++q) {
        if (q > static_cast<int>(S.size()) || q > static_cast<int>(closed.size())) break;
        std::vector<int> oidx(q), iidx(q);
        auto combos = [&](const std::vector<int>& universe, int size, auto&& visit) {
          std::vector<int> sel(size);
          auto rec = [&](auto&& self, int pos, int start) -> void {
            if (pos == size) {
              visit(sel);
              return;
            }
            for (int i = start; i <= static_cast<int>(universe.size()) - (size - pos); ++i) {
              sel[pos] = universe[i];
              self(self, pos + 1, i + 1);
            }
          };
          rec(rec, 0, 0);
        };
        combos(S, q, [&](const std::vector<int>& outs) {
          combos(closed, q, [&](const std::vector<int>& ins) {
            std::vector<int> trial;
            for (int f : S)
              if (std::find(outs.begin(), outs.end(), f) == outs.end()) trial.push_back(f);
            trial.insert(trial.end(), ins.begin(), ins.end());
            const double c2 = evaluate_cost(instance, trial);
            if (c2 < best_cost) {
              best_cost = c2;
              best_out = outs;
              best_in = ins;
            }
          });
        });
      }
    }

    if (best_in.empty() || best_cost > accept_factor * cost) break;
    for (std::size_t i = 0; i < best_out.size(); ++i)
      std::replace(S.begin(), S.end(), best_out[i], best_in[i]);
    std::sort(S.begin(), S.end());
    asg.rebuild(instance, S);
    cost = assignment_cost(instance, asg, means);
    ++accepted;
  }

  Solution sol;
  sol.facilities = S;
  sol.cost = cost;
  sol.algorithm = "ls0";
  sol.budget = k;
  return sol;
}

}  // namespace

Solution local_search_ls0(const MetricInstance& instance, int k, std::uint64_t seed,
                          const Ls0Config& config) {
  if (k < 1 || k > instance.num_facilities())
    throw std::invalid_argument("k out of range for ls0");
  Solution best;
  best.cost = std::numeric_limits<double>::infinity();
  for (int r = 0; r < config.restarts; ++r) {
    Solution run = single_ls0_run(instance, k, derive_seed(seed, r), config);
    if (run.cost < best.cost) best = std::move(run);
  }
  return best;
}

Solution kmeanspp_seed(const MetricInstance& instance, int k, std::uint64_t seed,
                       const KmppConfig& config) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (instance.objective() != Objective::kMeans)
    throw std::invalid_argument("kmeanspp_seed expects the means objective");
  const int nc = instance.num_clients();
  const int nf = instance.num_facilities();

  Solution best;
  best.cost = std::numeric_limits<double>::infinity();
  for (int run = 0; run < config.restarts; ++run) {
    Rng rng(derive_seed(seed, run));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<int> S;
    std::vector<bool> chosen(nf, false);
    bool padded = false;

    auto nearest_unchosen = [&](int client) {
      double bd = std::numeric_limits<double>::infinity();
      int bf = -1;
      for (int f = 0; f < nf; ++f) {
        if (chosen[f]) continue;
        const double d = instance.distance(client, f);
        if (d < bd) {
          bd = d;
          bf = f;
        }
      }
      return bf;
    };

    std::vector<double> mind(nc, std::numeric_limits<double>::infinity());
    while (static_cast<int>(S.size()) < k) {
      int client;
      if (S.empty()) {
        std::uniform_int_distribution<int> any(0, nc - 1);
        client = any(rng);
      } else {
        double acc = 0;
        std::vector<double> prefix(nc);
        for (int c = 0; c < nc; ++c) {
          acc += instance.client_weight(c) * mind[c] * mind[c];
          prefix[c] = acc;
        }
        if (acc <= 0) {
          // Every client sits on a chosen facility; pad with duplicates.
          S.push_back(S.back());
          padded = true;
          continue;
        }
        const double target = unif(rng) * acc;
        client = static_cast<int>(std::upper_bound(prefix.begin(), prefix.end(), target) -
                                  prefix.begin());
        client = std::min(client, nc - 1);
      }
      const int f = nearest_unchosen(client);
      if (f < 0) {
        S.push_back(S.back());
        padded = true;
        continue;
      }
      chosen[f] = true;
      S.push_back(f);
      for (int c = 0; c < nc; ++c) mind[c] = std::min(mind[c], instance.distance(c, f));
    }

    std::vector<int> distinct = S;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    Solution sol;
    sol.facilities = distinct;
    sol.cost = evaluate_cost(instance, distinct);
    sol.algorithm = padded ? "kmpp[pad]" : "kmpp";
    sol.budget = k;
    if (sol.cost < best.cost) best = std::move(sol);
  }
  return best;
}

Solution local_search_ls1(const MetricInstance& instance, const GroupSystem& groups,
                          const Requirements& req, std::uint64_t seed,
                          PatternSource pattern_source, double eps_ls) {
  if (req.k > instance.num_facilities())
    throw std::invalid_argument("k exceeds facility count");
  const std::vector<FacilityClass> classes = partition_classes(instance, groups);
  std::vector<ConstraintPattern> patterns;
  if (pattern_source == PatternSource::kDp) {
    const DpResult dp = dp_feasible(classes, req);
    if (!dp.feasible) throw InfeasibleError("infeasible instance");
    // The DP pattern is minimal; pad it to a full k-multiset so the search
    // runs over exactly k pools.
    ConstraintPattern pattern = *dp.picks;
    int total = pattern.total();
    for (std::size_t e = 0; e < classes.size() && total < req.k; ++e) {
      while (pattern.counts[e] < classes[e].frequency() && total < req.k) {
        ++pattern.counts[e];
        ++total;
      }
    }
    patterns.push_back(std::move(pattern));
  } else {
    patterns = enumerate_feasible_patterns(classes, req);
    if (patterns.empty()) throw InfeasibleError("infeasible instance");
  }

  const bool means = instance.objective() == Objective::kMeans;
  const int k = req.k;
  const double accept_factor = k > 0 ? 1.0 - eps_ls / k : 1.0;

  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<int> best_S;
  for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
    const ConstraintPattern& pattern = patterns[pi];
    Rng rng(derive_seed(seed, pi));

    // One random distinct facility per pool; pools of one class share its
    // member list.
    std::vector<int> S;
    std::vector<int> slot_class;
    for (std::size_t e = 0; e < pattern.counts.size(); ++e) {
      const int m = pattern.counts[e];
      if (m == 0) continue;
      std::vector<int> pool = classes[e].members;
      for (int i = 0; i < m; ++i) {
        std::uniform_int_distribution<int> pick(i, static_cast<int>(pool.size()) - 1);
        std::swap(pool[i], pool[pick(rng)]);
        S.push_back(pool[i]);
        slot_class.push_back(static_cast<int>(e));
      }
    }
    if (S.empty()) {
      // Vacuous pattern (k covered by zero requirement never happens:
      // patterns always total k >= 1).
      continue;
    }

    Assignment asg;
    asg.rebuild(instance, S);
    double cost = assignment_cost(instance, asg, means);
    for (;;) {
      double best_swap_cost = cost;
      int best_slot = -1, best_in = -1;
      for (std::size_t slot = 0; slot < S.size(); ++slot) {
        for (int candidate : classes[slot_class[slot]].members) {
          if (std::find(S.begin(), S.end(), candidate) != S.end()) continue;
          const double c2 = single_swap_cost(instance, asg, means, S[slot], candidate);
          if (c2 < best_swap_cost) {
            best_swap_cost = c2;
            best_slot = static_cast<int>(slot);
            best_in = candidate;
          }
        }
      }
      if (best_slot < 0 || best_swap_cost > accept_factor * cost) break;
      S[best_slot] = best_in;
      asg.rebuild(instance, S);
      cost = assignment_cost(instance, asg, means);
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_S = S;
    }
  }

  Solution sol = make_solution(instance, groups, req, best_S, "ls1", req.k);
  return sol;
}

}  // namespace divclus
