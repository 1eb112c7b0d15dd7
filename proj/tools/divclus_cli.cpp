#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "divclus/compose.hpp"
#include "divclus/coreset.hpp"
#include "divclus/core.hpp"
#include "divclus/feasibility.hpp"
#include "divclus/fpt.hpp"
#include "divclus/generator.hpp"
#include "divclus/heuristics.hpp"
#include "divclus/io.hpp"
#include "divclus/rng.hpp"

namespace {

using nlohmann::json;
using namespace divclus;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

struct InstanceArgs {
  std::string points_path;
  std::string dist_path;
  std::string groups_path;
  std::string normalize;
  std::string objective = "median";

  void attach(CLI::App* cmd, bool need_groups = true) {
    cmd->add_option("--points", points_path, "points CSV (id,x1,...,xD); U = C = F");
    cmd->add_option("--dist", dist_path, "explicit distance matrix file");
    if (need_groups)
      cmd->add_option("--groups", groups_path, "groups+requirements JSON")->required();
    cmd->add_option("--normalize", normalize, "column normalization: unit-norm");
    cmd->add_option("--objective", objective, "median|means")->check(CLI::IsMember({"median", "means"}));
  }

  Objective objective_kind() const {
    return objective == "means" ? Objective::kMeans : Objective::kMedian;
  }

  MetricInstance load_instance() const {
    if (!points_path.empty()) {
      auto coords = read_points_csv(points_path);
      if (normalize == "unit-norm") normalize_columns_unit_norm(coords);
      return MetricInstance::from_points(std::move(coords), objective_kind());
    }
    if (!dist_path.empty())
      return MetricInstance::from_matrix(read_distance_matrix(dist_path), objective_kind());
    throw std::runtime_error("one of --points or --dist is required");
  }
};

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::stoi(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

json picks_to_json(const ConstraintPattern& pattern, const std::vector<FacilityClass>& classes,
                   int t) {
  std::vector<std::string> picks;
  for (std::size_t e = 0; e < pattern.counts.size(); ++e)
    for (int c = 0; c < pattern.counts[e]; ++c)
      picks.push_back(signature_string(classes[e].signature, t));
  return picks;
}

json solution_record(const Solution& sol, double zeta_star, double runtime_ms,
                     std::uint64_t seed) {
  json rec;
  rec["alg"] = sol.algorithm;
  rec["cost"] = sol.cost;
  rec["k_star"] = static_cast<int>(sol.facilities.size());
  rec["zeta_star"] = zeta_star;
  rec["coverage"] = sol.coverage;
  rec["facilities"] = sol.facilities;
  rec["runtime_ms"] = runtime_ms;
  rec["seed"] = seed;
  return rec;
}

int run_gen(const std::string& out_points, const std::string& out_groups, int n, int dim,
            int blobs, int t, int k, const std::string& req_list, double sigma,
            std::uint64_t seed) {
  std::vector<int> r;
  if (!req_list.empty()) r = parse_int_list(req_list);
  GeneratorConfig gc;
  gc.sigma = sigma;
  const SyntheticInstance inst = generate_synthetic(n, dim, blobs, t, k, seed, r, gc);
  write_points_csv(out_points, inst.coords);
  write_groups_json(out_groups, inst.groups, inst.req);
  return 0;
}

int run_feasible(const InstanceArgs& iargs, const std::string& engine, std::uint64_t seed) {
  const MetricInstance instance = iargs.load_instance();
  const GroupsFile gf = read_groups_json(iargs.groups_path, instance.num_facilities());
  const auto start = std::chrono::steady_clock::now();
  const std::vector<FacilityClass> classes = partition_classes(instance, gf.groups);

  std::optional<ConstraintPattern> pattern;
  std::string engine_used = engine;
  if (engine == "es") {
    pattern = first_feasible_pattern(classes, gf.req);
  } else if (engine == "dp") {
    const DpResult dp = dp_feasible(classes, gf.req);
    if (dp.feasible) pattern = dp.picks;
  } else if (engine == "lp") {
    const FractionalSolution frac = lp_solve_fractional(classes, gf.req);
    if (frac.feasible) pattern = lp_round(classes, frac.x, gf.req, seed);
    if (!pattern) {
      // Rounding exhaustion is not infeasibility; the DP decides exactly.
      const DpResult dp = dp_feasible(classes, gf.req);
      if (dp.feasible) pattern = dp.picks;
      engine_used = "lp->dp";
    }
  } else {
    throw std::runtime_error("unknown engine: " + engine);
  }

  json rec;
  rec["feasible"] = pattern.has_value();
  rec["picks"] = pattern ? picks_to_json(*pattern, classes, gf.groups.t) : json(nullptr);
  rec["state_count"] = dp_state_count(gf.req);
  rec["runtime_ms"] = elapsed_ms(start);
  rec["engine"] = engine_used;
  rec["seed"] = seed;
  std::cout << rec.dump() << "\n";
  return pattern ? 0 : 2;
}

int run_solve(const InstanceArgs& iargs, const std::string& alg, const std::string& engine,
              const std::string& mode, const std::string& pattern_source, double epsilon,
              int restarts, double ls_eps, int p, std::uint64_t seed) {
  const MetricInstance instance = iargs.load_instance();
  const GroupsFile gf = read_groups_json(iargs.groups_path, instance.num_facilities());
  const bool means = instance.objective() == Objective::kMeans;
  const auto start = std::chrono::steady_clock::now();

  auto baseline_cost = [&](const Solution& sol) {
    // zeta* compares against the unconstrained baseline at the same seed:
    // LS0 for median, k-means++ for means.
    if (sol.algorithm.rfind("ls0", 0) == 0 || sol.algorithm.rfind("kmpp", 0) == 0) return sol.cost;
    Ls0Config lc;
    lc.eps_ls = ls_eps;
    lc.p = p;
    lc.restarts = restarts;
    const Solution base = means ? kmeanspp_seed(instance, gf.req.k, seed)
                                : local_search_ls0(instance, gf.req.k, seed, lc);
    return base.cost;
  };

  Solution sol;
  double zeta = 1.0;
  if (alg == "ls0") {
    Ls0Config lc;
    lc.eps_ls = ls_eps;
    lc.p = p;
    lc.restarts = restarts;
    Solution raw = local_search_ls0(instance, gf.req.k, seed, lc);
    sol = make_solution(instance, gf.groups, gf.req, raw.facilities, raw.algorithm, gf.req.k);
    zeta = 1.0;
  } else if (alg == "kmpp") {
    KmppConfig kc;
    kc.restarts = restarts;
    Solution raw = kmeanspp_seed(instance, gf.req.k, seed, kc);
    sol = make_solution(instance, gf.groups, gf.req, raw.facilities, raw.algorithm, gf.req.k);
    zeta = 1.0;
  } else if (alg == "ls1") {
    PatternSource src = PatternSource::kAll;
    if (pattern_source == "dp") src = PatternSource::kDp;
    if (pattern_source == "es") src = PatternSource::kEs;
    sol = local_search_ls1(instance, gf.groups, gf.req, seed, src, ls_eps);
    zeta = sol.cost / baseline_cost(sol);
  } else if (alg == "bicriteria") {
    FeasEngine fe = FeasEngine::kDp;
    if (engine == "es") fe = FeasEngine::kEs;
    if (engine == "lp") fe = FeasEngine::kLp;
    BicriteriaConfig bc;
    bc.ls0.eps_ls = ls_eps;
    bc.ls0.p = p;
    bc.ls0.restarts = restarts;
    bc.kmpp.restarts = restarts;
    const BicriteriaResult res = bicriteria_2k(
        instance, gf.groups, gf.req, means ? ClusteringAlg::kKmpp : ClusteringAlg::kLs0, fe,
        seed, bc);
    std::cout << solution_record(res.solution, res.zeta_star, elapsed_ms(start), seed).dump()
              << "\n";
    return 0;
  } else if (alg == "fpt") {
    const SubmodularMode sm = mode == "greedy" ? SubmodularMode::kGreedy : SubmodularMode::kExact;
    sol = solve_divkmed_fpt(instance, gf.groups, gf.req, epsilon, sm, seed);
    zeta = sol.cost / baseline_cost(sol);
  } else if (alg == "fpt3") {
    sol = solve_divkmed_3apx(instance, gf.groups, gf.req, epsilon, seed);
    zeta = sol.cost / baseline_cost(sol);
  } else {
    throw std::runtime_error("unknown algorithm: " + alg);
  }

  std::cout << solution_record(sol, zeta, elapsed_ms(start), seed).dump() << "\n";
  return 0;
}

int pool_size_from_env(std::size_t cells) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("DIVCLUST_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(cells, 1)));
}

int run_bench(const std::string& mode, const std::string& alg, const std::string& engine,
              const std::string& n_list, const std::string& k_list, const std::string& t_list,
              int dim, int blobs, const std::string& req_list, double epsilon,
              std::uint64_t seed, const std::string& objective) {
  const std::vector<int> ns = parse_int_list(n_list);
  const std::vector<int> ks = parse_int_list(k_list);
  const std::vector<int> ts = parse_int_list(t_list);
  struct Cell {
    int n, k, t;
  };
  std::vector<Cell> cells;
  for (int n : ns)
    for (int k : ks)
      for (int t : ts) cells.push_back({n, k, t});

  const Objective obj = objective == "means" ? Objective::kMeans : Objective::kMedian;
  std::vector<std::string> outputs(cells.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      const std::uint64_t cell_seed = derive_seed(seed, i);
      json rec;
      rec["n"] = cell.n;
      rec["k"] = cell.k;
      rec["t"] = cell.t;
      rec["seed"] = cell_seed;
      try {
        std::vector<int> r;
        if (!req_list.empty()) r = parse_int_list(req_list);
        const SyntheticInstance synth =
            generate_synthetic(cell.n, dim, blobs, cell.t, cell.k, cell_seed, r);
        const MetricInstance instance = MetricInstance::from_points(synth.coords, obj);
        const auto start = std::chrono::steady_clock::now();
        if (mode == "feasible") {
          const std::vector<FacilityClass> classes = partition_classes(instance, synth.groups);
          std::optional<ConstraintPattern> pattern;
          if (engine == "es") {
            pattern = first_feasible_pattern(classes, synth.req);
          } else if (engine == "lp") {
            const FractionalSolution frac = lp_solve_fractional(classes, synth.req);
            if (frac.feasible) pattern = lp_round(classes, frac.x, synth.req, cell_seed);
            if (!pattern) {
              const DpResult dp = dp_feasible(classes, synth.req);
              if (dp.feasible) pattern = dp.picks;
            }
          } else {
            const DpResult dp = dp_feasible(classes, synth.req);
            if (dp.feasible) pattern = dp.picks;
          }
          rec["alg"] = "feasible[" + engine + "]";
          rec["feasible"] = pattern.has_value();
          rec["state_count"] = dp_state_count(synth.req);
          rec["runtime_ms"] = elapsed_ms(start);
        } else {
          ClusteringAlg calg = obj == Objective::kMeans ? ClusteringAlg::kKmpp : ClusteringAlg::kLs0;
          FeasEngine fe = FeasEngine::kDp;
          if (engine == "es") fe = FeasEngine::kEs;
          if (engine == "lp") fe = FeasEngine::kLp;
          if (alg == "bicriteria" || alg.empty()) {
            const BicriteriaResult res =
                bicriteria_2k(instance, synth.groups, synth.req, calg, fe, cell_seed);
            rec.update(solution_record(res.solution, res.zeta_star, elapsed_ms(start), cell_seed));
          } else if (alg == "ls1") {
            const Solution sol = local_search_ls1(instance, synth.groups, synth.req, cell_seed,
                                                  PatternSource::kEs);
            const Solution base = obj == Objective::kMeans
                                      ? kmeanspp_seed(instance, synth.req.k, cell_seed)
                                      : local_search_ls0(instance, synth.req.k, cell_seed);
            rec.update(solution_record(sol, sol.cost / base.cost, elapsed_ms(start), cell_seed));
          } else if (alg == "fpt" || alg == "fpt3") {
            const Solution sol =
                alg == "fpt"
                    ? solve_divkmed_fpt(instance, synth.groups, synth.req, epsilon,
                                        SubmodularMode::kGreedy, cell_seed)
                    : solve_divkmed_3apx(instance, synth.groups, synth.req, epsilon, cell_seed);
            const Solution base = obj == Objective::kMeans
                                      ? kmeanspp_seed(instance, synth.req.k, cell_seed)
                                      : local_search_ls0(instance, synth.req.k, cell_seed);
            rec.update(solution_record(sol, sol.cost / base.cost, elapsed_ms(start), cell_seed));
          } else {
            throw std::runtime_error("unknown bench algorithm: " + alg);
          }
        }
      } catch (const InfeasibleError&) {
        rec["feasible"] = false;
        rec["error"] = "infeasible";
      } catch (const std::exception& e) {
        rec["error"] = e.what();
      }
      outputs[i] = rec.dump();
    }
  };

  const int pool = pool_size_from_env(cells.size());
  std::vector<std::thread> threads;
  for (int i = 0; i < pool; ++i) threads.emplace_back(worker);
  for (auto& th : threads) th.join();
  for (const auto& line : outputs) std::cout << line << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diversity-aware k-median/k-means toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  std::string out_points = "points.csv", out_groups = "groups.json", req_list;
  int n = 1000, dim = 2, blobs = 4, t = 4, k = 6;
  double sigma = 0.05;
  std::uint64_t seed = 1;
  gen->add_option("--out-points", out_points);
  gen->add_option("--out-groups", out_groups);
  gen->add_option("--n", n);
  gen->add_option("--dim", dim);
  gen->add_option("--blobs", blobs);
  gen->add_option("--t", t);
  gen->add_option("--k", k);
  gen->add_option("--req", req_list, "comma-separated requirements (default all ones)");
  gen->add_option("--sigma", sigma);
  gen->add_option("--seed", seed);

  // feasible
  auto* feas = app.add_subcommand("feasible", "decide requirement feasibility");
  InstanceArgs feas_args;
  feas_args.attach(feas);
  std::string feas_engine = "dp";
  std::uint64_t feas_seed = 1;
  feas->add_option("--engine", feas_engine)->check(CLI::IsMember({"es", "dp", "lp"}));
  feas->add_option("--seed", feas_seed);

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance");
  InstanceArgs solve_args;
  solve_args.attach(solve);
  std::string alg = "bicriteria", solve_engine = "dp", mode = "greedy", pattern_source = "all";
  double epsilon = 0.5, ls_eps = 0.01;
  int restarts = 1, swap_p = 1;
  std::uint64_t solve_seed = 1;
  solve->add_option("--alg", alg)
      ->check(CLI::IsMember({"fpt", "fpt3", "ls1", "bicriteria", "ls0", "kmpp"}));
  solve->add_option("--engine", solve_engine)->check(CLI::IsMember({"es", "dp", "lp"}));
  solve->add_option("--mode", mode)->check(CLI::IsMember({"exact", "greedy"}));
  solve->add_option("--pattern-source", pattern_source)->check(CLI::IsMember({"es", "dp", "all"}));
  solve->add_option("--epsilon", epsilon);
  solve->add_option("--ls-eps", ls_eps);
  solve->add_option("--restarts", restarts);
  solve->add_option("--p", swap_p);
  solve->add_option("--seed", solve_seed);

  // bench
  auto* bench = app.add_subcommand("bench", "sweep a |U|/k/t grid");
  std::string bench_mode = "feasible", bench_alg = "bicriteria", bench_engine = "dp";
  std::string n_list = "1000", k_list = "5", t_list = "6", bench_req, bench_objective = "median";
  int bench_dim = 5, bench_blobs = 4;
  double bench_epsilon = 0.5;
  std::uint64_t bench_seed = 1;
  bench->add_option("--mode", bench_mode)->check(CLI::IsMember({"feasible", "solve"}));
  bench->add_option("--alg", bench_alg);
  bench->add_option("--engine", bench_engine)->check(CLI::IsMember({"es", "dp", "lp"}));
  bench->add_option("--n-list", n_list);
  bench->add_option("--k-list", k_list);
  bench->add_option("--t-list", t_list);
  bench->add_option("--dim", bench_dim);
  bench->add_option("--blobs", bench_blobs);
  bench->add_option("--req", bench_req);
  bench->add_option("--epsilon", bench_epsilon);
  bench->add_option("--objective", bench_objective)->check(CLI::IsMember({"median", "means"}));
  bench->add_option("--seed", bench_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return run_gen(out_points, out_groups, n, dim, blobs, t, k, req_list, sigma, seed);
    if (feas->parsed()) return run_feasible(feas_args, feas_engine, feas_seed);
    if (solve->parsed())
      return run_solve(solve_args, alg, solve_engine, mode, pattern_source, epsilon, restarts,
                       ls_eps, swap_p, solve_seed);
    if (bench->parsed())
      return run_bench(bench_mode, bench_alg, bench_engine, n_list, k_list, t_list, bench_dim,
                       bench_blobs, bench_req, bench_epsilon, bench_seed, bench_objective);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
