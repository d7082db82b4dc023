#include "rbsc/reductions.hpp"

#include <algorithm>
#include <cmath>

#include "rbsc/errors.hpp"
#include "rbsc/rng.hpp"

namespace rbsc {

namespace {

int ell_for(int k) {
  return static_cast<int>(std::ceil(std::log(static_cast<double>(k)))) + 1;
}

}  // namespace

std::pair<RbscInstance, ReductionParams> reduce_mku_to_rbsc(
    const MinKUnionInstance& inst, std::uint64_t seed) {
  if (inst.target < 1) throw ParameterError("reduction: k must be >= 1");
  ReductionParams params;
  params.ell = ell_for(inst.target);
  params.k_prime = inst.target / params.ell;
  params.seed = seed;

  Rng rng(seed);
  RbscInstance rb;
  rb.blue_count = inst.target;
  rb.red_count = inst.ground_size;
  rb.red_adj = inst.sets;
  rb.blue_adj.resize(inst.set_count());
  for (int i = 0; i < inst.set_count(); ++i) {
    std::vector<int> blues;
    for (int draw = 0; draw < params.ell; ++draw)
      blues.push_back(static_cast<int>(
          rng.below(static_cast<std::uint32_t>(inst.target))));
    rb.blue_adj[i] = sorted_unique(std::move(blues));
  }
  return {std::move(rb), params};
}

std::vector<int> mku_union(const MinKUnionInstance& inst,
                           const std::vector<int>& chosen) {
  std::vector<char> in(inst.ground_size, 0);
  for (int i : chosen)
    for (int e : inst.sets[i]) in[e] = 1;
  std::vector<int> u;
  for (int e = 0; e < inst.ground_size; ++e)
    if (in[e]) u.push_back(e);
  return u;
}

std::vector<int> solve_mku_via_rbsc(const MinKUnionInstance& inst,
                                    std::uint64_t seed,
                                    const RbscSolver& solver,
                                    MkuRunReport* report) {
  validate(inst);
  RbscSolver solve =
      solver ? solver
             : [](const RbscInstance& i, const RbscParams& p) {
                 return solve_rbsc(i, p);
               };
  int amplification = std::max(
      1, static_cast<int>(
             std::ceil(std::log(static_cast<double>(
                 std::max(2, inst.ground_size))))));
  if (report) {
    *report = MkuRunReport{};
    report->amplification = amplification;
  }

  Rng rng(seed);
  std::vector<int> remaining_ids(inst.set_count());
  for (int i = 0; i < inst.set_count(); ++i) remaining_ids[i] = i;
  std::vector<int> chosen;
  int k_remaining = inst.target;

  while (k_remaining > 0) {
    MinKUnionInstance sub;
    sub.ground_size = inst.ground_size;
    sub.target = k_remaining;
    for (int id : remaining_ids) sub.sets.push_back(inst.sets[id]);
    int ell = ell_for(k_remaining);
    int k_prime = std::max(1, k_remaining / ell);

    // Repeat the randomized reduction, keep the lowest-cost candidate.
    std::vector<int> best_pick;
    long long best_cost = -1;
    for (int rep = 0; rep < amplification; ++rep) {
      auto [rb, params] = reduce_mku_to_rbsc(sub, rng.next());
      RbscParams sp;
      sp.seed = rng.next();
      RbscSolution sol;
      try {
        sol = solve(rb, sp);
      } catch (const Error&) {
        continue;  // a failed inner solve just wastes one repeat
      }
      std::vector<int> pick(sol.chosen_sets.begin(),
                            sol.chosen_sets.begin() +
                                std::min<size_t>(sol.chosen_sets.size(),
                                                 static_cast<size_t>(k_prime)));
      MinKUnionInstance probe = sub;
      long long cost = static_cast<long long>(mku_union(probe, pick).size());
      if (best_cost < 0 || cost < best_cost) {
        best_cost = cost;
        best_pick = std::move(pick);
      }
    }
    if (best_pick.empty()) {
      // Every repeat failed; fall back to the lexicographically first sets.
      for (int i = 0; i < k_prime; ++i) best_pick.push_back(i);
      best_cost = static_cast<long long>(
          mku_union(sub, best_pick).size());
    }

    if (report) {
      MkuRoundLog log;
      log.k_remaining = k_remaining;
      log.ell = ell;
      log.picked = static_cast<int>(best_pick.size());
      log.best_inner_cost = best_cost;
      report->rounds.push_back(log);
    }

    std::sort(best_pick.begin(), best_pick.end(), std::greater<int>());
    for (int local : best_pick) {
      chosen.push_back(remaining_ids[local]);
      remaining_ids.erase(remaining_ids.begin() + local);
      --k_remaining;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

ReductionSuccessStats validate_reduction_success(
    const MinKUnionInstance& inst, const std::vector<int>& optimal_sets,
    int trials, std::uint64_t seed) {
  ReductionSuccessStats stats;
  stats.trials = trials;
  int k = inst.target;
  int ell = ell_for(k);
  stats.analytic_miss_bound =
      std::pow(1.0 - 1.0 / static_cast<double>(k),
               static_cast<double>(k) * ell);

  Rng rng(seed);
  long long successes = 0, blue_misses = 0;
  for (int t = 0; t < trials; ++t) {
    auto [rb, params] = reduce_mku_to_rbsc(inst, rng.next());
    std::vector<char> covered(k, 0);
    for (int i : optimal_sets)
      for (int b : rb.blue_adj[i]) covered[b] = 1;
    bool all = true;
    for (int b = 0; b < k; ++b) {
      if (!covered[b]) {
        all = false;
        ++blue_misses;
      }
    }
    if (all) ++successes;
  }
  stats.success_frequency =
      static_cast<double>(successes) / std::max(1, trials);
  stats.per_blue_miss_rate =
      static_cast<double>(blue_misses) /
      (static_cast<double>(std::max(1, trials)) * k);
  return stats;
}

}  // namespace rbsc
