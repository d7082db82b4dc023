#ifndef RBSC_REDUCTIONS_HPP
#define RBSC_REDUCTIONS_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rbsc/instances.hpp"
#include "rbsc/rbsc_approx.hpp"

namespace rbsc {

struct ReductionParams {
  int ell = 1;      // ceil(ln k) + 1 blue samples per set, with replacement
  int k_prime = 0;  // floor(k / ell)
  std::uint64_t seed = 0;
};

// The randomized Min k-Union -> RBSC reduction: reds are the ground set,
// blues are [k], and every set additionally samples ell blues uniformly with
// replacement (stored deduplicated). Deterministic per seed.
std::pair<RbscInstance, ReductionParams> reduce_mku_to_rbsc(
    const MinKUnionInstance& inst, std::uint64_t seed);

using RbscSolver =
    std::function<RbscSolution(const RbscInstance&, const RbscParams&)>;

struct MkuRoundLog {
  int k_remaining = 0;
  int ell = 0;
  int picked = 0;       // k' sets taken this round
  long long best_inner_cost = -1;
};

struct MkuRunReport {
  std::vector<MkuRoundLog> rounds;
  int amplification = 0;  // ceil(ln n) repeats per round
};

// Iterative Min k-Union solver: reduce, solve RBSC, keep the first k' sets,
// remove them, and repeat until k sets are chosen. Each round repeats the
// randomized reduction ceil(ln n) times and keeps the best candidate.
std::vector<int> solve_mku_via_rbsc(const MinKUnionInstance& inst,
                                    std::uint64_t seed,
                                    const RbscSolver& solver = {},
                                    MkuRunReport* report = nullptr);

std::vector<int> mku_union(const MinKUnionInstance& inst,
                           const std::vector<int>& chosen);

struct ReductionSuccessStats {
  double success_frequency = 0.0;   // optimal sets' blues cover all of [k]
  double per_blue_miss_rate = 0.0;  // empirical per-(trial,blue) miss rate
  double analytic_miss_bound = 0.0; // (1 - 1/k)^{k*ell}
  int trials = 0;
};

// Property 2 of the reduction, estimated against the exact optimum of a
// brute-forceable instance: how often do the optimal k sets' blue samples
// cover [k]? Expected at least 1 - 1/e.
ReductionSuccessStats validate_reduction_success(
    const MinKUnionInstance& inst, const std::vector<int>& optimal_sets,
    int trials, std::uint64_t seed);

}  // namespace rbsc

#endif  // RBSC_REDUCTIONS_HPP
