#ifndef RBSC_RBSC_APPROX_HPP
#define RBSC_RBSC_APPROX_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "rbsc/instances.hpp"
#include "rbsc/lp.hpp"

namespace rbsc {

// log2 with the small-argument guard used everywhere in bounds.
inline double log2g(double x) { return std::log2(x < 2.0 ? 2.0 : x); }

// One (J_alpha, R_alpha, r_alpha) pair of the red-degree partition.
struct Bucket {
  int alpha_index = 0;
  long long r_alpha = 1;
  std::vector<int> sets;  // J_alpha
  std::vector<int> reds;  // R_alpha, sorted; nested across buckets
};

struct PartitionResult {
  std::vector<Bucket> buckets;
  // Sets whose surviving red degree reached zero before they were bucketed.
  // They behave like free sets within the partition: their reds are among
  // the excluded ones.
  std::vector<int> zeroed_sets;
  std::vector<int> excluded_reds;  // deletion order
  int input_set_count = 0;         // m used in the degree threshold
};

// Dyadic binning by red degree. `live_sets` must have nonempty red
// neighborhoods (free sets are handled by the solver's preprocessing pass).
PartitionResult partition_by_red_degree(const RbscInstance& inst,
                                        double n0,
                                        const std::vector<int>& live_sets);
PartitionResult partition_by_red_degree(const RbscInstance& inst, double n0);

struct ProgressLp {
  LpModel model;
  std::vector<int> x_sets;   // set id per x variable
  std::vector<int> y_reds;   // red id per y variable
  std::vector<int> z_blues;  // blue id per z variable
  std::vector<int> x_vars, y_vars, z_vars;
};

// LP over the sets containing i0 within the bucket: maximize covered blue
// weight subject to at most opt_guess red weight.
ProgressLp build_progress_lp(const RbscInstance& inst, const Bucket& bucket,
                             int i0, double opt_guess,
                             const std::vector<char>& blue_uncovered);

struct ProgressStep {
  std::vector<int> chosen;  // J*
  long long new_red = 0;    // |Gamma_{R_alpha}(J*)|
  long long new_blue = 0;   // uncovered blues hit
  double ratio = 0.0;
  double lp_value = 0.0;
  double coefficient = 0.0;  // potential coefficient c
  double potential = 0.0;    // new_red - c * new_blue
  int alpha = -1;
  int i0 = -1;
  bool randomized = false;  // partial-variant final round
};

// Derandomized rounding of the progress LP: walks the sets in increasing id
// order, minimizing the exact conditional expectation of
// |Gamma_{R_alpha}(J*)| - c |Gamma_B(J*)|. Throws RoundingFailure when no
// nonpositive-potential, blue-covering selection is realizable (the caller
// raises the OPT guess).
ProgressStep round_conditional_expectation(
    const RbscInstance& inst, const Bucket& bucket, int i0,
    const ProgressLp& lp, const LpSolution& sol, double opt_guess,
    const std::vector<char>& blue_uncovered, int uncovered_count,
    int m_total, int n_total);

struct RbscParams {
  std::uint64_t seed = 1;
  double approx_constant = 8.0;  // C in the acceptance bound
  int partial_trial_cap = 200;
};

struct RbscRunReport {
  long long accepted_guess = 0;
  double n0 = 0.0;
  std::vector<int> free_sets;
  std::vector<int> zeroed_sets;  // partition output
  std::vector<int> zeroed_used;  // actually taken, in pick order
  std::vector<ProgressStep> steps;
  int rescue_steps = 0;  // greedy fallback steps at the top guess (rare)
  double bound_full = 0.0;       // C m^{1/3} log^{4/3} n log k * guess
  double bound_per_round = 0.0;  // same without the iteration log k factor
};

RbscSolution solve_rbsc(const RbscInstance& inst, const RbscParams& params = {},
                        RbscRunReport* report = nullptr);

// Cover at least k_hat blues. The last iteration repeats the randomized
// rounding until the blue coverage is at least half its expectation and the
// red count stays inside the concentration band.
RbscSolution solve_partial_rbsc(const RbscInstance& inst, int k_hat,
                                const RbscParams& params = {},
                                RbscRunReport* report = nullptr);

// C * m^{1/3} * log2(n)^{4/3} * log2(k) * opt
double rbsc_cost_bound(int m, int n, int k, double opt, double c = 8.0);

// Whether a full solve pass completes at this fixed OPT guess
// (supports the guess-monotonicity property tests).
bool rbsc_guess_completes(const RbscInstance& inst, long long guess,
                          const RbscParams& params = {});

}  // namespace rbsc

#endif  // RBSC_RBSC_APPROX_HPP
