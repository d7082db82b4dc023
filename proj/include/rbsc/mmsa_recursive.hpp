#ifndef RBSC_MMSA_RECURSIVE_HPP
#define RBSC_MMSA_RECURSIVE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "rbsc/instances.hpp"
#include "rbsc/lp.hpp"
#include "rbsc/mmsa4.hpp"

namespace rbsc {

struct MmsaParams {
  std::uint64_t seed = 1;
  double mmsa4_constant = 16.0;
  // Test hook: overrides the frame's outer target A_{2t+2} so the
  // separation oracle fires at desk scale. The inner bound stays at its
  // formula value, which keeps every emitted cut valid.
  std::optional<double> a_outer_override;
  int cut_cap_multiplier = 10;  // cut rounds per frame <= mult * N
  Mmsa4Params mmsa4;
};

// 1 - delta is the cost exponent: delta = (1/3) * 2^{3 - ceil(t/2)}.
double mmsa_delta_exponent(int t);

// Approximation-bound table used by the recursion: depth 4 seeds it, even
// depths step by A_{2t+2} = 2 (1 + ln N) sqrt(N * A_{2t}).
double mmsa_a_bound(int t, double total_size, const MmsaParams& params = {});

struct CutRecord {
  int frame_depth = 0;
  long long opt_guess = 0;  // cut validity vs the original optimum needs
                            // the guess to be at least the true optimum
  std::vector<int> sbar;    // vertex ids of the frame's AND layer
  double rhs = 0;
  double lhs_before = 0;    // LP mass of sbar when the cut was generated
};

struct FrameReport {
  int depth = 0;
  long long opt_guess = 0;
  double a_outer = 0, a_inner = 0;
  double accept_threshold = 0;
  int cut_count = 0;
  int v_plus_size = 0;
  int u_alg_size = 0;
  int cover1_size = 0;  // greedy cover of the V+ neighborhood
  int cover2_size = 0;  // greedy cover of the inner solution's neighborhood
  long long inner_total_size = 0;
};

struct MmsaRunReport {
  std::vector<double> a_values;  // indexed by depth, 0 when unused
  std::vector<FrameReport> frames;
  std::vector<CutRecord> cuts;
  Mmsa4RunReport base_report;  // from the depth-4 call, when reached
};

// Frame state exposed for the separation-oracle step.
struct RecursionFrame {
  int depth = 0;            // 2t+2
  double n_total = 0;       // N used in the bounds
  double a_outer = 0;       // A_{2t+2}
  double a_inner = 0;       // A_{2t}
  std::vector<int> sbar;    // V_{2t} \ V_{2t}^+
  double sbar_lp_value = 0; // current LP mass of sbar
};

// The progress cut emitted when the inner solve certifies a large
// sub-solution.
// Returns nothing when u_alg_size is within the acceptance threshold; throws
// NotViolatedError when the current LP point already satisfies the cut.
std::optional<LpConstraint> cut_oracle(const RecursionFrame& frame,
                                       int u_alg_size,
                                       const std::vector<int>& x_vars);

// Depth dispatcher: greedy cover at depth 2, the RBSC equivalence at depth
// 3, the lifted-LP machinery at depth 4, and the recursion for t >= 5 (odd
// depths embed into the next even depth by a pass-through OR layer).
MmsaSolution solve_mmsa(const MmsaInstance& inst, const MmsaParams& params = {},
                        MmsaRunReport* report = nullptr);

// The t >= 5 entry point used by the dispatcher; exposed for tests.
MmsaSolution solve_mmsa_t(const MmsaInstance& inst, const MmsaParams& params,
                          MmsaRunReport* report);

// Pass-through OR layer insertion turning an odd-depth instance into an
// equivalent instance of depth t+1 over the same variables.
MmsaInstance embed_odd_depth(const MmsaInstance& inst);

}  // namespace rbsc

#endif  // RBSC_MMSA_RECURSIVE_HPP
