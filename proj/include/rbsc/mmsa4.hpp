#ifndef RBSC_MMSA4_HPP
#define RBSC_MMSA4_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "rbsc/instances.hpp"
#include "rbsc/lp.hpp"
#include "rbsc/rbsc_approx.hpp"

namespace rbsc {

// Depth-4 instance as the (B, J, R, S) adjacency view: blue OR gates, AND
// gates, red OR gates, variables.
struct Mmsa4View {
  int nb = 0, nj = 0, nr = 0, ns = 0;
  std::vector<std::vector<int>> j_of_b;  // children of blue gates
  std::vector<std::vector<int>> r_of_j;  // children of AND gates
  std::vector<std::vector<int>> s_of_r;  // children of red gates
  std::vector<std::vector<int>> b_of_j, j_of_r, r_of_s;  // reverse

  static Mmsa4View from_instance(const MmsaInstance& inst);
  // Restriction to a subset of J (e.g. after preprocessing); ids preserved.
  Mmsa4View restrict_j(const std::vector<int>& kept) const;
};

struct Mmsa4Params {
  std::uint64_t seed = 1;
  double approx_constant = 16.0;  // C' in the reported bound
  double eps = 1.0 / 3.0;         // fallback threshold exponent
  int trial_cap = 100;            // rounding restarts per step
};

// Variable ids of the lifted LP. Lifted variables conditioned on h in S are
// fully materialized; conditioned on j in J only graph-reachable targets
// exist, and X_h^(j) is the same variable as X_j^(h) (symmetry by aliasing).
struct Mmsa4LpRefs {
  double delta = 1, opt = 1;
  int alive_count = 0;
  std::vector<int> w, x, y;            // per S, J, R
  std::vector<int> z;                  // per B; -1 when not alive
  std::vector<std::vector<int>> xe;    // [b][idx into j_of_b[b]]
  std::vector<std::vector<int>> Xij;   // [j][idx into r_of_j[j]]
  std::vector<std::vector<int>> Xjh;   // [h][j] == X_j^(h) == X_h^(j)
  std::vector<std::vector<int>> Xlh;   // [h][b]; -1 when not alive
  std::vector<std::vector<int>> Xih;   // [h][i]
  std::vector<std::vector<int>> Xhh;   // [h][h']
  std::vector<std::vector<std::vector<int>>> Xljh;  // [h][b][idx]
};

struct Mmsa4Lp {
  LpModel model;
  Mmsa4LpRefs refs;
};

// LP (base + every lifted constraint) for the alive blues at the given
// (Delta, OPT) guess.
Mmsa4Lp build_mmsa4_lp(const Mmsa4View& view,
                       const std::vector<char>& blue_alive, double delta,
                       double opt);

// Fractional-set-cover preprocessing: J vertices whose red neighborhood
// cannot be fractionally covered within opt_guess are discarded. Throws
// InfeasibleError if an alive blue loses all children.
std::vector<int> preprocess_mmsa4(const Mmsa4View& view,
                                  const std::vector<char>& blue_alive,
                                  double opt_guess);

struct J0Selection {
  std::vector<int> members;
  double x0 = 0;
  int bucket_exponent = 0;  // x0 = 2^{-s}
  double weight = 0;        // x(J0)
  double total_weight = 0;  // x(J)
};
J0Selection bucket_j0(const Mmsa4View& view, const Mmsa4LpRefs& refs,
                      const LpSolution& sol);

struct NeighborBuckets {
  double beta = 0, gamma = 0;
  std::vector<int> hat_gamma;  // bucketed S neighbors of (j, i)
  double size_floor = 0;       // 1 / (6 beta log|S| log(|S|^2 m))
};
// Double bucketing of the conditioned neighborhood of red i seen from j.
// Throws LiftingDegenerateError when the lifted mass sum_{h} w_h^(j) < 1.
NeighborBuckets bucket_neighbors(const Mmsa4View& view,
                                 const Mmsa4LpRefs& refs,
                                 const LpSolution& sol, int j, int i);

struct TripleKey {
  double beta = 0, gamma = 0;
  long long d = 0;
  bool operator<(const TripleKey& o) const {
    if (beta != o.beta) return beta > o.beta;
    if (gamma != o.gamma) return gamma > o.gamma;
    return d < o.d;
  }
  bool operator==(const TripleKey& o) const {
    return beta == o.beta && gamma == o.gamma && d == o.d;
  }
};

struct TripleEntry {
  TripleKey key;
  std::vector<int> reds;  // Gamma^R_{beta,gamma}(j)
  std::vector<int> svs;   // Gamma^S_{beta,gamma}(j), sorted
};

// Bucketed view of a solved LP: J0, the per-j (beta, gamma, D) triples, and
// the P1 / J1 qualification used by the case split.
struct Mmsa4Buckets {
  std::vector<int> j0;
  double x0 = 0;
  double x_j0 = 0, x_j = 0;
  std::vector<std::vector<TripleEntry>> triples;  // parallel to j0
  std::vector<TripleKey> p1;
  std::vector<char> in_j1;  // parallel to j0
  int j1_size = 0;
  int nonempty_triples = 0;
  double neighborhood_slack = 0;
  double a_param = 0;
};

// Applies the bucketed-neighborhood size filters; throws RoundingFailure
// when a solution violates one of them (callers abandon the guess pair).
Mmsa4Buckets build_mmsa4_buckets(const Mmsa4View& view,
                                 const Mmsa4LpRefs& refs,
                                 const LpSolution& sol,
                                 const J0Selection& j0sel, double opt,
                                 double a_param);

struct RoundOutcome {
  std::vector<int> j_alg, s_alg;
  int trials = 0;
};

class Rng;  // rng.hpp

// Case 1: sample J0 \ J1 at rate x0 and oversample the tagged neighborhood
// classes. Accepts once the selection covers a new blue and all its reds.
RoundOutcome mmsa4_case1_round(const Mmsa4View& view,
                               const Mmsa4Buckets& buckets,
                               const std::vector<char>& blue_alive,
                               int trial_cap, Rng& rng);

// Case 2: back-degree selection through the densest qualifying triple and
// conditioning vertex h0.
RoundOutcome mmsa4_case2_round(const Mmsa4View& view, const Mmsa4LpRefs& refs,
                               const LpSolution& sol,
                               const Mmsa4Buckets& buckets,
                               const std::vector<char>& blue_alive,
                               int trial_cap, Rng& rng,
                               struct StepDiagnostics* diag);

struct StepDiagnostics {
  int case_used = 0;  // 1 or 2; 0 for the direct-cover fallback
  double delta = 0, opt = 0;
  double x0 = 0, x_j0 = 0, x_j = 0;
  double j0_weight_floor = 0;
  // min over (j, i) of |hat Gamma_j(i)| / its size floor; >= 1 when the
  // floor holds everywhere
  double neighborhood_slack = 0;
  int nonempty_triples = 0;
  double triple_bound = 0;
  // case 2 selections
  TripleKey chosen_triple;
  long long d_tilde = 0;
  int h0 = -1;
  double slice_mass = 0, slice_mass_floor = 0;
  int j_alg = 0, s_alg = 0;
  long long blues_covered = 0;
  int trials = 0;
};

struct Mmsa4RunReport {
  long long delta = 0, opt = 0;
  double a_param = 0;  // A = m^{1/3}
  std::vector<StepDiagnostics> steps;
  bool used_fallback_pipeline = false;
  double declared_bound = 0;  // C' N^{1/3} log^3 N
};

MmsaSolution solve_mmsa4(const MmsaInstance& inst,
                         const Mmsa4Params& params = {},
                         Mmsa4RunReport* report = nullptr);

// Structural consequences of the relaxation, used by tests and the
// report. All evaluate on a solved LP.
bool mmsa4_claim_weight_bounds(const Mmsa4View& view, const Mmsa4LpRefs& refs,
                               const LpSolution& sol, double tol = 1e-6);
bool mmsa4_claim_blue_neighborhood(const Mmsa4View& view,
                                   const Mmsa4LpRefs& refs,
                                   const LpSolution& sol,
                                   const std::vector<int>& j_subset,
                                   double tol = 1e-6);
bool mmsa4_claim_frac_coverage(const Mmsa4View& view, const Mmsa4LpRefs& refs,
                               const LpSolution& sol,
                               const std::vector<int>& j_subset,
                               double tol = 1e-6);
// Max base-LP violation of the conditioned point X_*^(h) / w_h.
double mmsa4_conditioned_violation(const Mmsa4View& view,
                                   const Mmsa4LpRefs& refs,
                                   const LpSolution& sol, int h);

double mmsa4_cost_bound(double total_size, double opt, double c = 16.0);

}  // namespace rbsc

#endif  // RBSC_MMSA4_HPP
