#ifndef RBSC_GENERATORS_HPP
#define RBSC_GENERATORS_HPP

#include <cmath>
#include <cstdint>
#include <utility>

#include "rbsc/instances.hpp"

namespace rbsc {

// Uniform random instance; every blue is made coverable by resampling
// uncovered blues into a random set. Deterministic per seed.
RbscInstance gen_random_rbsc(int m, int n, int k, int set_size_blue,
                             int set_size_red, std::uint64_t seed);

// Hidden sub-family covering all blues with exactly opt_target reds; decoys
// touch more reds. The planted certificate is an upper bound on OPT.
std::pair<RbscInstance, std::vector<int>> gen_planted_rbsc(
    int m, int n, int k, int opt_target, std::uint64_t seed);

MinKUnionInstance gen_random_mku(int m, int n, int k, int set_size,
                                 std::uint64_t seed);

// Random layered circuit, valid by construction (every gate gets >= 1
// child).
MmsaInstance gen_random_mmsa(const std::vector<int>& layers, int max_arity,
                             std::uint64_t seed);

// Layered gluing of G(n,p) edge/vertex incidence graphs into a depth-t
// circuit (t odd). beta, p and |U_1| are derived from (n, eps).
struct GapParams {
  int n = 0;
  double eps = 0.5;
  int t = 5;
  std::uint64_t seed = 1;

  double beta() const { return eps / (2.0 - eps); }
  double edge_probability() const {
    return std::pow(static_cast<double>(n), -(2.0 - 2.0 * eps) / (2.0 - eps));
  }
  int u1_size() const {
    return static_cast<int>(std::llround(
        std::pow(static_cast<double>(n), (2.0 - 2.0 * eps) / (2.0 - eps))));
  }
  int graph_count() const { return (t - 1) / 2; }
};

MmsaInstance gen_gap_instance(const GapParams& params);

}  // namespace rbsc

#endif  // RBSC_GENERATORS_HPP
