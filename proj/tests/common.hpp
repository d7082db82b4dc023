#ifndef RBSC_TESTS_COMMON_HPP
#define RBSC_TESTS_COMMON_HPP

#include <cmath>
#include <string>
#include <vector>

#include "rbsc/generators.hpp"
#include "rbsc/instances.hpp"
#include "rbsc/rbsc_approx.hpp"
#include "rbsc/rng.hpp"

namespace rbsc::testing {

// Canonical desk-scale instances used across suites; digests and optima are
// frozen in the tests after first generation.
inline RbscInstance rbsc_small_1() {
  return gen_random_rbsc(8, 10, 6, 2, 3, 42);
}
inline MinKUnionInstance mku_small_1() {
  return gen_random_mku(8, 12, 3, 4, 7);
}
inline MmsaInstance mmsa4_small_1() {
  return gen_random_mmsa({4, 5, 5, 8}, 3, 11);
}
inline MmsaInstance mmsa6_small_1() {
  return gen_random_mmsa({3, 4, 4, 5, 5, 8}, 3, 13);
}

// Independent checker for the four partition properties: it recomputes
// every degree from the instance rather than trusting the solver's
// bookkeeping. Returns an empty string when all bullets hold.
inline std::string check_partition(const RbscInstance& inst,
                                   const std::vector<int>& live_sets,
                                   double n0, const PartitionResult& part) {
  int n = inst.red_count;
  double logn = log2g(static_cast<double>(n));
  double m = static_cast<double>(live_sets.size());

  // Bullet 1: buckets plus zeroed sets partition the live sets.
  std::vector<int> seen(inst.set_count(), 0);
  for (const Bucket& b : part.buckets)
    for (int j : b.sets) ++seen[j];
  for (int j : part.zeroed_sets) ++seen[j];
  std::vector<char> live_mask(inst.set_count(), 0);
  for (int j : live_sets) live_mask[j] = 1;
  for (int j = 0; j < inst.set_count(); ++j) {
    if (live_mask[j] && seen[j] != 1)
      return "set " + std::to_string(j) + " appears " +
             std::to_string(seen[j]) + " times";
    if (!live_mask[j] && seen[j] != 0)
      return "non-live set " + std::to_string(j) + " bucketed";
  }

  // Bullet 2: nested red sets, at most n0 exclusions.
  if (static_cast<double>(part.excluded_reds.size()) > n0 + 1e-9)
    return "excluded " + std::to_string(part.excluded_reds.size()) +
           " reds with n0=" + std::to_string(n0);
  for (size_t a = 1; a < part.buckets.size(); ++a) {
    const auto& prev = part.buckets[a - 1].reds;
    for (int i : part.buckets[a].reds)
      if (!std::binary_search(prev.begin(), prev.end(), i))
        return "red sets not nested at bucket " + std::to_string(a);
  }
  if (!part.buckets.empty()) {
    int smallest = static_cast<int>(part.buckets.back().reds.size());
    if (smallest < n - static_cast<int>(std::floor(n0)))
      return "smallest red set too small";
  }

  // Bullets 3 and 4: exact degree windows.
  for (const Bucket& b : part.buckets) {
    std::vector<char> in_reds(inst.red_count, 0);
    for (int i : b.reds) in_reds[i] = 1;
    for (int j : b.sets) {
      long long deg = 0;
      for (int i : inst.red_adj[j]) deg += in_reds[i];
      if (deg < b.r_alpha || deg > 2 * b.r_alpha)
        return "set " + std::to_string(j) + " degree " + std::to_string(deg) +
               " outside [" + std::to_string(b.r_alpha) + ", " +
               std::to_string(2 * b.r_alpha) + "]";
    }
    std::vector<char> in_sets(inst.set_count(), 0);
    for (int j : b.sets) in_sets[j] = 1;
    double bound = 2.0 * m * static_cast<double>(b.r_alpha) * logn / n0;
    for (int i : b.reds) {
      long long deg = 0;
      for (int j = 0; j < inst.set_count(); ++j)
        if (in_sets[j] &&
            std::binary_search(inst.red_adj[j].begin(),
                               inst.red_adj[j].end(), i))
          ++deg;
      if (static_cast<double>(deg) > bound + 1e-9)
        return "red " + std::to_string(i) + " J-degree " +
               std::to_string(deg) + " above " + std::to_string(bound);
    }
  }

  // Bucket count.
  long long max_degree = 0;
  for (int j : live_sets)
    max_degree = std::max<long long>(max_degree, inst.red_adj[j].size());
  double cap = std::log2(std::max<double>(2.0, static_cast<double>(
                                                   max_degree))) +
               1.0 + 1e-9;
  if (static_cast<double>(part.buckets.size()) > cap)
    return "too many buckets";
  return "";
}

// Per-layer gate truth values under an assignment, including the layers the
// acceptance checks reference for cut validity.
inline std::vector<std::vector<char>> gate_values(
    const MmsaInstance& inst, const std::vector<int>& assignment) {
  int t = inst.depth;
  std::vector<std::vector<char>> value(t);
  value[t - 1].assign(inst.layers[t - 1], 0);
  for (int v : assignment) value[t - 1][v] = 1;
  for (int p = t - 2; p >= 0; --p) {
    value[p].assign(inst.layers[p], 0);
    bool is_and = inst.layer_is_and(p);
    for (int v = 0; v < inst.layers[p]; ++v) {
      bool acc = is_and;
      for (int c : inst.edges[p][v]) {
        if (is_and) {
          if (!value[p + 1][c]) { acc = false; break; }
        } else if (value[p + 1][c]) {
          acc = true;
          break;
        }
      }
      value[p][v] = acc ? 1 : 0;
    }
  }
  return value;
}

// Wide regime: many small sets over a large red universe with a tiny
// planted pool. This is where the degree partition keeps nonempty buckets
// and the progress LP drives the solver (small universes zero out instead).
inline std::pair<RbscInstance, std::vector<int>> wide_planted_rbsc(
    int m, int n, int k, std::uint64_t seed) {
  Rng rng(seed);
  RbscInstance inst;
  inst.blue_count = k;
  inst.red_count = n;
  inst.blue_adj.resize(m);
  inst.red_adj.resize(m);
  for (int b = 0; b < k; ++b) inst.blue_adj[b % 2].push_back(b);
  inst.red_adj[0] = {0, 1};
  inst.red_adj[1] = {0, 1};
  for (int j = 2; j < m; ++j) {
    int nb = 1 + static_cast<int>(rng.below(2));
    inst.blue_adj[j] = rng.sample_without_replacement(k, nb);
    std::vector<int> reds;
    for (int t = 0; t < 2; ++t)
      reds.push_back(2 + static_cast<int>(rng.below(n - 2)));
    inst.red_adj[j] = sorted_unique(std::move(reds));
  }
  for (auto& b : inst.blue_adj) b = sorted_unique(std::move(b));
  return {std::move(inst), {0, 1}};
}

inline std::vector<int> all_live_sets(const RbscInstance& inst) {
  std::vector<int> live;
  for (int j = 0; j < inst.set_count(); ++j)
    if (!inst.red_adj[j].empty()) live.push_back(j);
  return live;
}

}  // namespace rbsc::testing

#endif  // RBSC_TESTS_COMMON_HPP
