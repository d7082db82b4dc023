#ifndef RBSC_ORACLES_HPP
#define RBSC_ORACLES_HPP

#include <vector>

#include "rbsc/instances.hpp"

namespace rbsc {

struct RbscOpt {
  long long cost = 0;
  std::vector<int> chosen_sets;
};

struct MmsaOpt {
  long long cost = 0;
  std::vector<int> assignment;
};

// Exact minimum red coverage over feasible sub-families, by branch and bound
// over sets. Throws SizeLimitError above m_cap, InfeasibleError when some
// blue is uncoverable.
RbscOpt bruteforce_rbsc(const RbscInstance& inst, int m_cap = 24);

// Exact minimum over sub-families covering at least k_hat blues.
RbscOpt bruteforce_partial_rbsc(const RbscInstance& inst, int k_hat,
                                int m_cap = 24);

// Exact minimum union size over k-subsets; enumeration capped at
// combination_cap candidates.
long long bruteforce_mku(const MinKUnionInstance& inst,
                         long long combination_cap = 1000000);

// Exact minimum-weight satisfying assignment by subset enumeration in
// increasing cardinality.
MmsaOpt bruteforce_mmsa(const MmsaInstance& inst, int var_cap = 24);

}  // namespace rbsc

#endif  // RBSC_ORACLES_HPP
