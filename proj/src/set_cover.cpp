#include "rbsc/set_cover.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "rbsc/errors.hpp"
#include "rbsc/lp.hpp"

namespace rbsc {

double fractional_set_cover_value(const std::vector<int>& universe,
                                  const std::vector<std::vector<int>>& sets) {
  if (universe.empty()) return 0.0;
  std::unordered_map<int, std::vector<int>> covering;
  for (int e : universe) covering[e];
  for (size_t h = 0; h < sets.size(); ++h)
    for (int e : sets[h]) {
      auto it = covering.find(e);
      if (it != covering.end()) it->second.push_back(static_cast<int>(h));
    }
  for (const auto& [e, hs] : covering)
    if (hs.empty()) return std::numeric_limits<double>::infinity();

  LpModel model;
  std::vector<int> z(sets.size(), -1);
  std::vector<LinTerm> obj;
  for (size_t h = 0; h < sets.size(); ++h) {
    z[h] = model.add_variable("z_" + std::to_string(h), 0.0, 1.0);
    obj.push_back({z[h], 1.0});
  }
  model.set_objective(false, obj);
  for (const auto& [e, hs] : covering) {
    std::vector<LinTerm> terms;
    for (int h : hs) terms.push_back({z[h], 1.0});
    model.add_constraint(std::move(terms), Sense::Ge, 1.0,
                         "cover_" + std::to_string(e));
  }
  LpSolution sol = lp_solve(model);
  if (sol.status != LpStatus::Optimal)
    throw NumericalFailure("covering LP did not solve to optimality");
  return sol.objective_value;
}

std::vector<int> greedy_set_cover(const std::vector<int>& universe,
                                  const std::vector<std::vector<int>>& sets) {
  std::unordered_set<int> uncovered(universe.begin(), universe.end());
  std::vector<int> chosen;
  while (!uncovered.empty()) {
    int best = -1;
    size_t best_gain = 0;
    for (size_t h = 0; h < sets.size(); ++h) {
      size_t gain = 0;
      for (int e : sets[h])
        if (uncovered.count(e)) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = static_cast<int>(h);
      }
    }
    if (best < 0)
      throw UncoverableError("greedy_set_cover: element not in any set");
    for (int e : sets[best]) uncovered.erase(e);
    chosen.push_back(best);
  }
  return chosen;
}

}  // namespace rbsc
