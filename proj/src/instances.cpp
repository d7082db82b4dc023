#include "rbsc/instances.hpp"

#include <algorithm>

#include "rbsc/errors.hpp"

namespace rbsc {

namespace {

void check_adjacency(const std::vector<int>& adj, int universe,
                     const std::string& what) {
  int prev = -1;
  for (int id : adj) {
    if (id < 0 || id >= universe)
      throw StructuralError(what + ": id " + std::to_string(id) +
                            " out of range [0, " + std::to_string(universe) +
                            ")");
    if (id <= prev)
      throw StructuralError(what + ": adjacency not sorted/duplicate-free");
    prev = id;
  }
}

}  // namespace

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void validate(const RbscInstance& inst) {
  if (inst.blue_count < 0) throw StructuralError("rbsc: negative blue_count");
  if (inst.red_count < 0) throw StructuralError("rbsc: negative red_count");
  if (inst.blue_adj.size() != inst.red_adj.size())
    throw StructuralError("rbsc: blue_adj/red_adj set counts differ");
  if (inst.set_count() < 1) throw StructuralError("rbsc: no sets");
  for (int j = 0; j < inst.set_count(); ++j) {
    check_adjacency(inst.blue_adj[j], inst.blue_count,
                    "rbsc set " + std::to_string(j) + " blue");
    check_adjacency(inst.red_adj[j], inst.red_count,
                    "rbsc set " + std::to_string(j) + " red");
  }
}

void validate(const MmsaInstance& inst) {
  if (inst.depth < 2) throw StructuralError("mmsa: depth must be >= 2");
  if (static_cast<int>(inst.layers.size()) != inst.depth)
    throw StructuralError("mmsa: layers size must equal depth");
  if (static_cast<int>(inst.edges.size()) != inst.depth - 1)
    throw StructuralError("mmsa: edges must have depth-1 layer pairs");
  for (int sz : inst.layers)
    if (sz < 0) throw StructuralError("mmsa: negative layer size");
  if (inst.layers[0] < 1)
    throw StructuralError("mmsa: root AND gate has zero children");
  for (int p = 0; p + 1 < inst.depth; ++p) {
    if (static_cast<int>(inst.edges[p].size()) != inst.layers[p])
      throw StructuralError("mmsa: edge block " + std::to_string(p) +
                            " size mismatch with layer");
    bool is_or = !inst.layer_is_and(p);
    for (int v = 0; v < inst.layers[p]; ++v) {
      const auto& children = inst.edges[p][v];
      // A childless OR gate is unsatisfiable; a childless AND gate is
      // vacuously true and legal (it is how red-free sets appear at depth 3).
      if (is_or && children.empty())
        throw StructuralError("mmsa: OR gate " + std::to_string(v) +
                              " in layer " + std::to_string(p) +
                              " has zero children");
      check_adjacency(children, inst.layers[p + 1],
                      "mmsa layer " + std::to_string(p) + " vertex " +
                          std::to_string(v));
    }
  }
}

void validate(const MinKUnionInstance& inst) {
  if (inst.ground_size < 0) throw StructuralError("mku: negative ground size");
  if (inst.set_count() < 1) throw StructuralError("mku: no sets");
  if (inst.target < 1) throw StructuralError("mku: k must be >= 1");
  if (inst.target > inst.set_count())
    throw StructuralError("mku: k exceeds number of sets");
  for (size_t i = 0; i < inst.sets.size(); ++i)
    check_adjacency(inst.sets[i], inst.ground_size,
                    "mku set " + std::to_string(i));
}

std::vector<std::vector<int>> blue_to_sets(const RbscInstance& inst) {
  std::vector<std::vector<int>> rev(inst.blue_count);
  for (int j = 0; j < inst.set_count(); ++j)
    for (int b : inst.blue_adj[j]) rev[b].push_back(j);
  return rev;
}

std::vector<std::vector<int>> red_to_sets(const RbscInstance& inst) {
  std::vector<std::vector<int>> rev(inst.red_count);
  for (int j = 0; j < inst.set_count(); ++j)
    for (int r : inst.red_adj[j]) rev[r].push_back(j);
  return rev;
}

RbscSolution make_rbsc_solution(const RbscInstance& inst,
                                std::vector<int> chosen_sets) {
  RbscSolution sol;
  std::vector<char> blue(inst.blue_count, 0), red(inst.red_count, 0);
  for (int j : chosen_sets) {
    for (int b : inst.blue_adj[j]) blue[b] = 1;
    for (int r : inst.red_adj[j]) red[r] = 1;
  }
  sol.chosen_sets = std::move(chosen_sets);
  for (int b = 0; b < inst.blue_count; ++b)
    if (blue[b]) sol.covered_blue.push_back(b);
  for (int r = 0; r < inst.red_count; ++r)
    if (red[r]) sol.covered_red.push_back(r);
  sol.cost = static_cast<long long>(sol.covered_red.size());
  return sol;
}

bool rbsc_feasible(const RbscInstance& inst, const RbscSolution& sol) {
  std::vector<char> blue(inst.blue_count, 0);
  for (int j : sol.chosen_sets)
    for (int b : inst.blue_adj[j]) blue[b] = 1;
  for (char c : blue)
    if (!c) return false;
  return true;
}

bool evaluate_circuit(const MmsaInstance& inst,
                      const std::vector<int>& assignment) {
  int t = inst.depth;
  std::vector<char> value(inst.layers[t - 1], 0);
  for (int v : assignment)
    if (v >= 0 && v < inst.layers[t - 1]) value[v] = 1;
  for (int p = t - 2; p >= 0; --p) {
    std::vector<char> up(inst.layers[p], 0);
    bool is_and = inst.layer_is_and(p);
    for (int v = 0; v < inst.layers[p]; ++v) {
      bool acc = is_and;
      for (int c : inst.edges[p][v]) {
        if (is_and) {
          if (!value[c]) { acc = false; break; }
        } else {
          if (value[c]) { acc = true; break; }
        }
      }
      up[v] = acc ? 1 : 0;
    }
    value.swap(up);
  }
  for (char c : value)
    if (!c) return false;  // implicit root AND over layer 0
  return true;
}

MmsaSolution make_mmsa_solution(const MmsaInstance& inst,
                                std::vector<int> true_variables) {
  MmsaSolution sol;
  sol.true_variables = sorted_unique(std::move(true_variables));
  (void)inst;
  sol.cost = static_cast<long long>(sol.true_variables.size());
  return sol;
}

MmsaInstance rbsc_to_mmsa3(const RbscInstance& inst) {
  MmsaInstance c;
  c.depth = 3;
  c.layers = {inst.blue_count, inst.set_count(), inst.red_count};
  c.edges.resize(2);
  c.edges[0] = blue_to_sets(inst);  // blue OR gate -> set AND gates
  c.edges[1] = inst.red_adj;        // set AND gate -> red variables
  return c;
}

RbscInstance rbsc_from_mmsa3(const MmsaInstance& inst) {
  if (inst.depth != 3) throw StructuralError("rbsc_from_mmsa3: depth != 3");
  RbscInstance r;
  r.blue_count = inst.layers[0];
  r.red_count = inst.layers[2];
  int m = inst.layers[1];
  r.blue_adj.assign(m, {});
  r.red_adj.assign(m, {});
  for (int b = 0; b < inst.layers[0]; ++b)
    for (int j : inst.edges[0][b]) r.blue_adj[j].push_back(b);
  for (auto& adj : r.blue_adj) adj = sorted_unique(std::move(adj));
  for (int j = 0; j < m; ++j) r.red_adj[j] = inst.edges[1][j];
  return r;
}

}  // namespace rbsc
