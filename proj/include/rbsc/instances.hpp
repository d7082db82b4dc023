#ifndef RBSC_INSTANCES_HPP
#define RBSC_INSTANCES_HPP

#include <string>
#include <vector>

namespace rbsc {

// Red-Blue Set Cover instance as a tripartite graph: m sets, each adjacent to
// blue element ids (< blue_count) and red element ids (< red_count).
// Adjacency lists are sorted and duplicate-free after validation; instances
// are immutable once validated and safe to share across solver runs.
struct RbscInstance {
  int blue_count = 0;  // k
  int red_count = 0;   // n
  std::vector<std::vector<int>> blue_adj;  // per set j
  std::vector<std::vector<int>> red_adj;   // per set j

  int set_count() const { return static_cast<int>(blue_adj.size()); }
};

// Layered alternating AND/OR circuit of depth t. The root AND gate is
// implicit and conjoins all of layer 0. layers[p] is the size of the layer at
// distance p+1 from the root; the last layer holds the variables. Layers at
// odd distance from the root (even p) are OR gates, even distance AND gates.
// edges[p][v] lists the children (indices into layer p+1) of vertex v in
// layer p.
struct MmsaInstance {
  int depth = 0;  // t >= 2
  std::vector<int> layers;
  std::vector<std::vector<std::vector<int>>> edges;

  // Gates plus variables, counting the implicit root gate.
  long long total_size() const {
    long long n = 1;
    for (int sz : layers) n += sz;
    return n;
  }
  int variable_count() const { return layers.empty() ? 0 : layers.back(); }
  // layer_index is 0-based; distance from root is layer_index + 1.
  bool layer_is_and(int layer_index) const { return (layer_index + 1) % 2 == 0; }
};

struct MinKUnionInstance {
  int ground_size = 0;  // n
  int target = 0;       // k, number of sets to choose
  std::vector<std::vector<int>> sets;

  int set_count() const { return static_cast<int>(sets.size()); }
};

struct RbscSolution {
  std::vector<int> chosen_sets;   // in selection order
  std::vector<int> covered_blue;  // sorted
  std::vector<int> covered_red;   // sorted
  long long cost = 0;             // |covered_red|
};

struct MmsaSolution {
  std::vector<int> true_variables;  // sorted
  long long cost = 0;               // |true_variables|
};

void validate(const RbscInstance& inst);
void validate(const MmsaInstance& inst);
void validate(const MinKUnionInstance& inst);

// Reverse adjacency: for each blue (resp. red) element, the sorted list of
// sets containing it.
std::vector<std::vector<int>> blue_to_sets(const RbscInstance& inst);
std::vector<std::vector<int>> red_to_sets(const RbscInstance& inst);

RbscSolution make_rbsc_solution(const RbscInstance& inst,
                                std::vector<int> chosen_sets);
bool rbsc_feasible(const RbscInstance& inst, const RbscSolution& sol);

// Monotone evaluation; assignment lists true variable ids of the last layer.
// An AND gate with no children is vacuously true, an OR gate with no
// children is false (validation rejects the latter).
bool evaluate_circuit(const MmsaInstance& inst,
                      const std::vector<int>& assignment);

MmsaSolution make_mmsa_solution(const MmsaInstance& inst,
                                std::vector<int> true_variables);

// Depth-3 equivalence: blues become OR gates, sets AND gates, reds variables.
MmsaInstance rbsc_to_mmsa3(const RbscInstance& inst);
// Inverse direction for arbitrary valid depth-3 circuits.
RbscInstance rbsc_from_mmsa3(const MmsaInstance& inst);

std::vector<int> sorted_unique(std::vector<int> v);

}  // namespace rbsc

#endif  // RBSC_INSTANCES_HPP
