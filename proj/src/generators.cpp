#include "rbsc/generators.hpp"

#include <algorithm>

#include "rbsc/errors.hpp"
#include "rbsc/rng.hpp"

namespace rbsc {

RbscInstance gen_random_rbsc(int m, int n, int k, int set_size_blue,
                             int set_size_red, std::uint64_t seed) {
  if (m < 1 || n < 0 || k < 0)
    throw ParameterError("gen_random_rbsc: sizes must be positive");
  if (set_size_blue > k || set_size_red > n)
    throw ParameterError("gen_random_rbsc: set sizes exceed element counts");
  Rng rng(seed);
  RbscInstance inst;
  inst.blue_count = k;
  inst.red_count = n;
  inst.blue_adj.resize(m);
  inst.red_adj.resize(m);
  for (int j = 0; j < m; ++j) {
    inst.blue_adj[j] = rng.sample_without_replacement(k, set_size_blue);
    inst.red_adj[j] = rng.sample_without_replacement(n, set_size_red);
  }
  // Feasibility repair: place each uncovered blue into a random set.
  std::vector<char> covered(k, 0);
  for (int j = 0; j < m; ++j)
    for (int b : inst.blue_adj[j]) covered[b] = 1;
  for (int b = 0; b < k; ++b) {
    if (covered[b]) continue;
    int j = static_cast<int>(rng.below(m));
    inst.blue_adj[j].push_back(b);
    inst.blue_adj[j] = sorted_unique(std::move(inst.blue_adj[j]));
  }
  return inst;
}

std::pair<RbscInstance, std::vector<int>> gen_planted_rbsc(
    int m, int n, int k, int opt_target, std::uint64_t seed) {
  if (opt_target > n)
    throw ParameterError("gen_planted_rbsc: opt_target exceeds red count");
  if (m < 1 || k < 1) throw ParameterError("gen_planted_rbsc: need m,k >= 1");
  Rng rng(seed);
  RbscInstance inst;
  inst.blue_count = k;
  inst.red_count = n;
  inst.blue_adj.resize(m);
  inst.red_adj.resize(m);

  int planted_count = std::max(1, std::min(m, (k + 2) / 3));
  std::vector<int> planted(planted_count);
  for (int p = 0; p < planted_count; ++p) planted[p] = p;

  // Blues partitioned round-robin among planted sets; the planted red pool
  // has exactly opt_target elements, spread so its union is the whole pool.
  std::vector<int> pool = rng.sample_without_replacement(n, opt_target);
  for (int b = 0; b < k; ++b)
    inst.blue_adj[planted[b % planted_count]].push_back(b);
  for (size_t idx = 0; idx < pool.size(); ++idx)
    inst.red_adj[planted[idx % planted_count]].push_back(pool[idx]);
  for (int p = 0; p < planted_count; ++p) {
    // a little extra pool overlap
    if (!pool.empty()) {
      int extra = pool[rng.below(static_cast<std::uint32_t>(pool.size()))];
      inst.red_adj[p].push_back(extra);
    }
    inst.blue_adj[p] = sorted_unique(std::move(inst.blue_adj[p]));
    inst.red_adj[p] = sorted_unique(std::move(inst.red_adj[p]));
  }

  // Decoys: random blues, strictly larger red footprints drawn anywhere.
  int decoy_red = std::min(n, std::max(opt_target + 1, 2 * opt_target / std::max(1, planted_count) + 2));
  for (int j = planted_count; j < m; ++j) {
    int nb = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(
                 std::max(1, k / 2))));
    inst.blue_adj[j] = rng.sample_without_replacement(k, std::min(nb, k));
    inst.red_adj[j] = rng.sample_without_replacement(n, decoy_red);
  }
  return {std::move(inst), std::move(planted)};
}

MinKUnionInstance gen_random_mku(int m, int n, int k, int set_size,
                                 std::uint64_t seed) {
  if (m < 1 || n < 1 || k < 1 || k > m)
    throw ParameterError("gen_random_mku: need 1 <= k <= m, n >= 1");
  if (set_size > n) throw ParameterError("gen_random_mku: set size > n");
  Rng rng(seed);
  MinKUnionInstance inst;
  inst.ground_size = n;
  inst.target = k;
  inst.sets.resize(m);
  for (int i = 0; i < m; ++i)
    inst.sets[i] = rng.sample_without_replacement(n, set_size);
  return inst;
}

MmsaInstance gen_random_mmsa(const std::vector<int>& layers, int max_arity,
                             std::uint64_t seed) {
  if (layers.size() < 2) throw ParameterError("gen_random_mmsa: depth < 2");
  for (int sz : layers)
    if (sz < 1) throw ParameterError("gen_random_mmsa: empty layer");
  Rng rng(seed);
  MmsaInstance inst;
  inst.depth = static_cast<int>(layers.size());
  inst.layers = layers;
  inst.edges.resize(inst.depth - 1);
  for (int p = 0; p + 1 < inst.depth; ++p) {
    int below = layers[p + 1];
    int arity_cap = std::min(max_arity, below);
    inst.edges[p].resize(layers[p]);
    for (int v = 0; v < layers[p]; ++v) {
      int d = 1 + static_cast<int>(rng.below(arity_cap));
      inst.edges[p][v] = rng.sample_without_replacement(below, d);
    }
  }
  return inst;
}

MmsaInstance gen_gap_instance(const GapParams& params) {
  if (params.t < 3 || params.t % 2 == 0)
    throw ParameterError("gen_gap_instance: t must be odd and >= 3");
  if (params.n < 2 || params.eps <= 0.0 || params.eps >= 1.0)
    throw ParameterError("gen_gap_instance: need n >= 2 and eps in (0,1)");
  double p = params.edge_probability();
  Rng rng(params.seed);

  // Sample the (t-1)/2 Erdos-Renyi graphs edge by edge.
  int graphs = params.graph_count();
  std::vector<std::vector<std::pair<int, int>>> graph_edges(graphs);
  for (int g = 0; g < graphs; ++g)
    for (int u = 0; u < params.n; ++u)
      for (int v = u + 1; v < params.n; ++v)
        if (rng.unit() < p) graph_edges[g].push_back({u, v});

  MmsaInstance inst;
  inst.depth = params.t;
  inst.layers.resize(params.t);
  inst.layers[0] = params.u1_size();
  for (int g = 0; g < graphs; ++g) {
    inst.layers[2 * g + 1] = static_cast<int>(graph_edges[g].size());
    inst.layers[2 * g + 2] = params.n;
  }
  inst.edges.resize(params.t - 1);

  // OR layers U_{2i-1} connect to their round-robin partition class of the
  // edge layer below; a class is empty iff the graph has fewer edges than
  // the layer above has vertices.
  for (int g = 0; g < graphs; ++g) {
    int or_layer = 2 * g;  // 0-based index of U_{2g+1}
    int above = inst.layers[or_layer];
    int edges_below = inst.layers[or_layer + 1];
    if (edges_below < above)
      throw DegenerateGraphError(
          "gen_gap_instance: graph " + std::to_string(g + 1) + " has " +
          std::to_string(edges_below) + " edges for " + std::to_string(above) +
          " OR gates; retry with the next seed");
    inst.edges[or_layer].assign(above, {});
    for (int e = 0; e < edges_below; ++e)
      inst.edges[or_layer][e % above].push_back(e);

    int and_layer = 2 * g + 1;  // 0-based index of U_{2g+2}
    inst.edges[and_layer].resize(edges_below);
    for (int e = 0; e < edges_below; ++e)
      inst.edges[and_layer][e] = {graph_edges[g][e].first,
                                  graph_edges[g][e].second};
  }
  return inst;
}

}  // namespace rbsc
