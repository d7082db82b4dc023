#include "rbsc/oracles.hpp"

#include <algorithm>
#include <cstdint>

#include "rbsc/errors.hpp"

namespace rbsc {

namespace {

// Bitmask words covering up to `bits` positions.
struct MaskSet {
  std::vector<std::uint64_t> w;
  explicit MaskSet(int bits) : w((bits + 63) / 64, 0) {}
  void set(int i) { w[i >> 6] |= 1ULL << (i & 63); }
  void unite(const MaskSet& o) {
    for (size_t i = 0; i < w.size(); ++i) w[i] |= o.w[i];
  }
  bool covers(const MaskSet& o) const {
    for (size_t i = 0; i < w.size(); ++i)
      if ((o.w[i] & ~w[i]) != 0) return false;
    return true;
  }
  int count() const {
    int c = 0;
    for (auto x : w) c += __builtin_popcountll(x);
    return c;
  }
};

struct RbscSearch {
  const RbscInstance& inst;
  int m;
  std::vector<MaskSet> blue_mask, red_mask;
  std::vector<MaskSet> suffix_blue;  // union of blue_mask[j..m-1]
  int target_blues;  // cover at least this many blues
  long long best_cost;
  std::vector<int> best_sets;
  std::vector<int> current;

  RbscSearch(const RbscInstance& i, int k_hat)
      : inst(i),
        m(i.set_count()),
        target_blues(k_hat),
        best_cost(i.red_count + 1) {
    for (int j = 0; j < m; ++j) {
      MaskSet b(inst.blue_count), r(inst.red_count);
      for (int x : inst.blue_adj[j]) b.set(x);
      for (int x : inst.red_adj[j]) r.set(x);
      blue_mask.push_back(std::move(b));
      red_mask.push_back(std::move(r));
    }
    suffix_blue.assign(m + 1, MaskSet(inst.blue_count));
    for (int j = m - 1; j >= 0; --j) {
      suffix_blue[j] = suffix_blue[j + 1];
      suffix_blue[j].unite(blue_mask[j]);
    }
  }

  void recurse(int j, const MaskSet& blues, const MaskSet& reds) {
    long long cost = reds.count();
    if (cost >= best_cost) return;
    if (blues.count() >= target_blues) {
      best_cost = cost;
      best_sets = current;
      return;
    }
    if (j == m) return;
    MaskSet reach = blues;
    reach.unite(suffix_blue[j]);
    if (reach.count() < target_blues) return;

    current.push_back(j);
    MaskSet b2 = blues, r2 = reds;
    b2.unite(blue_mask[j]);
    r2.unite(red_mask[j]);
    recurse(j + 1, b2, r2);
    current.pop_back();
    recurse(j + 1, blues, reds);
  }
};

}  // namespace

RbscOpt bruteforce_partial_rbsc(const RbscInstance& inst, int k_hat,
                                int m_cap) {
  if (inst.set_count() > m_cap)
    throw SizeLimitError("bruteforce_rbsc: m=" +
                         std::to_string(inst.set_count()) + " exceeds cap " +
                         std::to_string(m_cap));
  k_hat = std::min(k_hat, inst.blue_count);
  RbscSearch search(inst, k_hat);
  MaskSet coverable(inst.blue_count);
  for (int j = 0; j < inst.set_count(); ++j) coverable.unite(search.blue_mask[j]);
  if (coverable.count() < k_hat)
    throw InfeasibleError("bruteforce_rbsc: fewer than " +
                          std::to_string(k_hat) + " blues coverable");
  search.recurse(0, MaskSet(inst.blue_count), MaskSet(inst.red_count));
  return {search.best_cost, search.best_sets};
}

RbscOpt bruteforce_rbsc(const RbscInstance& inst, int m_cap) {
  return bruteforce_partial_rbsc(inst, inst.blue_count, m_cap);
}

long long bruteforce_mku(const MinKUnionInstance& inst,
                         long long combination_cap) {
  int m = inst.set_count(), k = inst.target;
  double combos = 1;
  for (int i = 0; i < k; ++i) combos = combos * (m - i) / (i + 1);
  if (combos > static_cast<double>(combination_cap))
    throw SizeLimitError("bruteforce_mku: C(m,k) exceeds cap");

  std::vector<MaskSet> masks;
  for (const auto& s : inst.sets) {
    MaskSet ms(inst.ground_size);
    for (int e : s) ms.set(e);
    masks.push_back(std::move(ms));
  }
  long long best = inst.ground_size + 1;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    MaskSet u(inst.ground_size);
    for (int i : pick) u.unite(masks[i]);
    best = std::min<long long>(best, u.count());
    int pos = k - 1;
    while (pos >= 0 && pick[pos] == m - k + pos) --pos;
    if (pos < 0) break;
    ++pick[pos];
    for (int i = pos + 1; i < k; ++i) pick[i] = pick[i - 1] + 1;
  }
  return best;
}

MmsaOpt bruteforce_mmsa(const MmsaInstance& inst, int var_cap) {
  int nv = inst.variable_count();
  if (nv > var_cap)
    throw SizeLimitError("bruteforce_mmsa: " + std::to_string(nv) +
                         " variables exceeds cap " + std::to_string(var_cap));
  std::vector<int> all(nv);
  for (int i = 0; i < nv; ++i) all[i] = i;
  if (!evaluate_circuit(inst, all))
    throw InfeasibleError("bruteforce_mmsa: circuit unsatisfiable");

  // Increasing cardinality; the first satisfying subset is optimal.
  std::vector<int> pick;
  for (int c = 0; c <= nv; ++c) {
    pick.assign(c, 0);
    for (int i = 0; i < c; ++i) pick[i] = i;
    bool more = c > 0 || true;
    while (more) {
      if (evaluate_circuit(inst, pick)) return {c, pick};
      if (c == 0) break;
      int pos = c - 1;
      while (pos >= 0 && pick[pos] == nv - c + pos) --pos;
      if (pos < 0) break;
      ++pick[pos];
      for (int i = pos + 1; i < c; ++i) pick[i] = pick[i - 1] + 1;
    }
  }
  return {nv, all};  // unreachable: all-ones satisfies
}

}  // namespace rbsc
