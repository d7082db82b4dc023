#include "rbsc/mmsa4.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "rbsc/errors.hpp"
#include "rbsc/rng.hpp"
#include "rbsc/set_cover.hpp"

namespace rbsc {

namespace {

// s with 2^{-s} <= v <= 2^{-(s-1)}; v = 1 lands in s = 0.
int dyadic_exponent(double v) {
  int s = static_cast<int>(std::ceil(-std::log2(v) - 1e-9));
  return std::max(0, s);
}

long long dyadic_cardinality(long long size) {
  long long d = 1;
  while (2 * d <= size) d *= 2;
  return d;
}

double ln_guarded(double v) { return std::log(v < 2.0 ? 2.0 : v); }

}  // namespace

Mmsa4View Mmsa4View::from_instance(const MmsaInstance& inst) {
  if (inst.depth != 4)
    throw StructuralError("mmsa4: instance depth must be exactly 4");
  Mmsa4View v;
  v.nb = inst.layers[0];
  v.nj = inst.layers[1];
  v.nr = inst.layers[2];
  v.ns = inst.layers[3];
  v.j_of_b = inst.edges[0];
  v.r_of_j = inst.edges[1];
  v.s_of_r = inst.edges[2];
  v.b_of_j.assign(v.nj, {});
  v.j_of_r.assign(v.nr, {});
  v.r_of_s.assign(v.ns, {});
  for (int b = 0; b < v.nb; ++b)
    for (int j : v.j_of_b[b]) v.b_of_j[j].push_back(b);
  for (int j = 0; j < v.nj; ++j)
    for (int i : v.r_of_j[j]) v.j_of_r[i].push_back(j);
  for (int i = 0; i < v.nr; ++i)
    for (int h : v.s_of_r[i]) v.r_of_s[h].push_back(i);
  return v;
}

Mmsa4View Mmsa4View::restrict_j(const std::vector<int>& kept) const {
  Mmsa4View v;
  v.nb = nb;
  v.nj = static_cast<int>(kept.size());
  v.nr = nr;
  v.ns = ns;
  v.s_of_r = s_of_r;
  v.r_of_s = r_of_s;
  std::vector<int> new_id(nj, -1);
  for (int t = 0; t < v.nj; ++t) new_id[kept[t]] = t;
  v.r_of_j.resize(v.nj);
  v.b_of_j.assign(v.nj, {});
  for (int t = 0; t < v.nj; ++t) v.r_of_j[t] = r_of_j[kept[t]];
  v.j_of_b.assign(nb, {});
  for (int b = 0; b < nb; ++b)
    for (int j : j_of_b[b])
      if (new_id[j] >= 0) {
        v.j_of_b[b].push_back(new_id[j]);
        v.b_of_j[new_id[j]].push_back(b);
      }
  v.j_of_r.assign(nr, {});
  for (int t = 0; t < v.nj; ++t)
    for (int i : v.r_of_j[t]) v.j_of_r[i].push_back(t);
  return v;
}

std::vector<int> preprocess_mmsa4(const Mmsa4View& view,
                                  const std::vector<char>& blue_alive,
                                  double opt_guess) {
  std::vector<int> kept;
  for (int j = 0; j < view.nj; ++j) {
    double value = fractional_set_cover_value(view.r_of_j[j], view.r_of_s);
    if (value <= opt_guess + 1e-7) kept.push_back(j);
  }
  std::vector<char> has_child(view.nb, 0);
  for (int j : kept)
    for (int b : view.b_of_j[j]) has_child[b] = 1;
  for (int b = 0; b < view.nb; ++b)
    if (blue_alive[b] && !has_child[b])
      throw InfeasibleError("mmsa4 preprocessing removed every child of blue " +
                            std::to_string(b));
  return kept;
}

Mmsa4Lp build_mmsa4_lp(const Mmsa4View& view,
                       const std::vector<char>& blue_alive, double delta,
                       double opt) {
  Mmsa4Lp out;
  LpModel& lp = out.model;
  Mmsa4LpRefs& r = out.refs;
  r.delta = delta;
  r.opt = opt;

  int alive = 0;
  for (int b = 0; b < view.nb; ++b) alive += blue_alive[b] ? 1 : 0;
  r.alive_count = alive;
  double k = static_cast<double>(alive);
  double m = static_cast<double>(view.nj);
  double two_e_ln = 2.0 * std::exp(1.0) * std::log(2.0 * std::max(1.0, k));
  double blue_floor = k / (log2g(k) * log2g(m));

  auto var = [&](const std::string& name) {
    return lp.add_variable(name, 0.0, 1.0);
  };

  for (int h = 0; h < view.ns; ++h) r.w.push_back(var("w_" + std::to_string(h)));
  for (int j = 0; j < view.nj; ++j) r.x.push_back(var("x_" + std::to_string(j)));
  for (int i = 0; i < view.nr; ++i) r.y.push_back(var("y_" + std::to_string(i)));
  r.z.assign(view.nb, -1);
  for (int b = 0; b < view.nb; ++b)
    if (blue_alive[b]) r.z[b] = var("z_" + std::to_string(b));
  r.xe.assign(view.nb, {});
  for (int b = 0; b < view.nb; ++b) {
    if (!blue_alive[b]) continue;
    for (int j : view.j_of_b[b])
      r.xe[b].push_back(var("xe_" + std::to_string(b) + "_" + std::to_string(j)));
  }
  r.Xij.assign(view.nj, {});
  for (int j = 0; j < view.nj; ++j)
    for (int i : view.r_of_j[j])
      r.Xij[j].push_back(var("Xi_" + std::to_string(i) + "_c" + std::to_string(j)));
  r.Xjh.assign(view.ns, std::vector<int>(view.nj, -1));
  r.Xlh.assign(view.ns, std::vector<int>(view.nb, -1));
  r.Xih.assign(view.ns, std::vector<int>(view.nr, -1));
  r.Xhh.assign(view.ns, std::vector<int>(view.ns, -1));
  r.Xljh.assign(view.ns, std::vector<std::vector<int>>(view.nb));
  for (int h = 0; h < view.ns; ++h) {
    std::string ch = "_c" + std::to_string(h);
    for (int j = 0; j < view.nj; ++j)
      r.Xjh[h][j] = var("Xj_" + std::to_string(j) + ch);
    for (int b = 0; b < view.nb; ++b)
      if (blue_alive[b]) r.Xlh[h][b] = var("Xl_" + std::to_string(b) + ch);
    for (int i = 0; i < view.nr; ++i)
      r.Xih[h][i] = var("Xi_" + std::to_string(i) + ch);
    for (int h2 = 0; h2 < view.ns; ++h2)
      r.Xhh[h][h2] = var("Xh_" + std::to_string(h2) + ch);
    for (int b = 0; b < view.nb; ++b) {
      if (!blue_alive[b]) continue;
      for (int j : view.j_of_b[b])
        r.Xljh[h][b].push_back(
            var("Xlj_" + std::to_string(b) + "_" + std::to_string(j) + ch));
    }
  }

  // ---- base constraints ----
  {
    std::vector<LinTerm> budget;
    for (int h = 0; h < view.ns; ++h) budget.push_back({r.w[h], 1.0});
    lp.add_constraint(std::move(budget), Sense::Le, opt, "w_budget");
  }
  {
    std::vector<LinTerm> zsum;
    for (int b = 0; b < view.nb; ++b)
      if (r.z[b] >= 0) zsum.push_back({r.z[b], 1.0});
    lp.add_constraint(std::move(zsum), Sense::Ge, blue_floor, "z_floor");
  }
  for (int b = 0; b < view.nb; ++b) {
    if (r.z[b] < 0) continue;
    std::vector<LinTerm> low{{r.z[b], 1.0}}, high;
    for (int t = 0; t < static_cast<int>(r.xe[b].size()); ++t) {
      low.push_back({r.xe[b][t], -1.0});
      high.push_back({r.xe[b][t], 1.0});
    }
    high.push_back({r.z[b], -two_e_ln});
    lp.add_constraint(std::move(low), Sense::Le, 0.0);
    lp.add_constraint(std::move(high), Sense::Le, 0.0);
    for (int t = 0; t < static_cast<int>(r.xe[b].size()); ++t) {
      int j = view.j_of_b[b][t];
      lp.add_constraint({{r.xe[b][t], 1.0}, {r.x[j], -1.0}}, Sense::Le, 0.0);
      lp.add_constraint({{r.xe[b][t], 1.0}, {r.z[b], -1.0}}, Sense::Le, 0.0);
    }
  }
  for (int j = 0; j < view.nj; ++j) {
    std::vector<LinTerm> low{{r.x[j], delta}}, high{{r.x[j], -2.0 * delta}};
    for (int b : view.b_of_j[j]) {
      if (r.z[b] < 0) continue;
      int t = 0;
      for (int jj : view.j_of_b[b]) {
        if (jj == j) break;
        ++t;
      }
      low.push_back({r.xe[b][t], -1.0});
      high.push_back({r.xe[b][t], 1.0});
    }
    lp.add_constraint(std::move(low), Sense::Le, 0.0);
    lp.add_constraint(std::move(high), Sense::Le, 0.0);
  }
  for (int i = 0; i < view.nr; ++i) {
    std::vector<LinTerm> cover{{r.y[i], 1.0}};
    for (int h : view.s_of_r[i]) cover.push_back({r.w[h], -1.0});
    lp.add_constraint(std::move(cover), Sense::Le, 0.0);
  }
  for (int j = 0; j < view.nj; ++j)
    for (int i : view.r_of_j[j])
      lp.add_constraint({{r.x[j], 1.0}, {r.y[i], -1.0}}, Sense::Le, 0.0);

  // ---- lifted, conditioning on j in J ----
  for (int j = 0; j < view.nj; ++j) {
    for (int t = 0; t < static_cast<int>(view.r_of_j[j].size()); ++t) {
      int i = view.r_of_j[j][t];
      std::vector<LinTerm> cover{{r.Xij[j][t], 1.0}};
      for (int h : view.s_of_r[i]) cover.push_back({r.Xjh[h][j], -1.0});
      lp.add_constraint(std::move(cover), Sense::Le, 0.0);
      lp.add_constraint({{r.x[j], 1.0}, {r.Xij[j][t], -1.0}}, Sense::Le, 0.0);
      lp.add_constraint({{r.Xij[j][t], 1.0}, {r.x[j], -1.0}}, Sense::Le, 0.0);
    }
    for (int h = 0; h < view.ns; ++h)
      lp.add_constraint({{r.Xjh[h][j], 1.0}, {r.x[j], -1.0}}, Sense::Le, 0.0);
  }

  // ---- lifted, conditioning on h in S ----
  for (int h = 0; h < view.ns; ++h) {
    {
      std::vector<LinTerm> budget{{r.w[h], -opt}};
      for (int h2 = 0; h2 < view.ns; ++h2)
        budget.push_back({r.Xhh[h][h2], 1.0});
      lp.add_constraint(std::move(budget), Sense::Le, 0.0);
    }
    {
      std::vector<LinTerm> zsum{{r.w[h], blue_floor}};
      for (int b = 0; b < view.nb; ++b)
        if (r.Xlh[h][b] >= 0) zsum.push_back({r.Xlh[h][b], -1.0});
      lp.add_constraint(std::move(zsum), Sense::Le, 0.0);
    }
    for (int b = 0; b < view.nb; ++b) {
      if (r.Xlh[h][b] < 0) continue;
      std::vector<LinTerm> low{{r.Xlh[h][b], 1.0}}, high;
      for (size_t t = 0; t < r.Xljh[h][b].size(); ++t) {
        low.push_back({r.Xljh[h][b][t], -1.0});
        high.push_back({r.Xljh[h][b][t], 1.0});
      }
      high.push_back({r.Xlh[h][b], -two_e_ln});
      lp.add_constraint(std::move(low), Sense::Le, 0.0);
      lp.add_constraint(std::move(high), Sense::Le, 0.0);
      for (size_t t = 0; t < r.Xljh[h][b].size(); ++t) {
        int j = view.j_of_b[b][t];
        lp.add_constraint({{r.Xljh[h][b][t], 1.0}, {r.Xjh[h][j], -1.0}},
                          Sense::Le, 0.0);
        lp.add_constraint({{r.Xljh[h][b][t], 1.0}, {r.Xlh[h][b], -1.0}},
                          Sense::Le, 0.0);
      }
    }
    for (int j = 0; j < view.nj; ++j) {
      std::vector<LinTerm> low{{r.Xjh[h][j], delta}},
          high{{r.Xjh[h][j], -2.0 * delta}};
      for (int b : view.b_of_j[j]) {
        if (r.z[b] < 0) continue;
        int t = 0;
        for (int jj : view.j_of_b[b]) {
          if (jj == j) break;
          ++t;
        }
        low.push_back({r.Xljh[h][b][t], -1.0});
        high.push_back({r.Xljh[h][b][t], 1.0});
      }
      lp.add_constraint(std::move(low), Sense::Le, 0.0);
      lp.add_constraint(std::move(high), Sense::Le, 0.0);
    }
    for (int i = 0; i < view.nr; ++i) {
      std::vector<LinTerm> cover{{r.Xih[h][i], 1.0}};
      for (int h2 : view.s_of_r[i]) cover.push_back({r.Xhh[h][h2], -1.0});
      lp.add_constraint(std::move(cover), Sense::Le, 0.0);
    }
    for (int j = 0; j < view.nj; ++j)
      for (int i : view.r_of_j[j])
        lp.add_constraint({{r.Xjh[h][j], 1.0}, {r.Xih[h][i], -1.0}},
                          Sense::Le, 0.0);
    for (int b = 0; b < view.nb; ++b)
      if (r.Xlh[h][b] >= 0)
        lp.add_constraint({{r.Xlh[h][b], 1.0}, {r.w[h], -1.0}}, Sense::Le,
                          0.0);
    for (int j = 0; j < view.nj; ++j)
      lp.add_constraint({{r.Xjh[h][j], 1.0}, {r.w[h], -1.0}}, Sense::Le, 0.0);
    for (int i = 0; i < view.nr; ++i)
      lp.add_constraint({{r.Xih[h][i], 1.0}, {r.w[h], -1.0}}, Sense::Le, 0.0);
    for (int h2 = 0; h2 < view.ns; ++h2)
      lp.add_constraint({{r.Xhh[h][h2], 1.0}, {r.w[h], -1.0}}, Sense::Le, 0.0);
  }

  std::vector<LinTerm> objective;
  for (int b = 0; b < view.nb; ++b)
    if (r.z[b] >= 0) objective.push_back({r.z[b], 1.0});
  lp.set_objective(true, std::move(objective));
  return out;
}

J0Selection bucket_j0(const Mmsa4View& view, const Mmsa4LpRefs& refs,
                      const LpSolution& sol) {
  std::map<int, double> weight;
  std::map<int, std::vector<int>> members;
  double total = 0;
  for (int j = 0; j < view.nj; ++j) {
    double xv = sol.value(refs.x[j]);
    total += std::max(0.0, xv);
    if (xv <= 1e-9) continue;
    int s = dyadic_exponent(xv);
    weight[s] += xv;
    members[s].push_back(j);
  }
  J0Selection out;
  out.total_weight = total;
  int best = -1;
  for (const auto& [s, wgt] : weight) {
    // ties break toward larger x0, i.e. smaller s (map is ordered by s).
    if (best < 0 || wgt > weight[best] + 1e-12) best = s;
  }
  if (best >= 0) {
    out.bucket_exponent = best;
    out.x0 = std::ldexp(1.0, -best);
    out.weight = weight[best];
    out.members = members[best];
  }
  return out;
}

NeighborBuckets bucket_neighbors(const Mmsa4View& view,
                                 const Mmsa4LpRefs& refs,
                                 const LpSolution& sol, int j, int i) {
  double xj = sol.value(refs.x[j]);
  if (xj <= 1e-9)
    throw ParameterError("bucket_neighbors requires x_j > 0");
  double hat_sum = 0;
  std::map<int, double> beta_weight;
  std::map<int, std::vector<int>> beta_members;
  for (int h : view.s_of_r[i]) {
    double hat_w = sol.value(refs.Xjh[h][j]) / xj;
    hat_sum += std::max(0.0, hat_w);
    if (hat_w <= 1e-12) continue;
    int s = dyadic_exponent(std::min(1.0, hat_w));
    beta_weight[s] += hat_w;
    beta_members[s].push_back(h);
  }
  if (hat_sum < 1.0 - 1e-6)
    throw LiftingDegenerateError(
        "lifted red-cover mass below 1 for (j=" + std::to_string(j) +
        ", i=" + std::to_string(i) + "): " + std::to_string(hat_sum));
  int best_beta = -1;
  for (const auto& [s, wgt] : beta_weight)
    if (best_beta < 0 || wgt > beta_weight[best_beta] + 1e-12) best_beta = s;

  NeighborBuckets out;
  out.beta = std::ldexp(1.0, -best_beta);
  std::map<int, std::vector<int>> gamma_members;
  for (int h : beta_members[best_beta]) {
    double wh = std::max(sol.value(refs.w[h]), 1e-12);
    int t = dyadic_exponent(std::min(1.0, wh));
    gamma_members[t].push_back(h);
  }
  int best_gamma = -1;
  for (const auto& [t, hs] : gamma_members)
    if (best_gamma < 0 || hs.size() > gamma_members[best_gamma].size())
      best_gamma = t;
  out.gamma = std::ldexp(1.0, -best_gamma);
  out.hat_gamma = gamma_members[best_gamma];
  double logS = log2g(view.ns);
  double logS2m = log2g(static_cast<double>(view.ns) * view.ns * view.nj);
  out.size_floor = 1.0 / (6.0 * out.beta * logS * logS2m);
  return out;
}

// Bucket every (j, i) pair, group by (beta, gamma), and apply the
// neighborhood size filter.
Mmsa4Buckets build_mmsa4_buckets(const Mmsa4View& view,
                                 const Mmsa4LpRefs& refs,
                                 const LpSolution& sol,
                                 const J0Selection& j0sel, double opt,
                                 double a_param) {
  Mmsa4Buckets table;
  table.j0 = j0sel.members;
  table.x0 = j0sel.x0;
  table.x_j0 = j0sel.weight;
  table.x_j = j0sel.total_weight;
  table.a_param = a_param;
  table.triples.resize(table.j0.size());

  for (size_t t = 0; t < table.j0.size(); ++t) {
    int j = table.j0[t];
    std::map<std::pair<int, int>, TripleEntry> grouped;
    for (int i : view.r_of_j[j]) {
      NeighborBuckets nb = bucket_neighbors(view, refs, sol, j, i);
      if (static_cast<double>(nb.hat_gamma.size()) + 1e-9 < nb.size_floor)
        throw RoundingFailure("bucketed neighborhood below its size floor");
      double slack =
          static_cast<double>(nb.hat_gamma.size()) / nb.size_floor;
      if (table.neighborhood_slack == 0 || slack < table.neighborhood_slack)
        table.neighborhood_slack = slack;
      if (nb.beta + 1e-12 < 1.0 / (static_cast<double>(view.ns) * view.ns))
        throw RoundingFailure("beta below 1/|S|^2");
      std::pair<int, int> key{dyadic_exponent(nb.beta),
                              dyadic_exponent(nb.gamma)};
      TripleEntry& e = grouped[key];
      e.key.beta = nb.beta;
      e.key.gamma = nb.gamma;
      e.reds.push_back(i);
      for (int h : nb.hat_gamma) e.svs.push_back(h);
    }
    for (auto& [key, entry] : grouped) {
      entry.svs = sorted_unique(std::move(entry.svs));
      entry.key.d = dyadic_cardinality(
          static_cast<long long>(entry.svs.size()));
      table.triples[t].push_back(std::move(entry));
    }
  }

  std::map<TripleKey, int> distinct;
  for (const auto& per_j : table.triples)
    for (const auto& e : per_j) distinct[e.key]++;
  table.nonempty_triples = static_cast<int>(distinct.size());

  table.in_j1.assign(table.j0.size(), 0);
  for (const auto& [key, count] : distinct) {
    bool qualifies = key.beta / key.gamma > a_param &&
                     key.beta * static_cast<double>(key.d) >
                         a_param * opt / std::max(table.x_j0, 1e-12);
    if (qualifies) table.p1.push_back(key);
  }
  for (size_t t = 0; t < table.j0.size(); ++t)
    for (const auto& e : table.triples[t])
      for (const TripleKey& k : table.p1)
        if (e.key == k) {
          if (!table.in_j1[t]) {
            table.in_j1[t] = 1;
            ++table.j1_size;
          }
        }
  return table;
}

namespace {

bool covers_all_reds(const Mmsa4View& view, const std::vector<int>& j_alg,
                     const std::vector<char>& s_mask) {
  for (int j : j_alg)
    for (int i : view.r_of_j[j]) {
      bool hit = false;
      for (int h : view.s_of_r[i])
        if (s_mask[h]) { hit = true; break; }
      if (!hit) return false;
    }
  return true;
}

long long new_blues(const Mmsa4View& view, const std::vector<int>& j_alg,
                    const std::vector<char>& blue_alive) {
  std::vector<char> hit(view.nb, 0);
  for (int j : j_alg)
    for (int b : view.b_of_j[j])
      if (blue_alive[b]) hit[b] = 1;
  long long c = 0;
  for (char v : hit) c += v;
  return c;
}

}  // namespace

RoundOutcome mmsa4_case1_round(const Mmsa4View& view,
                               const Mmsa4Buckets& table,
                               const std::vector<char>& blue_alive,
                               int trial_cap, Rng& rng) {
  double logS = log2g(view.ns);
  double logS2m = log2g(static_cast<double>(view.ns) * view.ns * view.nj);
  double lnn = ln_guarded(view.nr);
  for (int trial = 0; trial < trial_cap; ++trial) {
    std::vector<int> j_alg;
    for (size_t t = 0; t < table.j0.size(); ++t) {
      if (table.in_j1[t]) continue;
      if (rng.unit() < table.x0) j_alg.push_back(table.j0[t]);
    }
    if (j_alg.empty()) continue;
    // S_beta classes over the union of the selected js' tagged neighborhoods.
    std::map<int, std::vector<int>> s_beta;
    for (size_t t = 0; t < table.j0.size(); ++t) {
      if (table.in_j1[t]) continue;
      if (std::find(j_alg.begin(), j_alg.end(), table.j0[t]) == j_alg.end())
        continue;
      for (const TripleEntry& e : table.triples[t]) {
        int bexp = dyadic_exponent(e.key.beta);
        auto& cls = s_beta[bexp];
        cls.insert(cls.end(), e.svs.begin(), e.svs.end());
      }
    }
    std::vector<char> s_mask(view.ns, 0);
    std::vector<int> s_alg;
    for (auto& [bexp, hs] : s_beta) {
      double beta = std::ldexp(1.0, -bexp);
      double p = std::min(1.0, beta * 12.0 * logS * logS2m * lnn);
      for (int h : sorted_unique(std::move(hs))) {
        if (rng.unit() < p && !s_mask[h]) {
          s_mask[h] = 1;
          s_alg.push_back(h);
        }
      }
    }
    if (!covers_all_reds(view, j_alg, s_mask)) continue;
    if (new_blues(view, j_alg, blue_alive) < 1) continue;
    return {std::move(j_alg), std::move(s_alg), trial + 1};
  }
  throw RoundingExhaustedError("case-1 rounding exhausted its trial cap");
}

RoundOutcome mmsa4_case2_round(const Mmsa4View& view, const Mmsa4LpRefs& refs,
                               const LpSolution& sol,
                               const Mmsa4Buckets& table,
                               const std::vector<char>& blue_alive,
                               int trial_cap, Rng& rng,
                               StepDiagnostics* diag) {
  // Choose the qualifying triple with the largest J slice.
  TripleKey best_key;
  std::vector<int> j2;
  for (const TripleKey& key : table.p1) {
    std::vector<int> slice;
    for (size_t t = 0; t < table.j0.size(); ++t)
      for (const auto& e : table.triples[t])
        if (e.key == key) slice.push_back(table.j0[t]);
    if (slice.size() > j2.size()) {
      j2 = std::move(slice);
      best_key = key;
    }
  }
  if (j2.empty())
    throw RoundingFailure("case 2 entered with an empty qualifying family");

  auto slice_svs = [&](int j) -> const std::vector<int>* {
    for (size_t t = 0; t < table.j0.size(); ++t)
      if (table.j0[t] == j)
        for (const auto& e : table.triples[t])
          if (e.key == best_key) return &e.svs;
    return nullptr;
  };

  // Degrees of S vertices inside the slice.
  std::vector<int> deg2(view.ns, 0);
  for (int j : j2)
    for (int h : *slice_svs(j)) ++deg2[h];
  std::map<long long, std::vector<int>> s_dtilde;
  for (int h = 0; h < view.ns; ++h)
    if (deg2[h] > 0) s_dtilde[dyadic_cardinality(deg2[h])].push_back(h);
  long long best_dtilde = 0, best_pairs = -1;
  for (const auto& [dt, hs] : s_dtilde) {
    long long pairs = 0;
    for (int h : hs) pairs += deg2[h];
    if (pairs > best_pairs) {
      best_pairs = pairs;
      best_dtilde = dt;
    }
  }
  const std::vector<int>& s_tilde = s_dtilde[best_dtilde];

  int h0 = -1;
  double best_mass = -1;
  for (int h : s_tilde) {
    double wh = sol.value(refs.w[h]);
    if (wh <= 1e-9) continue;
    double mass = 0;
    for (int j : j2) {
      const auto* svs = slice_svs(j);
      if (std::binary_search(svs->begin(), svs->end(), h))
        mass += sol.value(refs.Xjh[h][j]) / wh;
    }
    if (mass > best_mass + 1e-12) {
      best_mass = mass;
      h0 = h;
    }
  }
  if (h0 < 0) throw RoundingFailure("case 2 found no usable h0");
  double wh0 = sol.value(refs.w[h0]);

  std::vector<int> j_alg;
  for (int j : j2) {
    const auto* svs = slice_svs(j);
    if (std::binary_search(svs->begin(), svs->end(), h0)) j_alg.push_back(j);
  }

  // Per-member conditioned weights stay within the dyadic window and the
  // slice carries enough conditioned mass.
  double beta = best_key.beta, gamma = best_key.gamma;
  double lo = table.x0 * beta / (2.0 * gamma);
  double hi = 4.0 * table.x0 * beta / gamma;
  double lhs = 0;
  for (int j : j_alg) {
    double xhat = sol.value(refs.Xjh[h0][j]) / wh0;
    if (xhat < lo - 1e-7 || xhat > hi + 1e-7)
      throw RoundingFailure("conditioned weight outside the slice window");
    lhs += xhat;
  }
  double logS = log2g(view.ns);
  double logS2m = log2g(static_cast<double>(view.ns) * view.ns * view.nj);
  double logm = log2g(view.nj);
  double rhs = static_cast<double>(table.j0.size()) *
               static_cast<double>(best_key.d) * table.x0 * beta / refs.opt /
               (4.0 * logS * logS * logS2m * logm);
  if (lhs + 1e-9 < rhs)
    throw RoundingFailure("conditioned slice mass below its floor");
  if (diag) {
    diag->chosen_triple = best_key;
    diag->d_tilde = best_dtilde;
    diag->h0 = h0;
    diag->slice_mass = lhs;
    diag->slice_mass_floor = rhs;
  }

  // Sample the oversampled conditioned fractional cover.
  std::vector<int> candidates;
  for (int j : j_alg)
    for (int i : view.r_of_j[j])
      for (int h : view.s_of_r[i]) candidates.push_back(h);
  candidates = sorted_unique(std::move(candidates));
  double lnn = ln_guarded(view.nr);
  for (int trial = 0; trial < trial_cap; ++trial) {
    std::vector<char> s_mask(view.ns, 0);
    std::vector<int> s_alg;
    for (int h : candidates) {
      double what = sol.value(refs.Xhh[h0][h]) / wh0;
      double p = std::min(1.0, what * 4.0 * gamma * lnn / (table.x0 * beta));
      if (rng.unit() < p) {
        s_mask[h] = 1;
        s_alg.push_back(h);
      }
    }
    if (!covers_all_reds(view, j_alg, s_mask)) continue;
    if (new_blues(view, j_alg, blue_alive) < 1) continue;
    return {j_alg, std::move(s_alg), trial + 1};
  }
  throw RoundingExhaustedError("case-2 rounding exhausted its trial cap");
}

bool mmsa4_claim_weight_bounds(const Mmsa4View& view, const Mmsa4LpRefs& refs,
                               const LpSolution& sol, double tol) {
  double zsum = 0, xsum = 0;
  for (int b = 0; b < view.nb; ++b)
    if (refs.z[b] >= 0) zsum += sol.value(refs.z[b]);
  for (int j = 0; j < view.nj; ++j) xsum += sol.value(refs.x[j]);
  double k = refs.alive_count;
  double two_e_ln = 2.0 * std::exp(1.0) * std::log(2.0 * std::max(1.0, k));
  return zsum / (2.0 * refs.delta) <= xsum + tol &&
         xsum <= two_e_ln / refs.delta * zsum + tol;
}

bool mmsa4_claim_blue_neighborhood(const Mmsa4View& view,
                                   const Mmsa4LpRefs& refs,
                                   const LpSolution& sol,
                                   const std::vector<int>& j_subset,
                                   double tol) {
  double xsub = 0, xtot = 0;
  for (int j = 0; j < view.nj; ++j) xtot += sol.value(refs.x[j]);
  std::vector<char> blue_hit(view.nb, 0);
  for (int j : j_subset) {
    xsub += sol.value(refs.x[j]);
    for (int b : view.b_of_j[j])
      if (refs.z[b] >= 0) blue_hit[b] = 1;
  }
  long long nbors = 0;
  for (char c : blue_hit) nbors += c;
  double k = refs.alive_count;
  double denom = 4.0 * std::exp(1.0) * std::log(2.0 * std::max(1.0, k)) *
                 log2g(k) * log2g(view.nj);
  double bound = xsub / std::max(xtot, 1e-12) * k / denom;
  return static_cast<double>(nbors) + tol >= bound;
}

bool mmsa4_claim_frac_coverage(const Mmsa4View& view, const Mmsa4LpRefs& refs,
                               const LpSolution& sol,
                               const std::vector<int>& j_subset,
                               double tol) {
  double xsub = 0, xtot = 0;
  std::vector<char> in_subset(view.nj, 0);
  for (int j : j_subset) in_subset[j] = 1;
  for (int j = 0; j < view.nj; ++j) xtot += sol.value(refs.x[j]);
  for (int j : j_subset) xsub += sol.value(refs.x[j]);
  double ratio = xsub / std::max(xtot, 1e-12);
  double k = refs.alive_count;
  double logk = log2g(k), logm = log2g(view.nj);
  double level = ratio / (4.0 * logk * logm);
  double eps = ratio / (8.0 * std::exp(1.0) *
                        std::log(2.0 * std::max(1.0, k)) * logk * logm);
  long long qualifying = 0;
  for (int b = 0; b < view.nb; ++b) {
    if (refs.z[b] < 0) continue;
    double mass = 0;
    for (size_t t = 0; t < view.j_of_b[b].size(); ++t)
      if (in_subset[view.j_of_b[b][t]]) mass += sol.value(refs.xe[b][t]);
    if (mass + 1e-12 >= level) ++qualifying;
  }
  return static_cast<double>(qualifying) + tol >= eps * k;
}

double mmsa4_conditioned_violation(const Mmsa4View& view,
                                   const Mmsa4LpRefs& refs,
                                   const LpSolution& sol, int h) {
  double wh = sol.value(refs.w[h]);
  if (wh <= 1e-7) return 0.0;
  std::vector<char> alive(view.nb, 0);
  for (int b = 0; b < view.nb; ++b) alive[b] = refs.z[b] >= 0;
  Mmsa4Lp base = build_mmsa4_lp(view, alive, refs.delta, refs.opt);
  Eigen::VectorXd point = Eigen::VectorXd::Zero(base.model.n_vars());
  for (int h2 = 0; h2 < view.ns; ++h2)
    point[base.refs.w[h2]] = sol.value(refs.Xhh[h][h2]) / wh;
  for (int j = 0; j < view.nj; ++j)
    point[base.refs.x[j]] = sol.value(refs.Xjh[h][j]) / wh;
  for (int i = 0; i < view.nr; ++i)
    point[base.refs.y[i]] = sol.value(refs.Xih[h][i]) / wh;
  for (int b = 0; b < view.nb; ++b) {
    if (refs.z[b] < 0) continue;
    point[base.refs.z[b]] = sol.value(refs.Xlh[h][b]) / wh;
    for (size_t t = 0; t < refs.Xljh[h][b].size(); ++t)
      point[base.refs.xe[b][t]] = sol.value(refs.Xljh[h][b][t]) / wh;
  }
  // Measure the base rows directly; the probe model is only used for its
  // variable indexing.
  double worst = 0.0;
  Mmsa4LpRefs pr = base.refs;
  double k = refs.alive_count;
  double m = view.nj;
  double two_e_ln = 2.0 * std::exp(1.0) * std::log(2.0 * std::max(1.0, k));
  double blue_floor = k / (log2g(k) * log2g(m));
  double wsum = 0;
  for (int h2 = 0; h2 < view.ns; ++h2) wsum += point[pr.w[h2]];
  worst = std::max(worst, wsum - refs.opt);
  double zsum = 0;
  for (int b = 0; b < view.nb; ++b)
    if (pr.z[b] >= 0) zsum += point[pr.z[b]];
  worst = std::max(worst, blue_floor - zsum);
  for (int b = 0; b < view.nb; ++b) {
    if (pr.z[b] < 0) continue;
    double esum = 0;
    for (size_t t = 0; t < pr.xe[b].size(); ++t) esum += point[pr.xe[b][t]];
    worst = std::max(worst, point[pr.z[b]] - esum);
    worst = std::max(worst, esum - two_e_ln * point[pr.z[b]]);
    for (size_t t = 0; t < pr.xe[b].size(); ++t) {
      int j = view.j_of_b[b][t];
      worst = std::max(worst, point[pr.xe[b][t]] - point[pr.x[j]]);
      worst = std::max(worst, point[pr.xe[b][t]] - point[pr.z[b]]);
    }
  }
  for (int j = 0; j < view.nj; ++j) {
    double esum = 0;
    for (int b : view.b_of_j[j]) {
      if (pr.z[b] < 0) continue;
      int t = 0;
      for (int jj : view.j_of_b[b]) {
        if (jj == j) break;
        ++t;
      }
      esum += point[pr.xe[b][t]];
    }
    worst = std::max(worst, refs.delta * point[pr.x[j]] - esum);
    worst = std::max(worst, esum - 2.0 * refs.delta * point[pr.x[j]]);
  }
  for (int i = 0; i < view.nr; ++i) {
    double cover = 0;
    for (int h2 : view.s_of_r[i]) cover += point[pr.w[h2]];
    worst = std::max(worst, point[pr.y[i]] - cover);
  }
  for (int j = 0; j < view.nj; ++j)
    for (int i : view.r_of_j[j])
      worst = std::max(worst, point[pr.x[j]] - point[pr.y[i]]);
  return worst;
}

double mmsa4_cost_bound(double total_size, double opt, double c) {
  double logn = log2g(total_size);
  return c * std::cbrt(total_size) * logn * logn * logn * std::max(opt, 1.0);
}

namespace {

struct PipelineResult {
  std::vector<int> s_vars;
  std::vector<StepDiagnostics> steps;
  bool fallback = false;
};

// Direct cover route: greedy-cover the alive blues with usable AND gates and
// greedy-cover each chosen gate's reds. Always succeeds on satisfiable
// instances.
PipelineResult fallback_pipeline(const Mmsa4View& view,
                                 std::vector<char> blue_alive) {
  PipelineResult out;
  out.fallback = true;
  std::vector<int> usable;
  for (int j = 0; j < view.nj; ++j) {
    bool ok = true;
    for (int i : view.r_of_j[j])
      if (view.s_of_r[i].empty()) { ok = false; break; }
    if (ok && !view.b_of_j[j].empty()) usable.push_back(j);
  }
  std::vector<int> universe;
  for (int b = 0; b < view.nb; ++b)
    if (blue_alive[b]) universe.push_back(b);
  if (universe.empty()) return out;
  std::vector<std::vector<int>> blue_sets;
  for (int j : usable) blue_sets.push_back(view.b_of_j[j]);
  std::vector<int> cover = greedy_set_cover(universe, blue_sets);
  std::vector<char> s_mask(view.ns, 0);
  StepDiagnostics diag;
  diag.case_used = 0;
  for (int idx : cover) {
    int j = usable[idx];
    std::vector<int> chosen_s =
        greedy_set_cover(view.r_of_j[j], view.r_of_s);
    for (int h : chosen_s) s_mask[h] = 1;
  }
  for (int h = 0; h < view.ns; ++h)
    if (s_mask[h]) out.s_vars.push_back(h);
  diag.s_alg = static_cast<int>(out.s_vars.size());
  diag.j_alg = static_cast<int>(cover.size());
  diag.blues_covered = static_cast<long long>(universe.size());
  out.steps.push_back(diag);
  return out;
}

}  // namespace

MmsaSolution solve_mmsa4(const MmsaInstance& inst, const Mmsa4Params& params,
                         Mmsa4RunReport* report) {
  Mmsa4View full = Mmsa4View::from_instance(inst);
  std::vector<int> all_vars(full.ns);
  std::iota(all_vars.begin(), all_vars.end(), 0);
  if (!evaluate_circuit(inst, all_vars))
    throw InfeasibleError("mmsa4: circuit unsatisfiable under all-ones");

  // Gates with empty red neighborhoods are vacuously true: their blues are
  // covered at zero cost.
  std::vector<char> alive0(full.nb, 1);
  for (int j = 0; j < full.nj; ++j)
    if (full.r_of_j[j].empty())
      for (int b : full.b_of_j[j]) alive0[b] = 0;
  int alive_count0 = 0;
  for (char c : alive0) alive_count0 += c;
  if (alive_count0 == 0) {
    if (report) *report = Mmsa4RunReport{};
    return make_mmsa_solution(inst, {});
  }

  // The fractional cover filter is guess-independent per vertex.
  std::vector<double> frac_value(full.nj);
  for (int j = 0; j < full.nj; ++j)
    frac_value[j] =
        full.r_of_j[j].empty()
            ? std::numeric_limits<double>::infinity()  // free: keep out of LP
            : fractional_set_cover_value(full.r_of_j[j], full.r_of_s);

  Rng rng(params.seed);
  struct Candidate {
    PipelineResult result;
    long long delta = 0, opt = 0;
  };
  std::optional<Candidate> best;

  long long max_opt = 1;
  while (max_opt < std::max(1, full.ns)) max_opt *= 2;
  for (long long opt = 1; opt <= max_opt; opt *= 2) {
    std::vector<int> kept;
    for (int j = 0; j < full.nj; ++j)
      if (frac_value[j] <= static_cast<double>(opt) + 1e-7) kept.push_back(j);
    if (kept.empty()) continue;
    Mmsa4View view = full.restrict_j(kept);
    {
      std::vector<char> has_child(view.nb, 0);
      for (int j = 0; j < view.nj; ++j)
        for (int b : view.b_of_j[j]) has_child[b] = 1;
      bool orphan = false;
      for (int b = 0; b < view.nb; ++b)
        if (alive0[b] && !has_child[b]) { orphan = true; break; }
      if (orphan) continue;  // guess too small to keep a needed child
    }
    double a_param = std::cbrt(static_cast<double>(view.nj));

    for (long long delta = 1; delta <= std::max(1, alive_count0);
         delta *= 2) {
      Rng pipe_rng = rng.fork((static_cast<std::uint64_t>(opt) << 20) ^
                              static_cast<std::uint64_t>(delta));
      PipelineResult pipeline;
      std::vector<char> alive = alive0;
      int alive_count = alive_count0;
      std::vector<char> s_mask(full.ns, 0);
      bool failed = false;
      int guard = 0;
      while (alive_count > 0 && !failed) {
        if (++guard > full.nb + 2) { failed = true; break; }
        double fallback_threshold =
            static_cast<double>(alive_count) /
            std::pow(static_cast<double>(view.nj), params.eps);
        if (static_cast<double>(delta) > fallback_threshold) {
          PipelineResult rest = fallback_pipeline(view, alive);
          for (int h : rest.s_vars) s_mask[h] = 1;
          for (auto& st : rest.steps) pipeline.steps.push_back(st);
          alive_count = 0;
          break;
        }
        try {
          Mmsa4Lp lp = build_mmsa4_lp(view, alive, static_cast<double>(delta),
                                      static_cast<double>(opt));
          LpSolution sol = lp_solve(lp.model);
          if (sol.status != LpStatus::Optimal) { failed = true; break; }
          J0Selection j0 = bucket_j0(view, lp.refs, sol);
          if (j0.members.empty()) { failed = true; break; }
          double logm = log2g(view.nj);
          StepDiagnostics diag;
          diag.delta = static_cast<double>(delta);
          diag.opt = static_cast<double>(opt);
          diag.x0 = j0.x0;
          diag.x_j0 = j0.weight;
          diag.x_j = j0.total_weight;
          diag.j0_weight_floor = j0.total_weight / (2.0 * logm);
          if (j0.weight + 1e-9 < diag.j0_weight_floor ||
              j0.x0 + 1e-12 < 1.0 / static_cast<double>(view.nj)) {
            failed = true;
            break;
          }
          Mmsa4Buckets table = build_mmsa4_buckets(
              view, lp.refs, sol, j0, static_cast<double>(opt), a_param);
          diag.neighborhood_slack = table.neighborhood_slack;
          diag.nonempty_triples = table.nonempty_triples;
          diag.triple_bound =
              2.0 * log2g(view.ns) * log2g(view.ns) *
              log2g(static_cast<double>(view.ns) * view.ns * view.nj);
          if (static_cast<double>(table.nonempty_triples) >
              diag.triple_bound + 1e-9) {
            failed = true;
            break;
          }
          RoundOutcome outcome;
          if (table.j1_size < static_cast<int>(table.j0.size() + 1) / 2) {
            diag.case_used = 1;
            outcome = mmsa4_case1_round(view, table, alive,
                                        params.trial_cap, pipe_rng);
          } else {
            diag.case_used = 2;
            outcome = mmsa4_case2_round(view, lp.refs, sol, table, alive,
                                        params.trial_cap, pipe_rng, &diag);
          }
          diag.trials = outcome.trials;
          diag.j_alg = static_cast<int>(outcome.j_alg.size());
          diag.s_alg = static_cast<int>(outcome.s_alg.size());
          diag.blues_covered = new_blues(view, outcome.j_alg, alive);
          for (int h : outcome.s_alg) s_mask[h] = 1;
          for (int j : outcome.j_alg)
            for (int b : view.b_of_j[j])
              if (alive[b]) {
                alive[b] = 0;
                --alive_count;
              }
          pipeline.steps.push_back(diag);
        } catch (const Error&) {
          failed = true;
        }
      }
      if (failed) continue;
      for (int h = 0; h < full.ns; ++h)
        if (s_mask[h]) pipeline.s_vars.push_back(h);
      if (!best || pipeline.s_vars.size() < best->result.s_vars.size()) {
        best = Candidate{std::move(pipeline), delta, opt};
      }
    }
  }

  {
    PipelineResult direct = fallback_pipeline(full, alive0);
    if (!best || direct.s_vars.size() < best->result.s_vars.size())
      best = Candidate{std::move(direct), 0, 0};
  }

  MmsaSolution sol = make_mmsa_solution(inst, best->result.s_vars);
  if (!evaluate_circuit(inst, sol.true_variables))
    throw NumericalFailure("mmsa4 produced an unsatisfying assignment");
  if (report) {
    *report = Mmsa4RunReport{};
    report->delta = best->delta;
    report->opt = best->opt;
    report->a_param = std::cbrt(static_cast<double>(full.nj));
    report->steps = best->result.steps;
    report->used_fallback_pipeline = best->result.fallback;
    report->declared_bound = mmsa4_cost_bound(
        static_cast<double>(inst.total_size()), 1.0, params.approx_constant);
  }
  return sol;
}

}  // namespace rbsc
