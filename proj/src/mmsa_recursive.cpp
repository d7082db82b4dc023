#include "rbsc/mmsa_recursive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rbsc/errors.hpp"
#include "rbsc/rng.hpp"
#include "rbsc/set_cover.hpp"

namespace rbsc {

namespace {

double ln1p_n(double n) { return 1.0 + std::log(std::max(n, 2.0)); }

std::vector<int> identity_ids(int n) {
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

bool all_ones_satisfies(const MmsaInstance& inst) {
  return evaluate_circuit(inst, identity_ids(inst.variable_count()));
}

}  // namespace

double mmsa_delta_exponent(int t) {
  double half = std::ceil(static_cast<double>(t) / 2.0);
  return (1.0 / 3.0) * std::pow(2.0, 3.0 - half);
}

double mmsa_a_bound(int t, double n, const MmsaParams& params) {
  if (t <= 2) return ln1p_n(n);
  if (t == 3)
    return 8.0 * std::cbrt(n) * std::pow(log2g(n), 4.0 / 3.0) * log2g(n);
  if (t == 4) return mmsa4_cost_bound(n, 1.0, params.mmsa4_constant);
  if (t % 2 == 1) return mmsa_a_bound(t + 1, n, params);
  return 2.0 * ln1p_n(n) * std::sqrt(n * mmsa_a_bound(t - 2, n, params));
}

MmsaInstance embed_odd_depth(const MmsaInstance& inst) {
  if (inst.depth % 2 == 0)
    throw ParameterError("embed_odd_depth expects an odd depth");
  MmsaInstance out;
  out.depth = inst.depth + 1;
  out.layers = inst.layers;
  out.layers.push_back(inst.variable_count());
  out.edges = inst.edges;
  std::vector<std::vector<int>> pass(inst.variable_count());
  for (int v = 0; v < inst.variable_count(); ++v) pass[v] = {v};
  out.edges.push_back(std::move(pass));
  return out;
}

std::optional<LpConstraint> cut_oracle(const RecursionFrame& frame,
                                       int u_alg_size,
                                       const std::vector<int>& x_vars) {
  double lnn = ln1p_n(frame.n_total);
  double threshold = frame.a_outer / (2.0 * lnn);
  if (static_cast<double>(u_alg_size) <= threshold + 1e-9) return std::nullopt;
  double rhs =
      std::floor(frame.a_outer / (2.0 * lnn * frame.a_inner)) + 1.0;
  if (frame.sbar_lp_value >= rhs - 1e-7)
    throw NotViolatedError(
        "progress cut not violated by the current LP point; raise the "
        "outer approximation target");
  LpConstraint cut;
  for (size_t t = 0; t < frame.sbar.size(); ++t)
    cut.terms.push_back({x_vars[t], 1.0});
  cut.sense = Sense::Ge;
  cut.rhs = rhs;
  cut.name = "progress_cut";
  return cut;
}

namespace {

// Drop vertices of one layer, remapping ids; new_to_old receives the map.
MmsaInstance restrict_layer(const MmsaInstance& inst, int layer,
                            const std::vector<char>& keep,
                            std::vector<int>* new_to_old) {
  MmsaInstance out;
  out.depth = inst.depth;
  out.layers = inst.layers;
  out.edges = inst.edges;
  std::vector<int> old_to_new(inst.layers[layer], -1);
  std::vector<int> kept;
  for (int v = 0; v < inst.layers[layer]; ++v)
    if (keep[v]) {
      old_to_new[v] = static_cast<int>(kept.size());
      kept.push_back(v);
    }
  out.layers[layer] = static_cast<int>(kept.size());
  if (layer < inst.depth - 1) {
    out.edges[layer].clear();
    for (int v : kept) out.edges[layer].push_back(inst.edges[layer][v]);
  }
  if (layer > 0) {
    for (auto& children : out.edges[layer - 1]) {
      std::vector<int> mapped;
      for (int c : children)
        if (old_to_new[c] >= 0) mapped.push_back(old_to_new[c]);
      children = std::move(mapped);
    }
  }
  if (new_to_old) *new_to_old = kept;
  return out;
}

struct ReducedCircuit {
  MmsaInstance inst;
  std::vector<int> var_map;  // reduced variable id -> frame AND-layer id
  bool root_satisfied = false;
};

// Truncate to depth T-2 treating v_plus (ids in layer T-3) as already true,
// propagating satisfaction upward and dropping satisfied gates.
ReducedCircuit reduce_for_recursion(const MmsaInstance& inst,
                                    const std::vector<int>& v_plus) {
  int t = inst.depth;
  int vj = t - 3;
  std::vector<std::vector<char>> sat(vj + 1);
  for (int p = 0; p <= vj; ++p) sat[p].assign(inst.layers[p], 0);
  for (int j : v_plus) sat[vj][j] = 1;
  for (int p = vj - 1; p >= 0; --p) {
    bool is_and = inst.layer_is_and(p);
    for (int v = 0; v < inst.layers[p]; ++v) {
      bool acc = is_and;
      for (int c : inst.edges[p][v]) {
        if (is_and) {
          if (!sat[p + 1][c]) { acc = false; break; }
        } else {
          if (sat[p + 1][c]) { acc = true; break; }
        }
      }
      sat[p][v] = acc ? 1 : 0;
    }
  }
  ReducedCircuit out;
  out.root_satisfied = true;
  for (int v = 0; v < inst.layers[0]; ++v)
    if (!sat[0][v]) out.root_satisfied = false;
  if (out.root_satisfied) return out;

  std::vector<std::vector<int>> old_to_new(vj + 1);
  out.inst.depth = t - 2;
  out.inst.layers.assign(vj + 1, 0);
  out.inst.edges.resize(vj);
  for (int p = 0; p <= vj; ++p) {
    old_to_new[p].assign(inst.layers[p], -1);
    for (int v = 0; v < inst.layers[p]; ++v) {
      if (sat[p][v]) continue;
      old_to_new[p][v] = out.inst.layers[p]++;
      if (p == vj) out.var_map.push_back(v);
    }
  }
  for (int p = 0; p < vj; ++p) {
    out.inst.edges[p].resize(out.inst.layers[p]);
    for (int v = 0; v < inst.layers[p]; ++v) {
      if (sat[p][v]) continue;
      std::vector<int> mapped;
      for (int c : inst.edges[p][v])
        if (old_to_new[p + 1][c] >= 0) mapped.push_back(old_to_new[p + 1][c]);
      out.inst.edges[p][old_to_new[p][v]] = std::move(mapped);
    }
  }
  return out;
}

struct FrameOutcome {
  std::vector<int> variables;  // chosen vertices of the variable layer
};

// One depth-reduction frame at even depth >= 6 and a fixed OPT guess. Throws
// RoundingFailure when the guess cannot complete, CutLoopExhaustedError when
// the cut cap binds.
FrameOutcome run_even_frame(const MmsaInstance& inst, long long opt_guess,
                            double n_for_bounds, const MmsaParams& params,
                            MmsaRunReport* report,
                            std::vector<CutRecord>* cut_log) {
  int t = inst.depth;
  int vj = t - 3, vr = t - 2, vt = t - 1;
  double lnn = ln1p_n(n_for_bounds);

  // Fractional-cover preprocessing of the AND layer above the variables.
  std::vector<std::vector<int>> cover_sets(inst.layers[vt]);
  for (int i = 0; i < inst.layers[vr]; ++i)
    for (int h : inst.edges[vr][i]) cover_sets[h].push_back(i);
  std::vector<char> keep(inst.layers[vj], 0);
  for (int j = 0; j < inst.layers[vj]; ++j) {
    double value = fractional_set_cover_value(inst.edges[vj][j], cover_sets);
    if (value <= static_cast<double>(opt_guess) + 1e-7) keep[j] = 1;
  }
  std::vector<int> j_map;
  MmsaInstance work = restrict_layer(inst, vj, keep, &j_map);
  for (int p = 0; p < work.depth - 1; ++p) {
    if (work.layer_is_and(p)) continue;
    for (int v = 0; v < work.layers[p]; ++v)
      if (work.edges[p][v].empty())
        throw RoundingFailure(
            "preprocessing discarded every child of an OR gate at this "
            "guess");
  }

  double a_outer = params.a_outer_override
                       ? *params.a_outer_override
                       : mmsa_a_bound(t, n_for_bounds, params);
  double a_inner = mmsa_a_bound(t - 2, n_for_bounds, params);
  int nj = work.layers[vj], nr = work.layers[vr], nh = work.layers[vt];

  long long cut_cap = params.cut_cap_multiplier *
                      std::max<long long>(1, work.total_size());
  std::vector<LpConstraint> cuts;
  FrameReport frame_report;
  frame_report.depth = t;
  frame_report.opt_guess = opt_guess;
  frame_report.a_outer = a_outer;
  frame_report.a_inner = a_inner;

  for (long long round = 0;; ++round) {
    if (round > cut_cap)
      throw CutLoopExhaustedError("cut rounds exceeded " +
                                  std::to_string(cut_cap));
    LpModel lp;
    std::vector<int> xv(nj), yv(nr), wv(nh);
    for (int h = 0; h < nh; ++h)
      wv[h] = lp.add_variable("w_" + std::to_string(h), 0.0, 1.0);
    for (int j = 0; j < nj; ++j)
      xv[j] = lp.add_variable("x_" + std::to_string(j), 0.0, 1.0);
    for (int i = 0; i < nr; ++i)
      yv[i] = lp.add_variable("y_" + std::to_string(i), 0.0, 1.0);
    {
      std::vector<LinTerm> budget;
      for (int h = 0; h < nh; ++h) budget.push_back({wv[h], 1.0});
      lp.add_constraint(std::move(budget), Sense::Le,
                        static_cast<double>(opt_guess), "w_budget");
    }
    for (int i = 0; i < nr; ++i) {
      std::vector<LinTerm> cover{{yv[i], 1.0}};
      for (int h : work.edges[vr][i]) cover.push_back({wv[h], -1.0});
      lp.add_constraint(std::move(cover), Sense::Le, 0.0);
    }
    for (int j = 0; j < nj; ++j)
      for (int i : work.edges[vj][j])
        lp.add_constraint({{xv[j], 1.0}, {yv[i], -1.0}}, Sense::Le, 0.0);
    for (const LpConstraint& cut : cuts)
      lp.add_constraint(cut.terms, cut.sense, cut.rhs, cut.name);
    std::vector<LinTerm> objective;
    for (int h = 0; h < nh; ++h) objective.push_back({wv[h], 1.0});
    lp.set_objective(false, std::move(objective));

    LpSolution sol = lp_solve(lp);
    if (sol.status != LpStatus::Optimal)
      throw RoundingFailure("frame LP infeasible at this OPT guess");

    double x_threshold = 2.0 * lnn / a_outer;
    std::vector<int> v_plus;
    std::vector<char> in_v_plus(nj, 0);
    for (int j = 0; j < nj; ++j) {
      bool free_gate = work.edges[vj][j].empty();
      if (free_gate || sol.value(xv[j]) >= x_threshold - 1e-12) {
        v_plus.push_back(j);
        in_v_plus[j] = 1;
      }
    }

    // Greedy cover (within the variables) of the OR gates above V+.
    std::vector<int> universe1;
    for (int j : v_plus)
      for (int i : work.edges[vj][j]) universe1.push_back(i);
    universe1 = sorted_unique(std::move(universe1));
    std::vector<int> s1 = greedy_set_cover(universe1, cover_sets);

    ReducedCircuit reduced = reduce_for_recursion(work, v_plus);
    std::vector<int> u_alg;
    MmsaRunReport inner_report;
    if (!reduced.root_satisfied) {
      MmsaParams inner_params = params;
      inner_params.seed = splitmix64(params.seed ^ (round * 0x9e37 + t));
      MmsaSolution inner =
          solve_mmsa(reduced.inst, inner_params,
                     report ? &inner_report : nullptr);
      for (int v : inner.true_variables) u_alg.push_back(reduced.var_map[v]);
    }

    RecursionFrame frame;
    frame.depth = t;
    frame.n_total = n_for_bounds;
    frame.a_outer = a_outer;
    frame.a_inner = a_inner;
    std::vector<int> sbar_vars;
    for (int j = 0; j < nj; ++j)
      if (!in_v_plus[j]) {
        frame.sbar.push_back(j);
        sbar_vars.push_back(xv[j]);
        frame.sbar_lp_value += sol.value(xv[j]);
      }

    std::optional<LpConstraint> cut;
    try {
      cut = cut_oracle(frame, static_cast<int>(u_alg.size()), sbar_vars);
    } catch (const NotViolatedError&) {
      a_outer *= 2.0;
      frame_report.a_outer = a_outer;
      continue;
    }

    if (!cut) {
      std::vector<int> universe2;
      for (int j : u_alg)
        for (int i : work.edges[vj][j]) universe2.push_back(i);
      universe2 = sorted_unique(std::move(universe2));
      std::vector<int> s2 = greedy_set_cover(universe2, cover_sets);
      std::vector<char> chosen(nh, 0);
      for (int h : s1) chosen[h] = 1;
      for (int h : s2) chosen[h] = 1;
      FrameOutcome out;
      for (int h = 0; h < nh; ++h)
        if (chosen[h]) out.variables.push_back(h);
      if (report) {
        frame_report.cut_count = static_cast<int>(cuts.size());
        frame_report.v_plus_size = static_cast<int>(v_plus.size());
        frame_report.u_alg_size = static_cast<int>(u_alg.size());
        frame_report.cover1_size = static_cast<int>(s1.size());
        frame_report.cover2_size = static_cast<int>(s2.size());
        frame_report.accept_threshold = a_outer / (2.0 * lnn);
        frame_report.inner_total_size =
            reduced.root_satisfied ? 0 : reduced.inst.total_size();
        report->frames.push_back(frame_report);
        for (auto& fr : inner_report.frames) report->frames.push_back(fr);
        if (cut_log)
          for (auto& cr : inner_report.cuts) cut_log->push_back(cr);
        if (!inner_report.base_report.steps.empty())
          report->base_report = inner_report.base_report;
      }
      return out;
    }

    if (cut_log) {
      CutRecord record;
      record.frame_depth = t;
      record.opt_guess = opt_guess;
      for (int j : frame.sbar) record.sbar.push_back(j_map[j]);
      record.rhs = cut->rhs;
      record.lhs_before = frame.sbar_lp_value;
      cut_log->push_back(record);
    }
    cuts.push_back(std::move(*cut));
  }
}

MmsaSolution solve_depth2(const MmsaInstance& inst) {
  std::vector<std::vector<int>> sets(inst.layers[1]);
  for (int v = 0; v < inst.layers[0]; ++v)
    for (int h : inst.edges[0][v]) sets[h].push_back(v);
  std::vector<int> universe = identity_ids(inst.layers[0]);
  return make_mmsa_solution(inst, greedy_set_cover(universe, sets));
}

}  // namespace

MmsaSolution solve_mmsa_t(const MmsaInstance& inst, const MmsaParams& params,
                          MmsaRunReport* report) {
  if (inst.depth < 5)
    throw ParameterError("solve_mmsa_t expects depth >= 5");
  if (inst.depth % 2 == 1) {
    MmsaInstance embedded = embed_odd_depth(inst);
    MmsaSolution sol = solve_mmsa(embedded, params, report);
    return make_mmsa_solution(inst, sol.true_variables);
  }
  if (!all_ones_satisfies(inst))
    throw InfeasibleError("circuit unsatisfiable under all-ones");

  double n_for_bounds = static_cast<double>(inst.total_size());
  if (report) {
    report->a_values.assign(inst.depth + 1, 0.0);
    for (int d = 2; d <= inst.depth; ++d)
      report->a_values[d] = mmsa_a_bound(d, n_for_bounds, params);
  }
  long long max_guess = 1;
  while (max_guess < std::max(1, inst.variable_count())) max_guess *= 2;
  std::string last = "guess ladder exhausted";
  for (long long guess = 1; guess <= max_guess; guess *= 2) {
    try {
      // Frames describe the accepted guess only; the cut log keeps every
      // generated cut (cuts from undersized guesses still satisfy the
      // violated-when-added property and carry their guess).
      MmsaRunReport attempt;
      FrameOutcome out =
          run_even_frame(inst, guess, n_for_bounds, params,
                         report ? &attempt : nullptr,
                         report ? &report->cuts : nullptr);
      MmsaSolution sol = make_mmsa_solution(inst, out.variables);
      if (!evaluate_circuit(inst, sol.true_variables))
        throw NumericalFailure("recursion produced an unsatisfying assignment");
      if (report) {
        report->frames = std::move(attempt.frames);
        report->base_report = std::move(attempt.base_report);
      }
      return sol;
    } catch (const RoundingFailure& e) {
      last = e.what();
    } catch (const RoundingExhaustedError& e) {
      last = e.what();
    }
  }
  throw RoundingFailure(last);
}

MmsaSolution solve_mmsa(const MmsaInstance& inst, const MmsaParams& params,
                        MmsaRunReport* report) {
  if (!all_ones_satisfies(inst))
    throw InfeasibleError("circuit unsatisfiable under all-ones");
  if (inst.depth == 2) return solve_depth2(inst);
  if (inst.depth == 3) {
    RbscInstance rb = rbsc_from_mmsa3(inst);
    RbscParams rp;
    rp.seed = params.seed;
    RbscSolution sol = solve_rbsc(rb, rp);
    return make_mmsa_solution(inst, sol.covered_red);
  }
  if (inst.depth == 4) {
    Mmsa4Params mp = params.mmsa4;
    mp.seed = params.seed;
    Mmsa4RunReport base;
    MmsaSolution sol = solve_mmsa4(inst, mp, report ? &base : nullptr);
    if (report) report->base_report = base;
    return sol;
  }
  return solve_mmsa_t(inst, params, report);
}

}  // namespace rbsc
