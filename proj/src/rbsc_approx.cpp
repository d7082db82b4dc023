#include "rbsc/rbsc_approx.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "rbsc/errors.hpp"
#include "rbsc/rng.hpp"

namespace rbsc {

namespace {

const double kOneMinusInvE = 1.0 - std::exp(-1.0);

std::vector<int> all_set_ids(const RbscInstance& inst) {
  std::vector<int> ids(inst.set_count());
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

}  // namespace

PartitionResult partition_by_red_degree(const RbscInstance& inst, double n0) {
  return partition_by_red_degree(inst, n0, all_set_ids(inst));
}

PartitionResult partition_by_red_degree(const RbscInstance& inst, double n0,
                                        const std::vector<int>& live_sets) {
  if (n0 < 1.0) throw ParameterError("partition: n0 must be >= 1");
  PartitionResult out;
  out.input_set_count = static_cast<int>(live_sets.size());

  std::vector<char> red_alive(inst.red_count, 1);
  std::vector<char> in_live(inst.set_count(), 0);
  std::vector<int> degree(inst.set_count(), 0);  // surviving red degree
  long long max_degree = 0;
  for (int j : live_sets) {
    in_live[j] = 1;
    degree[j] = static_cast<int>(inst.red_adj[j].size());
    max_degree = std::max<long long>(max_degree, degree[j]);
  }
  if (max_degree == 0)
    throw DegenerateInputError(
        "partition: every set has an empty red neighborhood");

  // J-degree of each red over the still-unbucketed sets.
  std::vector<int> red_degree(inst.red_count, 0);
  auto rev = red_to_sets(inst);
  for (int i = 0; i < inst.red_count; ++i)
    for (int j : rev[i])
      if (in_live[j]) ++red_degree[i];

  double m = static_cast<double>(live_sets.size());
  double logn = log2g(static_cast<double>(inst.red_count));
  int top = std::max(1, static_cast<int>(std::ceil(std::log2(
                             static_cast<double>(max_degree)))));

  int alpha = 0;
  for (int a = top; a >= 1; --a) {
    double r_hi = std::ldexp(1.0, a);  // 2^a
    long long r_alpha = 1LL << (a - 1);

    // Delete reds whose J-degree exceeds the scale's degree threshold.
    double threshold = m * r_hi * logn / n0;
    for (int i = 0; i < inst.red_count; ++i) {
      if (!red_alive[i]) continue;
      if (static_cast<double>(red_degree[i]) > threshold) {
        red_alive[i] = 0;
        out.excluded_reds.push_back(i);
        for (int j : rev[i])
          if (in_live[j]) --degree[j];
      }
    }

    // Sets that lost their whole surviving red set behave like free sets.
    for (int j : live_sets) {
      if (in_live[j] && degree[j] == 0) {
        in_live[j] = 0;
        out.zeroed_sets.push_back(j);
        for (int i : inst.red_adj[j])
          if (red_alive[i]) --red_degree[i];
      }
    }

    std::vector<int> members;
    for (int j : live_sets)
      if (in_live[j] && degree[j] >= r_alpha && degree[j] <= 2 * r_alpha)
        members.push_back(j);
    if (members.empty()) continue;

    Bucket bucket;
    bucket.alpha_index = alpha++;
    bucket.r_alpha = r_alpha;
    bucket.sets = members;
    for (int i = 0; i < inst.red_count; ++i)
      if (red_alive[i]) bucket.reds.push_back(i);
    out.buckets.push_back(std::move(bucket));

    for (int j : members) {
      in_live[j] = 0;
      for (int i : inst.red_adj[j])
        if (red_alive[i]) --red_degree[i];
    }
  }
  return out;
}

ProgressLp build_progress_lp(const RbscInstance& inst, const Bucket& bucket,
                             int i0, double opt_guess,
                             const std::vector<char>& blue_uncovered) {
  std::vector<char> red_in_bucket(inst.red_count, 0);
  for (int i : bucket.reds) red_in_bucket[i] = 1;

  ProgressLp lp;
  // Sets of the bucket containing i0.
  std::vector<char> x_of_set(inst.set_count(), 0);
  for (int j : bucket.sets) {
    const auto& reds = inst.red_adj[j];
    if (std::binary_search(reds.begin(), reds.end(), i0)) {
      lp.x_sets.push_back(j);
      x_of_set[j] = 1;
    }
  }
  std::vector<int> x_index(inst.set_count(), -1);
  for (size_t t = 0; t < lp.x_sets.size(); ++t) {
    int j = lp.x_sets[t];
    x_index[j] = static_cast<int>(t);
    lp.x_vars.push_back(
        lp.model.add_variable("x_" + std::to_string(j), 0.0, 1.0));
  }

  // Touched reds within R_alpha.
  std::vector<int> y_index(inst.red_count, -1);
  for (int j : lp.x_sets)
    for (int i : inst.red_adj[j]) {
      if (!red_in_bucket[i] || y_index[i] >= 0) continue;
      y_index[i] = static_cast<int>(lp.y_reds.size());
      lp.y_reds.push_back(i);
      lp.y_vars.push_back(
          lp.model.add_variable("y_" + std::to_string(i), 0.0, 1.0));
    }

  // Uncovered blues adjacent to the candidate sets.
  std::vector<int> z_index(inst.blue_count, -1);
  for (int j : lp.x_sets)
    for (int b : inst.blue_adj[j]) {
      if (!blue_uncovered[b] || z_index[b] >= 0) continue;
      z_index[b] = static_cast<int>(lp.z_blues.size());
      lp.z_blues.push_back(b);
      lp.z_vars.push_back(
          lp.model.add_variable("z_" + std::to_string(b), 0.0, 1.0));
    }

  // (3): total red weight within the bucket at most the OPT guess.
  std::vector<LinTerm> red_budget;
  for (int v : lp.y_vars) red_budget.push_back({v, 1.0});
  lp.model.add_constraint(std::move(red_budget), Sense::Le, opt_guess,
                          "red_budget");

  // (4): z_l <= sum of x_j over the candidate sets containing blue l.
  std::vector<std::vector<LinTerm>> cover(lp.z_blues.size());
  for (size_t t = 0; t < lp.x_sets.size(); ++t) {
    int j = lp.x_sets[t];
    for (int b : inst.blue_adj[j])
      if (z_index[b] >= 0)
        cover[z_index[b]].push_back({lp.x_vars[t], -1.0});
  }
  for (size_t zb = 0; zb < lp.z_blues.size(); ++zb) {
    auto terms = cover[zb];
    terms.push_back({lp.z_vars[zb], 1.0});
    lp.model.add_constraint(std::move(terms), Sense::Le, 0.0,
                            "blue_" + std::to_string(lp.z_blues[zb]));
  }

  // (5): x_j <= y_i for every bucket red of j.
  for (size_t t = 0; t < lp.x_sets.size(); ++t) {
    int j = lp.x_sets[t];
    for (int i : inst.red_adj[j])
      if (y_index[i] >= 0)
        lp.model.add_constraint(
            {{lp.x_vars[t], 1.0}, {lp.y_vars[y_index[i]], -1.0}}, Sense::Le,
            0.0);
  }

  std::vector<LinTerm> objective;
  for (int v : lp.z_vars) objective.push_back({v, 1.0});
  lp.model.set_objective(true, std::move(objective));
  return lp;
}

namespace {

// Exact survival probabilities for the independent rounding, conditioned on
// the include/exclude decisions made so far.
struct RoundingState {
  const RbscInstance& inst;
  const ProgressLp& lp;
  std::vector<char> red_in_bucket;
  std::vector<char> blue_live;  // uncovered blues in the z support
  std::vector<double> x;        // LP values per candidate
  double coefficient;

  RoundingState(const RbscInstance& inst_, const Bucket& bucket,
                const ProgressLp& lp_, const LpSolution& sol,
                const std::vector<char>& blue_uncovered, double coef)
      : inst(inst_), lp(lp_), red_in_bucket(inst_.red_count, 0),
        blue_live(inst_.blue_count, 0), coefficient(coef) {
    for (int i : bucket.reds) red_in_bucket[i] = 1;
    for (int b : lp.z_blues)
      if (blue_uncovered[b]) blue_live[b] = 1;
    x.resize(lp.x_sets.size());
    for (size_t t = 0; t < lp.x_sets.size(); ++t) {
      double v = sol.value(lp.x_vars[t]);
      x[t] = std::clamp(v, 0.0, 1.0);
    }
  }

  // decision[t]: -1 undecided, 0 exclude, 1 include.
  double expected_potential(const std::vector<int>& decision) const {
    double exp_red = 0, exp_blue = 0;
    // reds restricted to the bucket
    std::vector<double> miss_red(lp.y_reds.size(), 1.0);
    std::vector<char> hit_red(lp.y_reds.size(), 0);
    std::vector<double> miss_blue(lp.z_blues.size(), 1.0);
    std::vector<char> hit_blue(lp.z_blues.size(), 0);
    std::vector<int> y_index(inst.red_count, -1), z_index(inst.blue_count, -1);
    for (size_t i = 0; i < lp.y_reds.size(); ++i) y_index[lp.y_reds[i]] = i;
    for (size_t b = 0; b < lp.z_blues.size(); ++b) z_index[lp.z_blues[b]] = b;
    for (size_t t = 0; t < lp.x_sets.size(); ++t) {
      int j = lp.x_sets[t];
      if (decision[t] == 0) continue;
      bool included = decision[t] == 1;
      for (int i : inst.red_adj[j]) {
        int yi = y_index[i];
        if (yi < 0) continue;
        if (included) hit_red[yi] = 1;
        else miss_red[yi] *= 1.0 - x[t];
      }
      for (int b : inst.blue_adj[j]) {
        int zb = z_index[b];
        if (zb < 0 || !blue_live[b]) continue;
        if (included) hit_blue[zb] = 1;
        else miss_blue[zb] *= 1.0 - x[t];
      }
    }
    for (size_t i = 0; i < lp.y_reds.size(); ++i)
      exp_red += hit_red[i] ? 1.0 : 1.0 - miss_red[i];
    for (size_t b = 0; b < lp.z_blues.size(); ++b)
      exp_blue += hit_blue[b] ? 1.0 : 1.0 - miss_blue[b];
    return exp_red - coefficient * exp_blue;
  }

  double expected_blue(const std::vector<int>& decision) const {
    std::vector<double> miss_blue(lp.z_blues.size(), 1.0);
    std::vector<char> hit_blue(lp.z_blues.size(), 0);
    std::vector<int> z_index(inst.blue_count, -1);
    for (size_t b = 0; b < lp.z_blues.size(); ++b) z_index[lp.z_blues[b]] = b;
    for (size_t t = 0; t < lp.x_sets.size(); ++t) {
      int j = lp.x_sets[t];
      if (decision[t] == 0) continue;
      for (int b : inst.blue_adj[j]) {
        int zb = z_index[b];
        if (zb < 0 || !blue_live[b]) continue;
        if (decision[t] == 1) hit_blue[zb] = 1;
        else miss_blue[zb] *= 1.0 - x[t];
      }
    }
    double e = 0;
    for (size_t b = 0; b < lp.z_blues.size(); ++b)
      e += hit_blue[b] ? 1.0 : 1.0 - miss_blue[b];
    return e;
  }
};

ProgressStep finish_step(const RbscInstance& inst, const Bucket& bucket,
                         const std::vector<char>& blue_uncovered,
                         std::vector<int> chosen, double coefficient) {
  std::vector<char> red_in_bucket(inst.red_count, 0);
  for (int i : bucket.reds) red_in_bucket[i] = 1;
  std::vector<char> red_hit(inst.red_count, 0), blue_hit(inst.blue_count, 0);
  for (int j : chosen) {
    for (int i : inst.red_adj[j])
      if (red_in_bucket[i]) red_hit[i] = 1;
    for (int b : inst.blue_adj[j])
      if (blue_uncovered[b]) blue_hit[b] = 1;
  }
  ProgressStep step;
  step.chosen = std::move(chosen);
  for (char c : red_hit) step.new_red += c;
  for (char c : blue_hit) step.new_blue += c;
  step.coefficient = coefficient;
  step.potential = static_cast<double>(step.new_red) -
                   coefficient * static_cast<double>(step.new_blue);
  step.ratio = step.new_blue > 0
                   ? static_cast<double>(step.new_red) /
                         static_cast<double>(step.new_blue)
                   : std::numeric_limits<double>::infinity();
  return step;
}

}  // namespace

ProgressStep round_conditional_expectation(
    const RbscInstance& inst, const Bucket& bucket, int i0,
    const ProgressLp& lp, const LpSolution& sol, double opt_guess,
    const std::vector<char>& blue_uncovered, int uncovered_count,
    int m_total, int n_total) {
  if (uncovered_count <= 0)
    throw ParameterError("rounding called with no uncovered blues");
  double logn = log2g(static_cast<double>(n_total));
  double coefficient =
      2.0 *
      std::cbrt(4.0 * static_cast<double>(m_total) * std::pow(logn, 4.0)) *
      opt_guess / (kOneMinusInvE * static_cast<double>(uncovered_count));

  RoundingState state(inst, bucket, lp, sol, blue_uncovered, coefficient);
  std::vector<int> decision(lp.x_sets.size(), -1);
  for (size_t t = 0; t < lp.x_sets.size(); ++t) {
    decision[t] = 1;
    double with = state.expected_potential(decision);
    double blue_with = state.expected_blue(decision);
    decision[t] = 0;
    double without = state.expected_potential(decision);
    double blue_without = state.expected_blue(decision);
    if (with < without - 1e-12 ||
        (with < without + 1e-12 && blue_with > blue_without + 1e-12))
      decision[t] = 1;
  }

  std::vector<int> chosen;
  for (size_t t = 0; t < lp.x_sets.size(); ++t)
    if (decision[t] == 1) chosen.push_back(lp.x_sets[t]);

  ProgressStep step =
      finish_step(inst, bucket, blue_uncovered, std::move(chosen), coefficient);
  step.alpha = bucket.alpha_index;
  step.i0 = i0;
  step.lp_value = sol.objective_value;
  if (step.new_blue < 1 || step.potential > 1e-9)
    throw RoundingFailure(
        "conditional expectation walk cannot realize nonpositive potential "
        "(OPT guess too small)");
  return step;
}

double rbsc_cost_bound(int m, int n, int k, double opt, double c) {
  return c * std::cbrt(static_cast<double>(m)) *
         std::pow(log2g(static_cast<double>(n)), 4.0 / 3.0) *
         log2g(static_cast<double>(k)) * opt;
}

namespace {

struct GuessRun {
  std::vector<int> chosen;
  std::vector<ProgressStep> steps;
  std::vector<int> zeroed;
  std::vector<int> zeroed_used;
  double n0 = 0;
  int rescue_steps = 0;
};

// One complete iterative pass at a fixed OPT guess; throws
// RoundingFailure when the guess cannot complete.
GuessRun run_guess(const RbscInstance& inst, long long guess, int k_hat,
                   const RbscParams& params, std::vector<char> blue_uncovered,
                   int covered_so_far, bool top_guess, Rng* rng) {
  GuessRun run;
  int m_total = inst.set_count();
  int n_total = inst.red_count;
  int k_total = inst.blue_count;
  double logn = log2g(n_total), logk = log2g(k_total);

  auto uncovered_count = [&]() {
    int c = 0;
    for (char u : blue_uncovered) c += u;
    return c;
  };

  // Sets with more reds than the OPT guess are discarded upfront; the
  // partial variant needs this and the full variant is unaffected.
  std::vector<int> live;
  for (int j = 0; j < m_total; ++j)
    if (!inst.red_adj[j].empty() &&
        static_cast<long long>(inst.red_adj[j].size()) <= guess)
      live.push_back(j);
  if (live.empty())
    throw RoundingFailure("no usable sets at this OPT guess");

  run.n0 = static_cast<double>(guess) * std::cbrt(static_cast<double>(m_total)) *
           std::pow(logn, 4.0 / 3.0) * logk * logk;
  PartitionResult part = partition_by_red_degree(inst, run.n0, live);
  run.zeroed = part.zeroed_sets;

  std::vector<char> red_covered(inst.red_count, 0);
  auto take = [&](const std::vector<int>& sets) {
    for (int j : sets) {
      run.chosen.push_back(j);
      for (int b : inst.blue_adj[j]) {
        if (blue_uncovered[b]) {
          blue_uncovered[b] = 0;
          ++covered_so_far;
        }
      }
      for (int i : inst.red_adj[j]) red_covered[i] = 1;
    }
  };

  // Zeroed sets cost only already-excluded reds. They are consulted lazily,
  // by best blue-per-red rate, when no progress LP has positive value.
  auto pick_zeroed = [&]() -> bool {
    int best_j = -1;
    double best_rate = -1.0;
    for (int j : part.zeroed_sets) {
      long long new_blue = 0, new_red = 0;
      for (int b : inst.blue_adj[j]) new_blue += blue_uncovered[b];
      if (new_blue == 0) continue;
      for (int i : inst.red_adj[j]) new_red += !red_covered[i];
      double rate = static_cast<double>(new_blue) /
                    (1.0 + static_cast<double>(new_red));
      if (rate > best_rate + 1e-12) {
        best_rate = rate;
        best_j = j;
      }
    }
    if (best_j < 0) return false;
    take({best_j});
    run.zeroed_used.push_back(best_j);
    return true;
  };

  double a_hat = std::cbrt(4.0 * static_cast<double>(m_total) * logn);
  auto rev = red_to_sets(inst);

  while (covered_so_far < k_hat) {
    int remaining = uncovered_count();
    // Argmax of LP(alpha, i0) / r_alpha over buckets and i0, deduplicating
    // i0 candidates with an identical candidate set.
    double best_score = -1.0;
    int best_alpha = -1, best_i0 = -1;
    ProgressLp best_lp;
    LpSolution best_sol;
    for (const Bucket& bucket : part.buckets) {
      std::map<std::vector<int>, double> seen;
      std::vector<char> in_bucket_set(inst.set_count(), 0);
      for (int j : bucket.sets) in_bucket_set[j] = 1;
      for (int i0 : bucket.reds) {
        std::vector<int> candidates;
        for (int j : rev[i0])
          if (in_bucket_set[j]) candidates.push_back(j);
        if (candidates.empty()) continue;  // LP optimum is 0
        bool touches_uncovered = false;
        for (int j : candidates) {
          for (int b : inst.blue_adj[j])
            if (blue_uncovered[b]) { touches_uncovered = true; break; }
          if (touches_uncovered) break;
        }
        if (!touches_uncovered) continue;  // LP optimum is 0
        auto it = seen.find(candidates);
        double value;
        ProgressLp lp;
        LpSolution sol;
        if (it != seen.end()) {
          value = it->second;
          if (value / static_cast<double>(bucket.r_alpha) <=
              best_score + 1e-12)
            continue;  // cannot beat the incumbent; skip the re-solve
        }
        lp = build_progress_lp(inst, bucket, i0, static_cast<double>(guess),
                               blue_uncovered);
        sol = lp_solve(lp.model);
        if (sol.status != LpStatus::Optimal)
          throw NumericalFailure("progress LP not optimal");
        value = sol.objective_value;
        seen[candidates] = value;
        double score = value / static_cast<double>(bucket.r_alpha);
        if (score > best_score + 1e-12) {
          best_score = score;
          best_alpha = bucket.alpha_index;
          best_i0 = i0;
          best_lp = std::move(lp);
          best_sol = std::move(sol);
        }
      }
    }

    if (best_alpha < 0 || best_score <= 1e-9) {
      if (pick_zeroed()) continue;
      if (top_guess) {
        // Greedy rescue so the ladder always terminates; tracked in the
        // report and exercised only in degenerate corners.
        int best_j = -1;
        double best_rate = std::numeric_limits<double>::infinity();
        for (int j = 0; j < m_total; ++j) {
          int gain = 0;
          for (int b : inst.blue_adj[j])
            if (blue_uncovered[b]) ++gain;
          if (gain == 0) continue;
          double rate =
              static_cast<double>(inst.red_adj[j].size()) / gain;
          if (rate < best_rate) {
            best_rate = rate;
            best_j = j;
          }
        }
        if (best_j < 0)
          throw InfeasibleError("uncoverable blue elements remain");
        take({best_j});
        ++run.rescue_steps;
        continue;
      }
      throw RoundingFailure("no positive progress LP at this OPT guess");
    }

    const Bucket& bucket = part.buckets[best_alpha];
    bool final_partial = false;
    double expected_blue = 0;
    if (k_hat < k_total || covered_so_far + remaining > k_hat) {
      // Partial variant: check whether this rounding would overshoot.
      RoundingState probe(inst, bucket, best_lp, best_sol, blue_uncovered,
                          0.0);
      std::vector<int> undecided(best_lp.x_sets.size(), -1);
      expected_blue = probe.expected_blue(undecided);
      int still_needed = k_hat - covered_so_far;
      final_partial = k_hat < k_total && expected_blue > 2.0 * still_needed;
    }

    if (!final_partial) {
      ProgressStep step = round_conditional_expectation(
          inst, bucket, best_i0, best_lp, best_sol,
          static_cast<double>(guess), blue_uncovered, remaining, m_total,
          n_total);
      take(step.chosen);
      run.steps.push_back(std::move(step));
      continue;
    }

    // Final partial iteration: repeat the randomized rounding until blue
    // coverage reaches half its expectation with reds inside the band.
    double mu_small = 0;  // LP mass below the J_+ threshold
    double jplus_threshold =
        static_cast<double>(guess) /
        (static_cast<double>(bucket.r_alpha) * a_hat);
    for (size_t t = 0; t < best_lp.x_sets.size(); ++t) {
      double xv = best_sol.value(best_lp.x_vars[t]);
      if (xv < jplus_threshold) mu_small += xv;
    }
    double red_band = static_cast<double>(bucket.r_alpha) * a_hat +
                      2.0 * static_cast<double>(bucket.r_alpha) *
                          (2.0 * mu_small + 2.0);
    bool accepted = false;
    for (int trial = 0; trial < params.partial_trial_cap; ++trial) {
      std::vector<int> sel;
      for (size_t t = 0; t < best_lp.x_sets.size(); ++t)
        if (rng->unit() < best_sol.value(best_lp.x_vars[t]))
          sel.push_back(best_lp.x_sets[t]);
      ProgressStep step =
          finish_step(inst, bucket, blue_uncovered, std::move(sel), 0.0);
      if (static_cast<double>(step.new_blue) >= expected_blue / 2.0 &&
          static_cast<double>(step.new_red) <= red_band &&
          step.new_blue >= 1) {
        step.alpha = bucket.alpha_index;
        step.i0 = best_i0;
        step.lp_value = best_sol.objective_value;
        step.randomized = true;
        take(step.chosen);
        run.steps.push_back(std::move(step));
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw RoundingFailure(
          "partial final-iteration rounding exhausted its trial cap");
  }
  return run;
}

RbscSolution solve_cover_target(const RbscInstance& inst, int k_hat,
                                const RbscParams& params,
                                RbscRunReport* report) {
  int m = inst.set_count(), n = inst.red_count, k = inst.blue_count;
  auto rev_blue = blue_to_sets(inst);
  int coverable = 0;
  for (int b = 0; b < k; ++b)
    if (!rev_blue[b].empty()) ++coverable;
  if (k_hat >= k) {
    for (int b = 0; b < k; ++b)
      if (rev_blue[b].empty())
        throw InfeasibleError("blue element " + std::to_string(b) +
                              " belongs to no set");
  } else if (coverable < k_hat) {
    throw InfeasibleError("fewer than k_hat blue elements are coverable");
  }

  RbscRunReport local;
  RbscRunReport* rep = report ? report : &local;
  *rep = RbscRunReport{};

  std::vector<char> blue_uncovered(k, 1);
  std::vector<int> chosen;
  int covered = 0;
  // Free sets: zero red cost, taken unconditionally.
  for (int j = 0; j < m; ++j) {
    if (!inst.red_adj[j].empty()) continue;
    rep->free_sets.push_back(j);
    chosen.push_back(j);
    for (int b : inst.blue_adj[j])
      if (blue_uncovered[b]) {
        blue_uncovered[b] = 0;
        ++covered;
      }
  }

  if (covered >= k_hat) {
    RbscSolution sol = make_rbsc_solution(inst, std::move(chosen));
    rep->accepted_guess = 0;
    return sol;
  }

  Rng rng(params.seed);
  long long max_guess = 1;
  while (max_guess < std::max(1, n)) max_guess *= 2;
  std::string last_error = "guess ladder exhausted";
  for (long long guess = 1;; guess *= 2) {
    bool top = guess >= max_guess;
    try {
      Rng guess_rng = rng.fork(static_cast<std::uint64_t>(guess));
      GuessRun run = run_guess(inst, guess, k_hat, params, blue_uncovered,
                               covered, top, &guess_rng);
      std::vector<int> all_chosen = chosen;
      for (int j : run.chosen) all_chosen.push_back(j);
      RbscSolution sol = make_rbsc_solution(inst, std::move(all_chosen));
      rep->accepted_guess = guess;
      rep->n0 = run.n0;
      rep->zeroed_sets = run.zeroed;
      rep->zeroed_used = std::move(run.zeroed_used);
      rep->steps = std::move(run.steps);
      rep->rescue_steps = run.rescue_steps;
      rep->bound_full =
          rbsc_cost_bound(m, n, k, static_cast<double>(guess),
                          params.approx_constant);
      rep->bound_per_round = params.approx_constant *
                            std::cbrt(static_cast<double>(m)) *
                            std::pow(log2g(n), 4.0 / 3.0) *
                            static_cast<double>(guess);
      return sol;
    } catch (const RoundingFailure& e) {
      last_error = e.what();
      if (top) break;
    }
  }
  throw RoundingFailure(last_error);
}

}  // namespace

bool rbsc_guess_completes(const RbscInstance& inst, long long guess,
                          const RbscParams& params) {
  std::vector<char> blue_uncovered(inst.blue_count, 1);
  int covered = 0;
  for (int j = 0; j < inst.set_count(); ++j) {
    if (!inst.red_adj[j].empty()) continue;
    for (int b : inst.blue_adj[j])
      if (blue_uncovered[b]) {
        blue_uncovered[b] = 0;
        ++covered;
      }
  }
  if (covered >= inst.blue_count) return true;
  try {
    Rng rng(params.seed);
    Rng guess_rng = rng.fork(static_cast<std::uint64_t>(guess));
    run_guess(inst, guess, inst.blue_count, params, blue_uncovered, covered,
              false, &guess_rng);
    return true;
  } catch (const Error&) {
    return false;
  }
}

RbscSolution solve_rbsc(const RbscInstance& inst, const RbscParams& params,
                        RbscRunReport* report) {
  if (inst.blue_count == 0) {
    if (report) *report = RbscRunReport{};
    return make_rbsc_solution(inst, {});
  }
  return solve_cover_target(inst, inst.blue_count, params, report);
}

RbscSolution solve_partial_rbsc(const RbscInstance& inst, int k_hat,
                                const RbscParams& params,
                                RbscRunReport* report) {
  if (k_hat < 0 || k_hat > inst.blue_count)
    throw ParameterError("solve_partial_rbsc: k_hat out of range");
  if (k_hat == 0) {
    if (report) *report = RbscRunReport{};
    return make_rbsc_solution(inst, {});
  }
  return solve_cover_target(inst, k_hat, params, report);
}

}  // namespace rbsc
