#include "rbsc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rbsc/errors.hpp"
#include "rbsc/generators.hpp"
#include "rbsc/io.hpp"
#include "rbsc/mmsa_recursive.hpp"
#include "rbsc/oracles.hpp"
#include "rbsc/rbsc_approx.hpp"
#include "rbsc/reductions.hpp"
#include "rbsc/rng.hpp"

namespace rbsc {

using nlohmann::json;

BenchSuite parse_suite(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("suite: malformed JSON: ") + e.what());
  }
  BenchSuite suite;
  suite.version = j.value("version", 1);
  if (!j.contains("rows") || !j.at("rows").is_array())
    throw ParseError("suite: missing 'rows' array");
  for (const json& row : j.at("rows")) {
    BenchRowSpec spec;
    spec.name = row.value("name", "row" + std::to_string(suite.rows.size()));
    spec.gen = row.value("gen", "rbsc");
    spec.solver = row.value("solver", "rbsc");
    spec.oracle = row.value("oracle", "none");
    spec.m = row.value("m", spec.m);
    spec.n = row.value("n", spec.n);
    spec.k = row.value("k", spec.k);
    spec.blue_size = row.value("blue_size", spec.blue_size);
    spec.red_size = row.value("red_size", spec.red_size);
    spec.set_size = row.value("set_size", spec.set_size);
    spec.opt_target = row.value("opt_target", spec.opt_target);
    spec.k_hat = row.value("k_hat", spec.k_hat);
    spec.eps = row.value("eps", spec.eps);
    spec.t = row.value("t", spec.t);
    spec.max_arity = row.value("max_arity", spec.max_arity);
    if (row.contains("layers"))
      for (const json& v : row.at("layers"))
        spec.layers.push_back(v.get<int>());
    suite.rows.push_back(std::move(spec));
  }
  return suite;
}

BenchSuite load_suite(const std::string& path) {
  return parse_suite(read_text_file(path));
}

namespace {

BenchRow run_row(const BenchRowSpec& spec, std::uint64_t row_seed) {
  BenchRow row;
  row.name = spec.name;
  row.solver = spec.solver;
  row.seed = row_seed;
  auto start = std::chrono::steady_clock::now();
  try {
    if (spec.gen == "rbsc" || spec.gen == "planted-rbsc" ||
        spec.gen == "rbsc-uncoverable") {
      RbscInstance inst;
      double planted_bound = -1;
      if (spec.gen == "planted-rbsc") {
        auto [planted_inst, planted_sets] = gen_planted_rbsc(
            spec.m, spec.n, spec.k, spec.opt_target, row_seed);
        inst = std::move(planted_inst);
        planted_bound = static_cast<double>(
            make_rbsc_solution(inst, planted_sets).cost);
      } else {
        inst = gen_random_rbsc(spec.m, spec.n, spec.k, spec.blue_size,
                               spec.red_size, row_seed);
        if (spec.gen == "rbsc-uncoverable") {
          // strip the last blue from every set so the row exercises the
          // infeasible path without aborting the suite
          for (auto& blues : inst.blue_adj)
            while (!blues.empty() && blues.back() == inst.blue_count - 1)
              blues.pop_back();
        }
      }
      row.digest = instance_digest(inst);
      RbscParams params;
      params.seed = row_seed;
      RbscSolution sol = spec.solver == "rbsc-partial"
                             ? solve_partial_rbsc(inst, spec.k_hat, params)
                             : solve_rbsc(inst, params);
      if (spec.solver == "rbsc-partial") {
        if (static_cast<int>(sol.covered_blue.size()) < spec.k_hat)
          throw NumericalFailure("bench: partial cover below k_hat");
      } else if (!rbsc_feasible(inst, sol)) {
        throw NumericalFailure("bench: infeasible rbsc output");
      }
      row.cost = sol.cost;
      if (spec.oracle == "brute")
        row.opt_bound = static_cast<double>(
            spec.solver == "rbsc-partial"
                ? bruteforce_partial_rbsc(inst, spec.k_hat).cost
                : bruteforce_rbsc(inst).cost);
      else if (spec.oracle == "planted")
        row.opt_bound = planted_bound;
      row.theoretical_bound = rbsc_cost_bound(
          inst.set_count(), inst.red_count, inst.blue_count,
          std::max(row.opt_bound, 1.0));
    } else if (spec.gen == "mku") {
      MinKUnionInstance inst =
          gen_random_mku(spec.m, spec.n, spec.k, spec.set_size, row_seed);
      row.digest = instance_digest(inst);
      std::vector<int> chosen = solve_mku_via_rbsc(inst, row_seed);
      row.cost = static_cast<long long>(mku_union(inst, chosen).size());
      if (spec.oracle == "brute")
        row.opt_bound = static_cast<double>(bruteforce_mku(inst));
      double lnk = std::log(std::max(2.0, static_cast<double>(inst.target)));
      row.theoretical_bound =
          16.0 * lnk * lnk *
          rbsc_cost_bound(inst.set_count(), inst.ground_size, inst.target,
                          std::max(row.opt_bound, 1.0));
    } else if (spec.gen == "mmsa" || spec.gen == "gap") {
      MmsaInstance inst;
      if (spec.gen == "gap") {
        GapParams gp;
        gp.n = spec.n;
        gp.eps = spec.eps;
        gp.t = spec.t;
        gp.seed = row_seed;
        for (int attempt = 0;; ++attempt) {
          try {
            inst = gen_gap_instance(gp);
            break;
          } catch (const DegenerateGraphError&) {
            if (attempt >= 20) throw;
            ++gp.seed;
          }
        }
      } else {
        std::vector<int> layers = spec.layers;
        if (layers.empty()) layers.assign(spec.t, std::max(3, spec.n));
        inst = gen_random_mmsa(layers, spec.max_arity, row_seed);
      }
      row.digest = instance_digest(inst);
      validate(inst);
      if (spec.solver == "none") {
        row.status = "ok";
        row.wall_ms = 0;
        return row;
      }
      MmsaParams params;
      params.seed = row_seed;
      MmsaSolution sol = solve_mmsa(inst, params);
      if (!evaluate_circuit(inst, sol.true_variables))
        throw NumericalFailure("bench: unsatisfying mmsa output");
      row.cost = sol.cost;
      if (spec.oracle == "brute")
        row.opt_bound = static_cast<double>(bruteforce_mmsa(inst).cost);
      double nsize = static_cast<double>(inst.total_size());
      row.theoretical_bound =
          std::pow(nsize, 1.0 - mmsa_delta_exponent(inst.depth)) *
          std::pow(log2g(nsize), 3.0) * 16.0 * std::max(row.opt_bound, 1.0);
    } else {
      throw ParameterError("suite: unknown generator '" + spec.gen + "'");
    }
    row.status = "ok";
    if (row.opt_bound > 0) {
      row.ratio = static_cast<double>(row.cost) / row.opt_bound;
      row.bound_violation =
          static_cast<double>(row.cost) > row.theoretical_bound + 1e-9;
    } else if (row.opt_bound == 0) {
      row.ratio = row.cost == 0 ? 1.0 : -1;
      row.bound_violation = row.cost > 0 && row.cost > row.theoretical_bound;
    }
  } catch (const InfeasibleError&) {
    row.status = "infeasible";
  } catch (const Error& e) {
    row.status = std::string("error: ") + e.what();
  }
  auto end = std::chrono::steady_clock::now();
  row.wall_ms =
      std::chrono::duration_cast<std::chrono::microseconds>(end - start)
          .count() /
      1000.0;
  return row;
}

}  // namespace

BenchReport run_bench(const BenchSuite& suite, std::uint64_t seed, int jobs) {
  BenchReport report;
  report.seed = seed;
  report.rows.resize(suite.rows.size());
  std::mutex mu;
  size_t next = 0;
  auto worker = [&]() {
    while (true) {
      size_t idx;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= suite.rows.size()) return;
        idx = next++;
      }
      BenchRow row = run_row(suite.rows[idx],
                             splitmix64(seed ^ (0xbe9c00 + idx)));
      std::lock_guard<std::mutex> lock(mu);
      report.rows[idx] = std::move(row);
    }
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const BenchRow& a, const BenchRow& b) {
              if (a.digest != b.digest) return a.digest < b.digest;
              return a.name < b.name;
            });
  double sum = 0;
  int counted = 0;
  for (const BenchRow& row : report.rows) {
    if (row.ratio > 0) {
      report.max_ratio = std::max(report.max_ratio, row.ratio);
      sum += row.ratio;
      ++counted;
    }
    if (row.bound_violation) ++report.violations;
  }
  report.mean_ratio = counted ? sum / counted : 0;
  return report;
}

std::string BenchReport::to_json() const {
  json rows_json = json::array();
  for (const BenchRow& row : rows) {
    // wall_ms stays out of the JSON so reports are deterministic per
    // (suite, seed); the text table carries the timings.
    rows_json.push_back({{"name", row.name},
                         {"digest", row.digest},
                         {"solver", row.solver},
                         {"seed", row.seed},
                         {"status", row.status},
                         {"cost", row.cost},
                         {"opt_bound", row.opt_bound},
                         {"ratio", row.ratio},
                         {"theoretical_bound", row.theoretical_bound},
                         {"violation", row.bound_violation}});
  }
  json j{{"version", version},
         {"seed", seed},
         {"rows", rows_json},
         {"summary",
          {{"max_ratio", max_ratio},
           {"mean_ratio", mean_ratio},
           {"violations", violations}}}};
  return j.dump(2);
}

std::string BenchReport::to_text_table() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-18s %-16s %-10s %8s %10s %8s %12s %9s\n",
                "name", "digest", "solver", "cost", "opt", "ratio", "bound",
                "ms");
  out << line;
  for (const BenchRow& row : rows) {
    std::snprintf(line, sizeof line,
                  "%-18s %-16s %-10s %8lld %10.2f %8.3f %12.1f %9.2f %s\n",
                  row.name.c_str(), row.digest.c_str(), row.solver.c_str(),
                  row.cost, row.opt_bound, row.ratio, row.theoretical_bound,
                  row.wall_ms, row.status == "ok" ? "" : row.status.c_str());
    out << line;
  }
  std::snprintf(line, sizeof line,
                "max_ratio=%.3f mean_ratio=%.3f violations=%d\n", max_ratio,
                mean_ratio, violations);
  out << line;
  return out.str();
}

}  // namespace rbsc
