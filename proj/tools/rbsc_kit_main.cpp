// rbsc-kit: generators, approximation solvers, exact oracles, the Min
// k-Union reduction, and a benchmark harness behind one binary.
//
// Exit codes: 0 success, 2 infeasible, 3 parameter/input error, 4 internal
// cap exhausted.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbsc/bench.hpp"
#include "rbsc/errors.hpp"
#include "rbsc/generators.hpp"
#include "rbsc/io.hpp"
#include "rbsc/mmsa_recursive.hpp"
#include "rbsc/oracles.hpp"
#include "rbsc/rbsc_approx.hpp"
#include "rbsc/reductions.hpp"

using nlohmann::json;
using namespace rbsc;

namespace {

int log_level() {
  const char* env = std::getenv("RBSC_KIT_LOG");
  if (!env) return 0;
  std::string v = env;
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[rbsc-kit] " << msg << "\n";
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::cout << content << "\n";
  else
    write_text_file(out_path, content);
}

json steps_to_json(const RbscRunReport& report) {
  json steps = json::array();
  for (const ProgressStep& s : report.steps) {
    steps.push_back({{"chosen", s.chosen},
                     {"new_red", s.new_red},
                     {"new_blue", s.new_blue},
                     {"ratio", s.ratio},
                     {"lp_value", s.lp_value},
                     {"coefficient", s.coefficient},
                     {"potential", s.potential},
                     {"alpha", s.alpha},
                     {"i0", s.i0},
                     {"randomized", s.randomized}});
  }
  return steps;
}

json mmsa_report_json(const MmsaRunReport& report) {
  json frames = json::array();
  for (const FrameReport& f : report.frames)
    frames.push_back({{"depth", f.depth},
                      {"opt_guess", f.opt_guess},
                      {"a_outer", f.a_outer},
                      {"a_inner", f.a_inner},
                      {"accept_threshold", f.accept_threshold},
                      {"cut_count", f.cut_count},
                      {"v_plus", f.v_plus_size},
                      {"u_alg", f.u_alg_size},
                      {"cover1", f.cover1_size},
                      {"cover2", f.cover2_size},
                      {"inner_size", f.inner_total_size}});
  json cuts = json::array();
  for (const CutRecord& c : report.cuts)
    cuts.push_back({{"frame_depth", c.frame_depth},
                    {"sbar", c.sbar},
                    {"rhs", c.rhs},
                    {"lhs_before", c.lhs_before}});
  json base_steps = json::array();
  for (const StepDiagnostics& s : report.base_report.steps)
    base_steps.push_back({{"case", s.case_used},
                          {"delta", s.delta},
                          {"opt", s.opt},
                          {"x0", s.x0},
                          {"x_j0", s.x_j0},
                          {"x_j", s.x_j},
                          {"j0_weight_floor", s.j0_weight_floor},
                          {"triples", s.nonempty_triples},
                          {"triple_bound", s.triple_bound},
                          {"beta", s.chosen_triple.beta},
                          {"gamma", s.chosen_triple.gamma},
                          {"d", s.chosen_triple.d},
                          {"d_tilde", s.d_tilde},
                          {"h0", s.h0},
                          {"slice_mass", s.slice_mass},
                          {"slice_mass_floor", s.slice_mass_floor},
                          {"j_alg", s.j_alg},
                          {"s_alg", s.s_alg},
                          {"blues_covered", s.blues_covered},
                          {"trials", s.trials}});
  return {{"a_values", report.a_values},
          {"frames", frames},
          {"cuts", cuts},
          {"mmsa4",
           {{"delta", report.base_report.delta},
            {"opt", report.base_report.opt},
            {"a_param", report.base_report.a_param},
            {"fallback", report.base_report.used_fallback_pipeline},
            {"declared_bound", report.base_report.declared_bound},
            {"steps", base_steps}}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Red-Blue Set Cover / MMSA approximation kit"};
  app.require_subcommand(1);

  // ---- gen ----
  CLI::App* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);
  std::uint64_t seed = 1;
  std::string out_path;
  int m = 8, n = 10, k = 6, blue_size = 2, red_size = 3, set_size = 3;
  int opt_target = 2, depth = 5, max_arity = 3;
  double eps = 0.5;
  std::vector<int> layers;
  bool planted = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "PRNG seed")->required();
    cmd->add_option("--out", out_path, "output file (default stdout)");
  };
  CLI::App* gen_rbsc = gen->add_subcommand("rbsc");
  gen_rbsc->add_option("--m", m);
  gen_rbsc->add_option("--n", n);
  gen_rbsc->add_option("--k", k);
  gen_rbsc->add_option("--blue-size", blue_size);
  gen_rbsc->add_option("--red-size", red_size);
  gen_rbsc->add_flag("--planted", planted, "plant a known cover");
  gen_rbsc->add_option("--opt-target", opt_target, "planted red footprint");
  add_common(gen_rbsc);
  CLI::App* gen_mku = gen->add_subcommand("mku");
  gen_mku->add_option("--m", m);
  gen_mku->add_option("--n", n);
  gen_mku->add_option("--k", k);
  gen_mku->add_option("--set-size", set_size);
  add_common(gen_mku);
  CLI::App* gen_gap = gen->add_subcommand("gap");
  gen_gap->add_option("--n", n);
  gen_gap->add_option("--eps", eps);
  gen_gap->add_option("--t", depth);
  add_common(gen_gap);
  CLI::App* gen_mmsa = gen->add_subcommand("mmsa");
  gen_mmsa->add_option("--layers", layers)->required();
  gen_mmsa->add_option("--max-arity", max_arity);
  add_common(gen_mmsa);

  // ---- solve ----
  CLI::App* solve = app.add_subcommand("solve", "run an approximation solver");
  solve->require_subcommand(1);
  std::string in_path, report_path, dump_lp_path;
  int partial = -1;
  auto add_solve_common = [&](CLI::App* cmd) {
    cmd->add_option("--in", in_path, "instance file")->required();
    cmd->add_option("--seed", seed, "PRNG seed");
    cmd->add_option("--report", report_path, "write a JSON run report");
    cmd->add_option("--dump-lp", dump_lp_path,
                    "dump a representative LP model in LP text format");
  };
  CLI::App* solve_rbsc_cmd = solve->add_subcommand("rbsc");
  solve_rbsc_cmd->add_option("--partial", partial, "cover at least K blues");
  add_solve_common(solve_rbsc_cmd);
  CLI::App* solve_mmsa4_cmd = solve->add_subcommand("mmsa4");
  add_solve_common(solve_mmsa4_cmd);
  CLI::App* solve_mmsa_cmd = solve->add_subcommand("mmsa");
  add_solve_common(solve_mmsa_cmd);
  CLI::App* solve_mku_cmd = solve->add_subcommand("mku");
  solve_mku_cmd->add_option("--in", in_path)->required();
  solve_mku_cmd->add_option("--seed", seed)->required();

  // ---- oracle ----
  CLI::App* oracle = app.add_subcommand("oracle", "exact brute force");
  oracle->require_subcommand(1);
  CLI::App* oracle_rbsc = oracle->add_subcommand("rbsc");
  oracle_rbsc->add_option("--in", in_path)->required();
  CLI::App* oracle_mku = oracle->add_subcommand("mku");
  oracle_mku->add_option("--in", in_path)->required();
  CLI::App* oracle_mmsa = oracle->add_subcommand("mmsa");
  oracle_mmsa->add_option("--in", in_path)->required();

  // ---- reduce ----
  CLI::App* reduce = app.add_subcommand("reduce", "problem reductions");
  CLI::App* reduce_mku = reduce->add_subcommand("mku");
  reduce_mku->add_option("--in", in_path)->required();
  reduce_mku->add_option("--seed", seed)->required();
  reduce_mku->add_option("--out", out_path)->required();

  // ---- bench ----
  CLI::App* bench = app.add_subcommand("bench", "benchmark harness");
  std::string suite_path;
  int jobs = 1;
  bench->add_option("--suite", suite_path)->required();
  bench->add_option("--seed", seed)->required();
  bench->add_option("--jobs", jobs);
  bench->add_option("--out", out_path, "JSON report file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_rbsc->parsed()) {
      if (planted) {
        auto [inst, cert] = gen_planted_rbsc(m, n, k, opt_target, seed);
        emit(out_path, canonical_json(inst));
        log_info("planted certificate size " + std::to_string(cert.size()));
      } else {
        emit(out_path,
             canonical_json(gen_random_rbsc(m, n, k, blue_size,
                                            red_size, seed)));
      }
    } else if (gen_mku->parsed()) {
      emit(out_path, canonical_json(gen_random_mku(m, n, k, set_size, seed)));
    } else if (gen_gap->parsed()) {
      GapParams gp;
      gp.n = n;
      gp.eps = eps;
      gp.t = depth;
      gp.seed = seed;
      for (int attempt = 0;; ++attempt) {
        try {
          emit(out_path, canonical_json(gen_gap_instance(gp)));
          break;
        } catch (const DegenerateGraphError& e) {
          if (attempt >= 20) throw;
          log_info(std::string("regenerating with next seed: ") + e.what());
          ++gp.seed;
        }
      }
    } else if (gen_mmsa->parsed()) {
      emit(out_path, canonical_json(gen_random_mmsa(layers, max_arity, seed)));
    } else if (solve_rbsc_cmd->parsed()) {
      auto read = read_rbsc(in_path);
      if (read.normalized) log_info("adjacency normalized on read");
      RbscParams params;
      params.seed = seed;
      RbscRunReport report;
      RbscSolution sol = partial >= 0
                             ? solve_partial_rbsc(read.instance, partial,
                                                  params, &report)
                             : solve_rbsc(read.instance, params, &report);
      if (!dump_lp_path.empty()) {
        try {
          std::vector<int> live;
          for (int j = 0; j < read.instance.set_count(); ++j)
            if (!read.instance.red_adj[j].empty()) live.push_back(j);
          // a bucket-preserving exclusion budget keeps the dumped model
          // representative even when the accepted run zeroed everything
          double dump_n0 = std::max(1, read.instance.red_count);
          PartitionResult part =
              partition_by_red_degree(read.instance, dump_n0, live);
          if (!part.buckets.empty() && !part.buckets[0].reds.empty()) {
            std::vector<char> uncovered(read.instance.blue_count, 1);
            ProgressLp lp = build_progress_lp(
                read.instance, part.buckets[0], part.buckets[0].reds[0],
                static_cast<double>(
                    std::max<long long>(1, report.accepted_guess)),
                uncovered);
            write_text_file(dump_lp_path, lp.model.to_lp_format());
          }
        } catch (const Error& e) {
          log_info(std::string("no LP to dump: ") + e.what());
        }
      }
      json out{{"schema_version", 1},
               {"solver", partial >= 0 ? "rbsc-partial" : "rbsc"},
               {"seed", seed},
               {"cost", sol.cost},
               {"chosen_sets", sol.chosen_sets},
               {"covered_blue", sol.covered_blue},
               {"covered_red", sol.covered_red},
               {"guessed_opt", report.accepted_guess},
               {"n0", report.n0},
               {"free_sets", report.free_sets},
               {"zeroed_sets", report.zeroed_sets},
               {"zeroed_used", report.zeroed_used},
               {"rescue_steps", report.rescue_steps},
               {"bound_full", report.bound_full},
               {"bound_per_round", report.bound_per_round},
               {"steps", steps_to_json(report)}};
      if (report_path.empty())
        std::cout << out.dump(2) << "\n";
      else {
        write_text_file(report_path, out.dump(2));
        std::cout << sol.cost << "\n";
      }
    } else if (solve_mmsa4_cmd->parsed() || solve_mmsa_cmd->parsed()) {
      auto read = read_mmsa(in_path);
      if (solve_mmsa4_cmd->parsed() && read.instance.depth != 4)
        throw ParameterError("solve mmsa4 expects a depth-4 instance");
      MmsaParams params;
      params.seed = seed;
      MmsaRunReport report;
      MmsaSolution sol = solve_mmsa(read.instance, params, &report);
      if (!dump_lp_path.empty() && read.instance.depth == 4) {
        Mmsa4View view = Mmsa4View::from_instance(read.instance);
        std::vector<char> alive(view.nb, 1);
        Mmsa4Lp lp = build_mmsa4_lp(view, alive, 1.0, view.ns);
        write_text_file(dump_lp_path, lp.model.to_lp_format());
      }
      json out{{"schema_version", 1},
               {"solver", "mmsa"},
               {"seed", seed},
               {"cost", sol.cost},
               {"true_variables", sol.true_variables},
               {"report", mmsa_report_json(report)}};
      if (report_path.empty())
        std::cout << out.dump(2) << "\n";
      else {
        write_text_file(report_path, out.dump(2));
        std::cout << sol.cost << "\n";
      }
    } else if (solve_mku_cmd->parsed()) {
      auto read = read_mku(in_path);
      MkuRunReport report;
      std::vector<int> chosen =
          solve_mku_via_rbsc(read.instance, seed, {}, &report);
      json out{{"schema_version", 1},
               {"solver", "mku"},
               {"seed", seed},
               {"chosen_sets", chosen},
               {"cost", mku_union(read.instance, chosen).size()},
               {"rounds", report.rounds.size()},
               {"amplification", report.amplification}};
      std::cout << out.dump(2) << "\n";
    } else if (oracle_rbsc->parsed()) {
      auto read = read_rbsc(in_path);
      RbscOpt opt = bruteforce_rbsc(read.instance);
      json out{{"opt", opt.cost}, {"chosen_sets", opt.chosen_sets}};
      std::cout << out.dump(2) << "\n";
    } else if (oracle_mku->parsed()) {
      auto read = read_mku(in_path);
      json out{{"opt", bruteforce_mku(read.instance)}};
      std::cout << out.dump(2) << "\n";
    } else if (oracle_mmsa->parsed()) {
      auto read = read_mmsa(in_path);
      MmsaOpt opt = bruteforce_mmsa(read.instance);
      json out{{"opt", opt.cost}, {"assignment", opt.assignment}};
      std::cout << out.dump(2) << "\n";
    } else if (reduce_mku->parsed()) {
      auto read = read_mku(in_path);
      auto [rb, params] = reduce_mku_to_rbsc(read.instance, seed);
      write_instance(rb, out_path);
      json out{{"ell", params.ell}, {"k_prime", params.k_prime},
               {"seed", params.seed}};
      std::cout << out.dump(2) << "\n";
    } else if (bench->parsed()) {
      BenchSuite suite = load_suite(suite_path);
      BenchReport report = run_bench(suite, seed, jobs);
      if (!out_path.empty()) write_text_file(out_path, report.to_json());
      std::cout << report.to_text_table();
      if (report.violations > 0) return 4;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
