#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <iostream>

#include "common.hpp"
#include "rbsc/errors.hpp"
#include "rbsc/io.hpp"
#include "rbsc/oracles.hpp"

using namespace rbsc;
using namespace rbsc::testing;

// Golden values frozen after first generation; the generators are
// deterministic per seed, so these pin the byte-level behaviour.
static const char* kRbscSmall1Digest = "3bf46ea8a2bd638f";
static const long long kRbscSmall1Opt = 6;
static const char* kMkuSmall1Digest = "5740a8a831d109ba";
static const long long kMkuSmall1Opt = 7;

TEST_CASE("rbsc-small-1 digest and optimum are stable") {
  RbscInstance inst = rbsc_small_1();
  validate(inst);
  CHECK(instance_digest(inst) == kRbscSmall1Digest);
  CHECK(bruteforce_rbsc(inst).cost == kRbscSmall1Opt);
}

TEST_CASE("mku-small-1 digest and optimum are stable") {
  MinKUnionInstance inst = mku_small_1();
  validate(inst);
  CHECK(instance_digest(inst) == kMkuSmall1Digest);
  CHECK(bruteforce_mku(inst) == kMkuSmall1Opt);
}

TEST_CASE("generators are deterministic per seed") {
  CHECK(canonical_json(gen_random_rbsc(6, 8, 5, 2, 2, 3)) ==
        canonical_json(gen_random_rbsc(6, 8, 5, 2, 2, 3)));
  CHECK(canonical_json(gen_random_rbsc(6, 8, 5, 2, 2, 3)) !=
        canonical_json(gen_random_rbsc(6, 8, 5, 2, 2, 4)));
  GapParams gp{30, 0.5, 5, 9};
  CHECK(canonical_json(gen_gap_instance(gp)) ==
        canonical_json(gen_gap_instance(gp)));
}

TEST_CASE("red-free generators make every set free") {
  RbscInstance inst = gen_random_rbsc(5, 6, 4, 2, 0, 12);
  CHECK(bruteforce_rbsc(inst).cost == 0);
}

TEST_CASE("k=1 blue repair places blue 0 in every set") {
  RbscInstance inst = gen_random_rbsc(5, 6, 1, 1, 2, 12);
  for (int j = 0; j < inst.set_count(); ++j)
    CHECK(inst.blue_adj[j] == std::vector<int>{0});
}

TEST_CASE("every generated blue is coverable") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    RbscInstance inst = gen_random_rbsc(7, 9, 6, 2, 3, seed);
    auto rev = blue_to_sets(inst);
    for (int b = 0; b < inst.blue_count; ++b) CHECK(!rev[b].empty());
  }
}

TEST_CASE("planted instances carry a feasible certificate") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto [inst, planted] = gen_planted_rbsc(12, 14, 6, 4, seed);
    validate(inst);
    RbscSolution sol = make_rbsc_solution(inst, planted);
    CHECK(rbsc_feasible(inst, sol));
    CHECK(sol.cost <= 4);
  }
}

TEST_CASE("planted zero-red target gives a free cover") {
  auto [inst, planted] = gen_planted_rbsc(8, 10, 5, 0, 3);
  RbscSolution sol = make_rbsc_solution(inst, planted);
  CHECK(rbsc_feasible(inst, sol));
  CHECK(sol.cost == 0);
}

TEST_CASE("gap generator structural invariants") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GapParams gp{30, 0.5, 5, seed};
    MmsaInstance inst;
    try {
      inst = gen_gap_instance(gp);
    } catch (const DegenerateGraphError&) {
      continue;
    }
    validate(inst);
    CHECK(inst.depth == 5);
    CHECK(inst.layers[0] == gp.u1_size());
    // AND layers (edge vertices) have exactly two children.
    for (int g = 0; g < gp.graph_count(); ++g) {
      int and_layer = 2 * g + 1;
      for (const auto& children : inst.edges[and_layer])
        CHECK(children.size() == 2);
      // OR layer classes partition the next AND layer.
      int or_layer = 2 * g;
      std::vector<int> hit(inst.layers[or_layer + 1], 0);
      for (const auto& cls : inst.edges[or_layer])
        for (int e : cls) ++hit[e];
      for (int h : hit) CHECK(h == 1);
    }
  }
}

TEST_CASE("gap generator rejects even depth and bad parameters") {
  CHECK_THROWS_AS(gen_gap_instance({20, 0.5, 4, 1}), ParameterError);
  CHECK_THROWS_AS(gen_gap_instance({20, 1.5, 5, 1}), ParameterError);
}

TEST_CASE("degenerate gap graphs are reported for retry") {
  int throws = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    try {
      gen_gap_instance({3, 0.1, 3, seed});
    } catch (const DegenerateGraphError&) {
      ++throws;
    }
  }
  CHECK(throws >= 1);
}

TEST_CASE("bruteforce_rbsc basics") {
  RbscInstance inst;
  inst.blue_count = 2;
  inst.red_count = 5;
  inst.blue_adj = {{0, 1}};
  inst.red_adj = {{0, 2, 4}};
  CHECK(bruteforce_rbsc(inst).cost == 3);

  RbscInstance bad = inst;
  bad.blue_count = 3;  // blue 2 uncoverable
  CHECK_THROWS_AS(bruteforce_rbsc(bad), InfeasibleError);

  CHECK_THROWS_AS(bruteforce_rbsc(gen_random_rbsc(30, 6, 3, 1, 1, 2), 24),
                  SizeLimitError);
}

TEST_CASE("bruteforce_mku basics") {
  MinKUnionInstance inst;
  inst.ground_size = 6;
  inst.target = 2;
  inst.sets = {{0, 1}, {2, 3}, {4, 5}};
  CHECK(bruteforce_mku(inst) == 4);  // disjoint equal sets: k * size
  inst.target = 3;
  CHECK(bruteforce_mku(inst) == 6);  // k = m: the whole union
  CHECK_THROWS_AS(bruteforce_mku(gen_random_mku(60, 10, 20, 2, 1), 1000),
                  SizeLimitError);
}

TEST_CASE("bruteforce_mmsa finds forced all-ones optima") {
  MmsaInstance c;
  c.depth = 2;
  c.layers = {4, 4};
  c.edges = {{{0}, {1}, {2}, {3}}};
  MmsaOpt opt = bruteforce_mmsa(c);
  CHECK(opt.cost == 4);
}

TEST_CASE("bruteforce_mmsa agrees with bruteforce_rbsc through the depth-3 map") {
  for (std::uint64_t seed = 40; seed < 50; ++seed) {
    RbscInstance inst = gen_random_rbsc(6, 6, 4, 2, 2, seed);
    CHECK(bruteforce_mmsa(rbsc_to_mmsa3(inst)).cost ==
          bruteforce_rbsc(inst).cost);
  }
}

TEST_CASE("random mmsa instances validate and satisfy all-ones") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    MmsaInstance inst = gen_random_mmsa({3, 4, 4, 5, 5, 7}, 3, seed);
    validate(inst);
    std::vector<int> all(inst.variable_count());
    for (int v = 0; v < inst.variable_count(); ++v) all[v] = v;
    CHECK(evaluate_circuit(inst, all));
  }
}

TEST_CASE("canonical mmsa instances are stable") {
  MmsaInstance m4 = mmsa4_small_1();
  MmsaInstance m6 = mmsa6_small_1();
  CHECK(instance_digest(m4) == "6cd00248a0df8e74");
  CHECK(bruteforce_mmsa(m4).cost == 2);
  CHECK(instance_digest(m6) == "bc62bae8cf993e1b");
  CHECK(bruteforce_mmsa(m6).cost == 3);
}
