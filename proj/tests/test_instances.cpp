#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "common.hpp"
#include "rbsc/errors.hpp"
#include "rbsc/io.hpp"
#include "rbsc/oracles.hpp"
#include "rbsc/rng.hpp"

using namespace rbsc;
using rbsc::testing::rbsc_small_1;

namespace {

RbscInstance tiny_ok() {
  RbscInstance inst;
  inst.blue_count = 1;
  inst.red_count = 1;
  inst.blue_adj = {{0}};
  inst.red_adj = {{0}};
  return inst;
}

}  // namespace

TEST_CASE("validate accepts a minimal instance") {
  CHECK_NOTHROW(validate(tiny_ok()));
}

TEST_CASE("validate rejects out-of-range blue ids") {
  RbscInstance inst = tiny_ok();
  inst.blue_adj[0] = {1};  // == blue_count
  CHECK_THROWS_AS(validate(inst), StructuralError);
}

TEST_CASE("validate rejects childless OR gates") {
  MmsaInstance c;
  c.depth = 3;
  c.layers = {2, 2, 2};
  c.edges = {{{0}, {}}, {{0}, {1}}};
  CHECK_THROWS_AS(validate(c), StructuralError);
}

TEST_CASE("childless AND gates are vacuously true and legal") {
  MmsaInstance c;
  c.depth = 3;
  c.layers = {1, 1, 1};
  c.edges = {{{0}}, {{}}};  // the set gate has no red children
  CHECK_NOTHROW(validate(c));
  CHECK(evaluate_circuit(c, {}));
}

TEST_CASE("all-ones assignment always satisfies a valid circuit") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    MmsaInstance c = gen_random_mmsa({3, 4, 4, 6}, 3, seed);
    validate(c);
    std::vector<int> all(c.variable_count());
    for (int i = 0; i < c.variable_count(); ++i) all[i] = i;
    CHECK(evaluate_circuit(c, all));
  }
}

TEST_CASE("empty assignment fails when a variable is genuinely needed") {
  MmsaInstance c;
  c.depth = 2;
  c.layers = {1, 1};
  c.edges = {{{0}}};
  CHECK_FALSE(evaluate_circuit(c, {}));
  CHECK(evaluate_circuit(c, {0}));
}

TEST_CASE("evaluate_circuit is monotone") {
  Rng rng(99);
  for (int round = 0; round < 50; ++round) {
    MmsaInstance c = gen_random_mmsa({3, 4, 5}, 3, 1000 + round);
    int nv = c.variable_count();
    std::vector<int> small, large;
    for (int v = 0; v < nv; ++v) {
      bool in_small = rng.unit() < 0.4;
      bool in_large = in_small || rng.unit() < 0.4;
      if (in_small) small.push_back(v);
      if (in_large) large.push_back(v);
    }
    if (evaluate_circuit(c, small)) CHECK(evaluate_circuit(c, large));
  }
}

TEST_CASE("rbsc_to_mmsa3 has the forced size 1+k+m+n") {
  RbscInstance inst = rbsc_small_1();
  MmsaInstance c = rbsc_to_mmsa3(inst);
  CHECK(c.total_size() == 1 + inst.blue_count + inst.set_count() +
                              inst.red_count);
  CHECK(c.depth == 3);
}

TEST_CASE("feasible RBSC solutions satisfy the translated circuit") {
  Rng rng(7);
  int checked = 0;
  for (int round = 0; round < 100; ++round) {
    RbscInstance inst = gen_random_rbsc(6, 8, 4, 2, 2, 5000 + round);
    MmsaInstance c = rbsc_to_mmsa3(inst);
    // random feasible solution: every blue picks one covering set
    auto rev = blue_to_sets(inst);
    std::vector<int> chosen;
    bool ok = true;
    for (int b = 0; b < inst.blue_count; ++b) {
      if (rev[b].empty()) { ok = false; break; }
      chosen.push_back(rev[b][rng.below(static_cast<std::uint32_t>(
          rev[b].size()))]);
    }
    if (!ok) continue;
    RbscSolution sol = make_rbsc_solution(inst, sorted_unique(chosen));
    CHECK(evaluate_circuit(c, sol.covered_red));
    ++checked;
  }
  CHECK(checked >= 90);
}

TEST_CASE("feasibility transfers in both directions at depth 3") {
  // V satisfies the circuit iff some sub-family covers all blues using only
  // reds within V; checked by exhaustive enumeration.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RbscInstance inst = gen_random_rbsc(5, 6, 4, 2, 2, 800 + seed);
    MmsaInstance c = rbsc_to_mmsa3(inst);
    for (int mask = 0; mask < (1 << inst.red_count); ++mask) {
      std::vector<int> reds;
      for (int r = 0; r < inst.red_count; ++r)
        if (mask & (1 << r)) reds.push_back(r);
      bool circuit = evaluate_circuit(c, reds);
      bool witness = false;
      for (int fam = 0; fam < (1 << inst.set_count()) && !witness; ++fam) {
        std::vector<char> blue(inst.blue_count, 0);
        bool reds_ok = true;
        for (int j = 0; j < inst.set_count() && reds_ok; ++j) {
          if (!(fam & (1 << j))) continue;
          for (int i : inst.red_adj[j])
            if (!(mask & (1 << i))) { reds_ok = false; break; }
          if (reds_ok)
            for (int b : inst.blue_adj[j]) blue[b] = 1;
        }
        if (!reds_ok) continue;
        witness = true;
        for (char cv : blue)
          if (!cv) { witness = false; break; }
      }
      CHECK(circuit == witness);
    }
  }
}

TEST_CASE("mmsa3 optimum equals rbsc optimum") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    RbscInstance inst = gen_random_rbsc(6, 7, 4, 2, 2, 300 + seed);
    long long rb = bruteforce_rbsc(inst).cost;
    long long mm = bruteforce_mmsa(rbsc_to_mmsa3(inst)).cost;
    CHECK(rb == mm);
  }
}

TEST_CASE("round trip identity is bit exact for all kinds") {
  auto tmp = std::filesystem::temp_directory_path();
  {
    RbscInstance inst = rbsc_small_1();
    std::string path = (tmp / "rt_rbsc.json").string();
    write_instance(inst, path);
    auto read = read_rbsc(path);
    CHECK_FALSE(read.normalized);
    CHECK(canonical_json(read.instance) == canonical_json(inst));
  }
  {
    MmsaInstance inst = rbsc::testing::mmsa4_small_1();
    std::string path = (tmp / "rt_mmsa.json").string();
    write_instance(inst, path);
    auto read = read_mmsa(path);
    CHECK_FALSE(read.normalized);
    CHECK(canonical_json(read.instance) == canonical_json(inst));
  }
  {
    MinKUnionInstance inst = rbsc::testing::mku_small_1();
    std::string path = (tmp / "rt_mku.json").string();
    write_instance(inst, path);
    auto read = read_mku(path);
    CHECK_FALSE(read.normalized);
    CHECK(canonical_json(read.instance) == canonical_json(inst));
  }
}

TEST_CASE("malformed JSON raises ParseError") {
  CHECK_THROWS_AS(parse_rbsc("{\"kind\":\"rbsc\",").instance.set_count(),
                  ParseError);
  CHECK_THROWS_AS(parse_rbsc("{\"kind\":\"rbsc\",\"k\":1,\"n\":1}"),
                  ParseError);
  CHECK_THROWS_AS(parse_mmsa("{\"kind\":\"rbsc\"}"), ParseError);
}

TEST_CASE("unsorted adjacency is normalized with a flag") {
  auto read = parse_rbsc(
      R"({"kind":"rbsc","k":3,"n":3,"sets":[{"blue":[2,0,0],"red":[1]}]})");
  CHECK(read.normalized);
  CHECK(read.instance.blue_adj[0] == std::vector<int>{0, 2});
}

TEST_CASE("reverse adjacency is consistent with forward adjacency") {
  RbscInstance inst = rbsc_small_1();
  auto rev_b = blue_to_sets(inst);
  auto rev_r = red_to_sets(inst);
  for (int j = 0; j < inst.set_count(); ++j) {
    for (int b : inst.blue_adj[j])
      CHECK(std::binary_search(rev_b[b].begin(), rev_b[b].end(), j));
    for (int r : inst.red_adj[j])
      CHECK(std::binary_search(rev_r[r].begin(), rev_r[r].end(), j));
  }
}

TEST_CASE("rbsc_from_mmsa3 inverts rbsc_to_mmsa3") {
  RbscInstance inst = rbsc_small_1();
  RbscInstance back = rbsc_from_mmsa3(rbsc_to_mmsa3(inst));
  CHECK(canonical_json(back) == canonical_json(inst));
}

TEST_CASE("read_instance dispatches on the kind field") {
  auto tmp = std::filesystem::temp_directory_path();
  std::string path = (tmp / "dispatch.json").string();
  write_instance(rbsc_small_1(), path);
  AnyReadResult any = read_instance(path);
  CHECK(any.kind == InstanceKind::Rbsc);
  write_instance(rbsc::testing::mku_small_1(), path);
  CHECK(read_instance(path).kind == InstanceKind::Mku);
  write_instance(rbsc::testing::mmsa4_small_1(), path);
  CHECK(read_instance(path).kind == InstanceKind::Mmsa);
  write_text_file(path, "{\"kind\":\"mystery\"}");
  CHECK_THROWS_AS(read_instance(path), ParseError);
}

TEST_CASE("free sets translate to vacuously true AND gates") {
  RbscInstance inst;
  inst.blue_count = 2;
  inst.red_count = 2;
  inst.blue_adj = {{0, 1}, {0}};
  inst.red_adj = {{}, {0, 1}};
  MmsaInstance c = rbsc_to_mmsa3(inst);
  CHECK_NOTHROW(validate(c));
  CHECK(evaluate_circuit(c, {}));  // the free set satisfies every blue
}

TEST_CASE("empty blue side solves to the empty solution") {
  RbscInstance inst;
  inst.blue_count = 0;
  inst.red_count = 3;
  inst.blue_adj = {{}};
  inst.red_adj = {{0, 1}};
  CHECK_NOTHROW(validate(inst));
  RbscSolution sol = solve_rbsc(inst);
  CHECK(sol.cost == 0);
  CHECK(sol.chosen_sets.empty());
}

TEST_CASE("round trips hold across random instances of every kind") {
  auto tmp = std::filesystem::temp_directory_path();
  std::string path = (tmp / "rt_random.json").string();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RbscInstance rb = gen_random_rbsc(6 + seed % 5, 8, 5, 2, 2, seed);
    write_instance(rb, path);
    CHECK(canonical_json(read_rbsc(path).instance) == canonical_json(rb));

    MinKUnionInstance mku = gen_random_mku(6, 9, 3, 3, seed);
    write_instance(mku, path);
    CHECK(canonical_json(read_mku(path).instance) == canonical_json(mku));

    MmsaInstance mmsa = gen_random_mmsa({3, 4, 4, 5}, 3, seed);
    write_instance(mmsa, path);
    CHECK(canonical_json(read_mmsa(path).instance) == canonical_json(mmsa));
  }
}
