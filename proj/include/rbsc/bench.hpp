#ifndef RBSC_BENCH_HPP
#define RBSC_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace rbsc {

// One generator+solver row of a benchmark suite. Oracle "brute" compares
// against the exact optimum, "planted" against the planted certificate,
// "none" records cost only.
struct BenchRowSpec {
  std::string name;
  std::string gen;     // rbsc | planted-rbsc | mku | mmsa | gap
  std::string solver;  // rbsc | rbsc-partial | mmsa | mku | none
  std::string oracle = "none";
  int m = 8, n = 10, k = 6;
  int blue_size = 2, red_size = 3, set_size = 3;
  int opt_target = 2;      // planted generator
  int k_hat = 0;           // rbsc-partial
  double eps = 0.5;        // gap generator
  int t = 5;               // gap / mmsa depth
  std::vector<int> layers; // mmsa generator
  int max_arity = 3;
};

struct BenchSuite {
  int version = 1;
  std::vector<BenchRowSpec> rows;
};

struct BenchRow {
  std::string name;
  std::string digest;
  std::string solver;
  std::uint64_t seed = 0;
  std::string status;  // ok | infeasible | error:<kind>
  long long cost = -1;
  double opt_bound = -1;  // oracle value or planted bound; -1 when absent
  double ratio = -1;
  double theoretical_bound = -1;
  bool bound_violation = false;
  double wall_ms = 0;
};

struct BenchReport {
  int version = 1;
  std::uint64_t seed = 0;
  std::vector<BenchRow> rows;  // sorted by instance digest
  double max_ratio = 0;
  double mean_ratio = 0;
  int violations = 0;

  std::string to_json() const;
  std::string to_text_table() const;
};

BenchSuite parse_suite(const std::string& json_text);
BenchSuite load_suite(const std::string& path);

BenchReport run_bench(const BenchSuite& suite, std::uint64_t seed,
                      int jobs = 1);

}  // namespace rbsc

#endif  // RBSC_BENCH_HPP
