#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hammctr {

/// One timed solver run. CSV columns, in order:
/// suite,algorithm,mode,n,d,sigma,seed,objective,index,wall_ms,counters
/// where counters is "name=value" pairs joined by ';'.
struct BenchRow {
  std::string suite;
  std::string algorithm;
  std::string mode;
  std::size_t n = 0, d = 0;
  std::uint32_t sigma = 0;
  std::uint64_t seed = 0;
  std::size_t objective = 0;
  std::size_t index = 0;
  double wall_ms = 0;
  std::vector<std::pair<std::string, std::uint64_t>> counters;
};

struct BenchConfig {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::uint64_t budget_bytes = std::uint64_t{1} << 30;
};

/// Suite names: "tiny", "smalld", "larged".
std::vector<std::string> bench_suites();

/// Runs every (instance, algorithm) pair of the suite. Throws InvalidArgument
/// on an unknown suite name.
std::vector<BenchRow> run_bench(const std::string &suite, const BenchConfig &config);

/// Rows whose objective disagrees with another algorithm on the same instance and mode.
std::vector<std::string> cross_check(const std::vector<BenchRow> &rows);

std::string bench_header();
/// With timing off the wall_ms column is left empty.
std::string bench_csv(const std::vector<BenchRow> &rows, bool timing);

}  // namespace hammctr
