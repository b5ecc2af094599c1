#include "hammctr/bench.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

#include "hammctr/error.hpp"
#include "hammctr/generate.hpp"
#include "hammctr/inclexcl.hpp"
#include "hammctr/matmul.hpp"
#include "hammctr/rng.hpp"

namespace hammctr {

namespace {

struct Shape {
  std::size_t n, d;
  Symbol sigma;
};

struct Algo {
  std::string name;
  std::string mode;
  std::function<SolveResult(const StringSet &)> solve;
};

std::vector<Algo> discrete_algos(const BenchConfig &c, std::initializer_list<const char *> names,
                                 std::initializer_list<const char *> modes) {
  std::vector<Algo> out;
  for (const char *mode : modes) {
    const bool closest = std::string(mode) == "closest";
    for (const char *name : names) {
      const std::string a = name;
      std::function<SolveResult(const StringSet &)> f;
      if (a == "naive") {
        f = [closest](const StringSet &x) { return closest ? naive_closest(x) : naive_remotest(x); };
      } else if (a == "inclexcl") {
        InclExclOptions o{kDefaultDMax, c.budget_bytes, c.threads};
        f = [closest, o](const StringSet &x) { return closest ? inclexcl_closest(x, o) : inclexcl_remotest(x, o); };
      } else if (a == "matmul" || a == "matmul-popcount") {
        MatmulOptions o;
        o.threads = c.threads;
        o.budget_bytes = c.budget_bytes;
        o.binary_popcount = a == "matmul-popcount";
        f = [closest, o](const StringSet &x) { return closest ? matmul_closest(x, o) : matmul_remotest(x, o); };
      }
      out.push_back({a, mode, std::move(f)});
    }
  }
  return out;
}

void run_grid(const std::string &suite, const std::vector<Shape> &shapes, const std::vector<Algo> &algos,
              const BenchConfig &config, std::vector<BenchRow> &rows) {
  SplitMix64 seeds(config.seed);
  for (const auto &shape : shapes) {
    const std::uint64_t seed = seeds.next();
    const auto set = random_instance(shape.n, shape.d, shape.sigma, seed);
    for (const auto &algo : algos) {
      if (algo.name == "matmul-popcount" && !set.is_binary()) continue;
      const auto t0 = std::chrono::steady_clock::now();
      auto r = algo.solve(set);
      const auto t1 = std::chrono::steady_clock::now();
      BenchRow row;
      row.suite = suite;
      row.algorithm = algo.name;
      row.mode = algo.mode;
      row.n = shape.n;
      row.d = shape.d;
      row.sigma = shape.sigma;
      row.seed = seed;
      row.objective = r.objective;
      row.index = r.center_index.value_or(0);
      row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      row.counters = std::move(r.counters);
      rows.push_back(std::move(row));
    }
  }
}

}  // namespace

std::vector<std::string> bench_suites() { return {"tiny", "smalld", "larged"}; }

std::vector<BenchRow> run_bench(const std::string &suite, const BenchConfig &config) {
  std::vector<BenchRow> rows;
  if (suite == "tiny") {
    run_grid(suite, {{16, 6, 3}, {32, 8, 3}, {24, 8, 2}},
             discrete_algos(config, {"naive", "inclexcl", "matmul"}, {"closest", "remotest"}), config, rows);
  } else if (suite == "smalld") {
    std::vector<Shape> shapes;
    for (std::size_t d = 8; d <= 16; d += 2) shapes.push_back({4000, d, 4});
    run_grid(suite, shapes, discrete_algos(config, {"naive", "inclexcl"}, {"closest"}), config, rows);
  } else if (suite == "larged") {
    run_grid(suite, {{256, 512, 4}, {256, 2048, 4}, {512, 512, 16}, {512, 2048, 4}, {512, 2048, 2}},
             discrete_algos(config, {"naive", "matmul", "matmul-popcount"}, {"closest", "remotest"}), config,
             rows);
  } else {
    throw InvalidArgument("unknown bench suite \"" + suite + "\"");
  }
  return rows;
}

std::vector<std::string> cross_check(const std::vector<BenchRow> &rows) {
  std::map<std::tuple<std::string, std::uint64_t, std::size_t, std::size_t, std::string>, const BenchRow *> first;
  std::vector<std::string> problems;
  for (const auto &r : rows) {
    auto key = std::make_tuple(r.suite, r.seed, r.n, r.d, r.mode);
    auto [it, inserted] = first.emplace(key, &r);
    if (inserted) continue;
    if (it->second->objective != r.objective || it->second->index != r.index)
      problems.push_back(r.suite + " n=" + std::to_string(r.n) + " d=" + std::to_string(r.d) + " " + r.mode +
                         ": " + it->second->algorithm + " gives " + std::to_string(it->second->objective) +
                         "@" + std::to_string(it->second->index) + ", " + r.algorithm + " gives " +
                         std::to_string(r.objective) + "@" + std::to_string(r.index));
  }
  return problems;
}

std::string bench_header() { return "suite,algorithm,mode,n,d,sigma,seed,objective,index,wall_ms,counters\n"; }

std::string bench_csv(const std::vector<BenchRow> &rows, bool timing) {
  std::ostringstream out;
  out << bench_header();
  for (const auto &r : rows) {
    out << r.suite << ',' << r.algorithm << ',' << r.mode << ',' << r.n << ',' << r.d << ',' << r.sigma << ','
        << r.seed << ',' << r.objective << ',' << r.index << ',';
    if (timing) out << r.wall_ms;
    out << ',';
    for (std::size_t i = 0; i < r.counters.size(); ++i)
      out << (i ? ";" : "") << r.counters[i].first << '=' << r.counters[i].second;
    out << '\n';
  }
  return out.str();
}

}  // namespace hammctr
