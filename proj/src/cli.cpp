#include "hammctr/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "hammctr/bench.hpp"
#include "hammctr/core.hpp"
#include "hammctr/error.hpp"
#include "hammctr/generate.hpp"
#include "hammctr/inclexcl.hpp"
#include "hammctr/matmul.hpp"
#include "hammctr/reductions.hpp"
#include "hammctr/satgadget.hpp"
#include "text_util.hpp"

namespace hammctr::cli {

std::string select_discrete(std::size_t n, std::size_t d, std::uint64_t budget_bytes, std::size_t d_max) {
  const double nd = static_cast<double>(n) * static_cast<double>(d);
  if (d <= d_max && std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(d, 1000))) <= nd) return "inclexcl";
  const double square = 4.0 * static_cast<double>(n) * static_cast<double>(n);
  if (n >= 64 && square <= static_cast<double>(budget_bytes) &&
      static_cast<double>(d) >= std::pow(static_cast<double>(n), 0.1))
    return "matmul";
  return "naive";
}

std::uint64_t budget_from_env() {
  if (const char *v = std::getenv("HAMMCTR_BUDGET_MB")) {
    char *end = nullptr;
    const unsigned long long mb = std::strtoull(v, &end, 10);
    if (end != v && *end == '\0' && mb > 0) return static_cast<std::uint64_t>(mb) << 20;
  }
  return kDefaultBudgetBytes;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Common {
  bool json = false;
  bool no_timing = false;
  unsigned threads = 1;
};

std::string join(std::span<const Symbol> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

// An ordered record printed either as key=value lines or as one JSON object.
class Record {
public:
  void add(const std::string &key, const std::string &value) { fields_.emplace_back(key, value, false); }
  void add(const std::string &key, std::uint64_t value) {
    fields_.emplace_back(key, std::to_string(value), true);
  }
  void add_ms(const std::string &key, double ms) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << ms;
    fields_.emplace_back(key, s.str(), true);
  }

  void print(std::ostream &out, bool json) const {
    if (json) {
      nlohmann::ordered_json j = nlohmann::ordered_json::object();
      for (const auto &[k, v, numeric] : fields_) {
        if (numeric)
          j[k] = nlohmann::ordered_json::parse(v);
        else
          j[k] = v;
      }
      out << j.dump() << '\n';
      return;
    }
    for (const auto &[k, v, numeric] : fields_) out << k << '=' << v << '\n';
  }

private:
  std::vector<std::tuple<std::string, std::string, bool>> fields_;
};

void add_result(Record &rec, const SolveResult &r) {
  rec.add("algorithm", r.algorithm);
  rec.add("objective", r.objective);
  rec.add("index", r.center_index ? std::to_string(*r.center_index) : std::string("none"));
  rec.add("center", join(r.center));
  for (const auto &[name, value] : r.counters) rec.add("counter." + name, value);
}

struct SolveConfig {
  std::string mode = "discrete-closest";
  std::string algo = "auto";
  std::size_t tau = 0;
  std::uint64_t cap = kDefaultEnumerationCap;
  std::size_t d_max = kDefaultDMax;
  bool binary_popcount = false;
  bool packed = false;
  std::string dump_matrix;
  std::string dump_s;
};

bool is_closest(const std::string &mode) { return mode.ends_with("closest"); }
bool is_continuous(const std::string &mode) { return mode.starts_with("continuous"); }

SolveResult solve_with(const StringSet &set, const SolveConfig &cfg, const Common &common, std::uint64_t budget) {
  const bool closest = is_closest(cfg.mode);
  std::string algo = cfg.algo;
  if (is_continuous(cfg.mode)) {
    if (algo == "auto") algo = "brute-continuous";
    if (algo != "brute-continuous")
      throw InvalidArgument("algorithm " + algo + " does not solve the continuous problems");
    return closest ? brute_continuous_closest(set, cfg.cap) : brute_continuous_remotest(set, cfg.cap);
  }
  if (algo == "auto") algo = select_discrete(set.n(), set.d(), budget, cfg.d_max);
  if (algo == "naive") {
    NaiveOptions o{cfg.packed};
    return closest ? naive_closest(set, o) : naive_remotest(set, o);
  }
  if (algo == "inclexcl") {
    InclExclOptions o{cfg.d_max, budget, common.threads};
    if (!cfg.dump_s.empty()) {
      CountTableOptions t{cfg.d_max, budget, false, common.threads};
      write_file(cfg.dump_s, s_table_csv(build_count_tables(set, t)));
    }
    return closest ? inclexcl_closest(set, o) : inclexcl_remotest(set, o);
  }
  if (algo == "matmul") {
    MatmulOptions o;
    o.tau = cfg.tau;
    o.threads = common.threads;
    o.budget_bytes = budget;
    o.binary_popcount = cfg.binary_popcount;
    if (!cfg.dump_matrix.empty()) write_distance_matrix(distance_matrix(set, o), cfg.dump_matrix);
    return closest ? matmul_closest(set, o) : matmul_remotest(set, o);
  }
  if (algo == "brute-continuous") throw InvalidArgument("brute-continuous solves the continuous problems only");
  throw InvalidArgument("unknown algorithm " + algo);
}

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void finish(Record &rec, const Common &common, Clock::time_point t0, std::ostream &out) {
  if (!common.no_timing) rec.add_ms("wall_ms", elapsed_ms(t0));
  rec.print(out, common.json);
}

std::string default_map_path(const std::string &output) { return output + ".map.jsonl"; }

nlohmann::ordered_json gadget_map(const GadgetInstance &g, const QaryCnf &member, std::uint64_t index,
                                  std::uint64_t family, std::uint64_t source_hash) {
  return {{"direction", "sat2remotest"},
          {"source_hash", source_hash},
          {"member", index},
          {"family_size", family},
          {"member_hash", g.source_hash},
          {"N", member.num_vars},
          {"q", member.q},
          {"s", g.s},
          {"r", g.r},
          {"threshold", g.threshold},
          {"n", g.strings.n()},
          {"pre_dedup", g.pre_dedup}};
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Closest and remotest string solvers under the Hamming metric", "hammctr"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--json", common.json, "Print one JSON object per record");
  app.add_flag("--no-timing", common.no_timing, "Omit wall-clock fields");
  app.add_option("--threads", common.threads, "Worker threads for modules that support them")
      ->check(CLI::Range(1U, 1024U));

  // solve
  auto *solve = app.add_subcommand("solve", "Solve an instance");
  std::string input, output;
  SolveConfig cfg;
  solve->add_option("-i,--input", input, "Instance file")->required();
  solve->add_option("--mode", cfg.mode, "Problem")
      ->check(CLI::IsMember({"discrete-closest", "discrete-remotest", "continuous-closest", "continuous-remotest"}));
  solve->add_option("--algo", cfg.algo, "Algorithm")
      ->check(CLI::IsMember({"naive", "inclexcl", "matmul", "brute-continuous", "auto"}));
  solve->add_option("--tau", cfg.tau, "Heavy-column threshold for matmul (0 = auto)");
  solve->add_option("--cap", cfg.cap, "Enumeration cap for continuous search");
  solve->add_option("--d-max", cfg.d_max, "Largest d accepted by inclexcl");
  solve->add_flag("--binary-popcount", cfg.binary_popcount, "matmul: popcount path on binary input");
  solve->add_flag("--packed", cfg.packed, "naive: compare packed words on binary input");
  solve->add_option("--dump-matrix", cfg.dump_matrix, "matmul: write D as little-endian uint32");
  solve->add_option("--dump-s", cfg.dump_s, "inclexcl: write the S table as CSV");

  // gen
  auto *gen = app.add_subcommand("gen", "Generate a seeded instance");
  std::string kind = "random";
  std::size_t gn = 0, gd = 0, rho = 0;
  std::uint32_t gsigma = 2;
  std::uint64_t seed = 1;
  gen->add_option("--kind", kind)->check(CLI::IsMember({"random", "planted"}));
  gen->add_option("-n", gn)->required();
  gen->add_option("-d", gd)->required();
  gen->add_option("--sigma", gsigma);
  gen->add_option("--seed", seed);
  gen->add_option("--rho", rho, "planted: changed positions per string");
  gen->add_option("-o,--output", output, "Output file (standard output when absent)");

  // reduce
  auto *reduce = app.add_subcommand("reduce", "Build a reduction target");
  std::string direction, map_path, formula_out, target_algo = "naive";
  bool solve_through = false, keep_regular = false;
  std::size_t group = 2;
  std::uint64_t member = 0;
  reduce->add_option("--direction", direction)
      ->required()
      ->check(CLI::IsMember({"c2r", "r2c", "sat2remotest", "complement"}));
  reduce->add_option("-i,--input", input)->required();
  reduce->add_option("-o,--output", output)->required();
  reduce->add_option("--map", map_path, "Sidecar map (default OUTPUT.map.jsonl)");
  reduce->add_flag("--solve-through", solve_through, "Solve the target and print the source answer");
  reduce->add_option("--algo", target_algo, "Discrete solver for --solve-through")
      ->check(CLI::IsMember({"naive", "inclexcl", "matmul", "auto"}));
  reduce->add_option("--s", group, "sat2remotest: group size");
  reduce->add_option("--member", member, "sat2remotest: balancing family member");
  reduce->add_flag("--keep-regular", keep_regular, "sat2remotest: skip regularizing a regular grouped input");
  reduce->add_option("--formula-out", formula_out, "sat2remotest: member formula (default OUTPUT.qcnf)");

  // certify
  auto *cert = app.add_subcommand("certify", "Check the SAT gadget with brute-force oracles");
  std::string formula_path, instance_path;
  bool pipeline = false;
  std::uint64_t cert_cap = kDefaultEnumerationCap;
  cert->add_option("--formula", formula_path)->required();
  cert->add_option("--instance", instance_path, "Gadget instance from reduce --direction sat2remotest");
  cert->add_option("--map", map_path, "Gadget map (default INSTANCE.map.jsonl)");
  cert->add_flag("--pipeline", pipeline, "Run regularize, balance, to_remotest and certify end to end");
  cert->add_option("--s", group, "Group size for --pipeline");
  cert->add_flag("--keep-regular", keep_regular, "Skip regularizing a regular grouped input");
  cert->add_option("--cap", cert_cap, "Enumeration cap");

  // bench
  auto *bench = app.add_subcommand("bench", "Run a benchmark suite");
  std::string suite;
  bool verify = false;
  bench->add_option("--suite", suite)->required()->check(CLI::IsMember(bench_suites()));
  bench->add_option("-o,--output", output, "CSV file (standard output when absent)");
  bench->add_option("--seed", seed);
  bench->add_flag("--verify", verify, "Cross-check objectives across algorithms");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kInputError;
  }

  const std::uint64_t budget = budget_from_env();
  const auto t0 = Clock::now();
  try {
    if (*solve) {
      const auto set = read_instance_file(input);
      const auto r = solve_with(set, cfg, common, budget);
      Record rec;
      rec.add("mode", cfg.mode);
      add_result(rec, r);
      finish(rec, common, t0, out);
      return kOk;
    }

    if (*gen) {
      if (kind == "planted" && rho > gd) throw InvalidArgument("rho must not exceed d");
      std::string text, comment;
      if (kind == "random") {
        const auto set = random_instance(gn, gd, gsigma, seed);
        comment = "random n=" + std::to_string(gn) + " d=" + std::to_string(gd) + " sigma=" +
                  std::to_string(gsigma) + " seed=" + std::to_string(seed);
        text = write_instance(set);
      } else {
        const auto p = planted_instance(gn, gd, gsigma, rho, seed);
        comment = "planted n=" + std::to_string(gn) + " d=" + std::to_string(gd) + " sigma=" +
                  std::to_string(gsigma) + " seed=" + std::to_string(seed) + " rho=" + std::to_string(rho) +
                  "\ncenter=" + join(p.center);
        text = write_instance(p.set);
      }
      std::string full;
      std::istringstream lines(comment);
      for (std::string c; std::getline(lines, c);) full += "# " + c + '\n';
      full += text;
      if (output.empty())
        out << full;
      else
        write_file(output, full);
      return kOk;
    }

    if (*reduce) {
      if (map_path.empty()) map_path = default_map_path(output);
      Record rec;
      rec.add("direction", direction);
      if (direction == "sat2remotest") {
        const auto f = parse_qcnf(read_file(input));
        validate(f);
        QaryCnf g;
        if (keep_regular && f.group_size == group && regularity(f).regular())
          g = f;
        else
          g = regularize(f, group).formula;
        const auto t = balance_count(g);
        if (!t) throw BudgetError("balancing family size overflows 64 bits");
        if (member >= *t) throw InvalidArgument("member " + std::to_string(member) + " out of range, family has " + std::to_string(*t));
        const auto m = balance_member(g, member);
        const auto inst = to_remotest(m);
        if (formula_out.empty()) formula_out = output + ".qcnf";
        write_instance_file(inst.strings, output, "sat2remotest member=" + std::to_string(member) +
                                                      " threshold=" + std::to_string(inst.threshold));
        write_file(formula_out, write_qcnf(m));
        write_file(map_path, gadget_map(inst, m, member, *t, formula_hash(f)).dump() + '\n');
        rec.add("n", inst.strings.n());
        rec.add("d", inst.strings.d());
        rec.add("sigma", inst.strings.sigma());
        rec.add("threshold", inst.threshold);
        rec.add("pre_dedup", inst.pre_dedup);
        rec.add("family_size", *t);
        if (solve_through) {
          const auto sweep = sweep_continuous_remotest(inst.strings);
          rec.add("target_objective", sweep.objective);
          rec.add("satisfiable", sweep.objective >= inst.threshold + 1 ? "yes" : "no");
        }
        finish(rec, common, t0, out);
        return kOk;
      }

      const auto set = read_instance_file(input);
      Reduction red = direction == "c2r"   ? closest_to_remotest(set)
                      : direction == "r2c" ? remotest_to_closest(set)
                                           : complement_continuous(set);
      write_instance_file(red.target, output, std::string(direction_name(red.map.direction)) + " reduction target");
      write_file(map_path, map_to_jsonl(red.map));
      rec.add("n", red.target.n());
      rec.add("d", red.target.d());
      rec.add("r", red.map.repetitions);
      rec.add("code_length", red.map.code_length);
      rec.add("offset", red.map.offset);
      if (solve_through) {
        SolveResult target;
        if (red.map.direction == Direction::ContinuousComplement) {
          target = brute_continuous_remotest(red.target);
        } else {
          SolveConfig c;
          c.algo = target_algo;
          c.mode = red.map.direction == Direction::ClosestToRemotest ? "discrete-remotest" : "discrete-closest";
          target = solve_with(red.target, c, common, budget);
        }
        rec.add("target_algorithm", target.algorithm);
        rec.add("target_objective", target.objective);
        rec.add("source_objective", apply_transform(red.map, target.objective));
        if (target.center_index) {
          const auto e = source_of(red.map, *target.center_index);
          rec.add("source_index", e.source);
          rec.add("source_role", std::string(role_name(e.role)));
        }
      }
      finish(rec, common, t0, out);
      return kOk;
    }

    if (*cert) {
      const auto f = parse_qcnf(read_file(formula_path));
      if (pipeline) {
        PipelineOptions o;
        o.s = group;
        o.keep_regular_input = keep_regular;
        o.enumeration_cap = cert_cap;
        const auto rep = certify_pipeline(f, o);
        Record rec;
        rec.add("satisfiable", rep.satisfiable ? "yes" : "no");
        rec.add("equisatisfiable", rep.equisatisfiable ? "yes" : "no");
        rec.add("gadget_vars", rep.gadget_vars);
        rec.add("family_size", rep.family_size);
        rec.add("members_checked", rep.members_checked);
        rec.add("witness_member", rep.witness_member ? std::to_string(*rep.witness_member) : std::string("none"));
        rec.add("threshold", rep.threshold);
        rec.add("max_distance", rep.max_distance);
        rec.add("detail", rep.detail);
        rec.add("result", rep.pass ? "PASS" : "FAIL");
        finish(rec, common, t0, out);
        return rep.pass ? kOk : kFailed;
      }
      if (instance_path.empty()) throw InvalidArgument("certify needs --instance or --pipeline");
      if (map_path.empty()) map_path = default_map_path(instance_path);
      const auto set = read_instance_file(instance_path);
      nlohmann::json m;
      try {
        m = nlohmann::json::parse(read_file(map_path));
      } catch (const nlohmann::json::exception &e) {
        throw ParseError(1, std::string("gadget map: ") + e.what());
      }
      GadgetInstance g{set, m.at("threshold").get<std::size_t>(), m.value("pre_dedup", std::size_t{0}),
                       m.at("s").get<std::size_t>(), m.at("r").get<std::size_t>(), m.value("member_hash", std::uint64_t{0})};
      const auto rep = certify(f, g, cert_cap);
      if (common.json) {
        Record rec;
        rec.add("satisfiable", rep.satisfiable ? "yes" : "no");
        rec.add("threshold", rep.threshold);
        rec.add("max_distance", rep.max_distance);
        rec.add("result", rep.pass() ? "PASS" : "FAIL");
        rec.print(out, true);
      } else {
        out << rep.text();
        if (!common.no_timing) out << "wall_ms=" << std::fixed << std::setprecision(3) << elapsed_ms(t0) << '\n';
      }
      return rep.pass() ? kOk : kFailed;
    }

    if (*bench) {
      BenchConfig bc;
      bc.seed = seed;
      bc.threads = common.threads;
      bc.budget_bytes = budget;
      const auto rows = run_bench(suite, bc);
      const auto csv = bench_csv(rows, !common.no_timing);
      if (output.empty())
        out << csv;
      else
        write_file(output, csv);
      if (verify) {
        const auto problems = cross_check(rows);
        for (const auto &p : problems) err << "mismatch: " << p << '\n';
        if (!problems.empty()) return kFailed;
      }
      return kOk;
    }
  } catch (const BudgetError &e) {
    err << "error: " << e.what() << '\n';
    return kBudgetError;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace hammctr::cli
