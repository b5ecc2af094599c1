#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hammctr/error.hpp"
#include "hammctr/rng.hpp"
#include "hammctr/satgadget.hpp"
#include "oracle.hpp"

using namespace hammctr;

namespace {

std::vector<oracle::Clause> clauses_of(const QaryCnf &f) {
  std::vector<oracle::Clause> out;
  for (const auto &c : f.clauses) {
    oracle::Clause o;
    for (const auto &l : c) o.emplace_back(l.var, l.value);
    out.push_back(o);
  }
  return out;
}

bool oracle_sat(const QaryCnf &f) { return oracle::satisfiable(clauses_of(f), f.q, f.num_vars); }

QaryCnf random_formula(SplitMix64 &g, std::size_t n, Symbol q, std::size_t k, std::size_t m) {
  QaryCnf f;
  f.num_vars = n;
  f.q = q;
  for (std::size_t c = 0; c < m; ++c) {
    Clause cl;
    const std::size_t w = 1 + g.below(k);
    for (std::size_t i = 0; i < w; ++i)
      cl.push_back({static_cast<std::uint32_t>(g.below(n)), static_cast<Symbol>(g.below(q))});
    f.clauses.push_back(cl);
  }
  return f;
}

}  // namespace

TEST_CASE("qcnf text format") {
  auto f = parse_qcnf("p qcnf 2 1 2\n1!0 2!1 0\n");
  CHECK(f.num_vars == 2);
  CHECK(f.q == 2);
  REQUIRE(f.clauses.size() == 1);
  CHECK(f.clauses[0] == Clause{{0, 0}, {1, 1}});
  CHECK(write_qcnf(f) == "p qcnf 2 1 2\n1!0 2!1 0\n");
  CHECK(parse_qcnf(write_qcnf(f)) == f);

  auto g = parse_qcnf("# grouped\np qcnf 4 1 3\ng 2\n\n1!2 4!0 0\n");
  CHECK(g.group_size == 2);
  CHECK(parse_qcnf(write_qcnf(g)) == g);
  CHECK(formula_hash(g) == formula_hash(parse_qcnf(write_qcnf(g))));
  CHECK(formula_hash(g) != formula_hash(f));

  CHECK_THROWS_AS(parse_qcnf("p cnf 2 1\n1 2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_qcnf("p qcnf 2 1 2\n3!0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_qcnf("p qcnf 2 1 2\n1!2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_qcnf("p qcnf 2 1 2\n1!0\n"), ParseError);
  CHECK_THROWS_AS(parse_qcnf("p qcnf 2 2 2\n1!0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_qcnf("p qcnf 2 1 2\n0\n"), ParseError);
  CHECK_THROWS_AS(parse_qcnf("p qcnf 3 1 2\ng 2\n1!0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_qcnf("p qcnf 2 1 2\n1=0 0\n"), ParseError);
}

TEST_CASE("binary formulas read as classic CNF") {
  // X != 0 is the positive literal: (x1 or not x2) and (not x1).
  auto f = parse_qcnf("p qcnf 2 2 2\n1!0 2!1 0\n1!1 0\n");
  for (Symbol a = 0; a < 2; ++a)
    for (Symbol b = 0; b < 2; ++b) {
      const bool classic = (a == 1 || b == 0) && a == 0;
      CHECK(satisfies(f, std::vector<Symbol>{a, b}) == classic);
    }
}

TEST_CASE("brute force satisfiability") {
  QaryCnf empty;
  empty.num_vars = 3;
  empty.q = 3;
  CHECK(brute_sat(empty) == std::vector<Symbol>{0, 0, 0});

  auto unsat = parse_qcnf("p qcnf 2 3 3\n1!0 0\n1!1 0\n1!2 0\n");
  CHECK(!brute_sat(unsat));

  SplitMix64 g(31);
  for (int t = 0; t < 100; ++t) {
    auto f = random_formula(g, 1 + g.below(6), static_cast<Symbol>(2 + g.below(2)), 3, g.below(12));
    auto a = brute_sat(f);
    CHECK(a.has_value() == oracle_sat(f));
    if (a) CHECK(oracle::sat(clauses_of(f), *a));
  }
  QaryCnf big;
  big.num_vars = 40;
  CHECK_THROWS_AS(brute_sat(big), BudgetError);
}

TEST_CASE("regularity witness") {
  auto f = parse_qcnf("p qcnf 4 2 2\ng 2\n1!0 3!0 0\n2!1 4!1 0\n");
  auto w = regularity(f);
  CHECK(w.regular());
  CHECK(w.k == 2);
  CHECK(w.r == 2);
  CHECK(check_witness(f, w));
  auto bad = parse_qcnf("p qcnf 4 2 2\ng 2\n1!0 2!0 0\n2!1 4!1 0\n");
  CHECK(!regularity(bad).regular());
  CHECK(!check_witness(bad, w));
}

TEST_CASE("regularize") {
  auto f = parse_qcnf("p qcnf 5 2 2\n1!0 0\n2!1 5!0 0\n");
  auto r = regularize(f, 4);
  CHECK(r.padded_vars == 8);
  CHECK(r.formula.group_size == 4);
  CHECK(r.formula.num_vars == 8 + 3 * 4);
  CHECK(r.witness.k == 4);
  CHECK(r.witness.r == 3);
  CHECK(check_witness(r.formula, r.witness));
  CHECK_THROWS_AS(regularize(f, 3), InvalidArgument);
  CHECK_THROWS_AS(regularize(f, 6), InvalidArgument);
}

TEST_CASE("regularize forces the fresh variables to zero") {
  auto f = parse_qcnf("p qcnf 4 1 2\n1!0 0\n");
  auto r = regularize(f, 2);
  const auto fresh = r.padded_vars;
  std::size_t satisfying = 0;
  for (const auto &a : oracle::cube(2, r.formula.num_vars)) {
    if (!satisfies(r.formula, a)) continue;
    ++satisfying;
    for (std::size_t v = fresh; v < a.size(); ++v) REQUIRE(a[v] == 0);
  }
  CHECK(satisfying == 8);
}

TEST_CASE("regularize preserves satisfiability") {
  SplitMix64 g(41);
  for (int t = 0; t < 60; ++t) {
    const auto q = static_cast<Symbol>(2 + g.below(2));
    const std::size_t k = 1 + g.below(2);
    const std::size_t n = 2 * k + g.below(7 - 2 * k);
    auto f = random_formula(g, n, q, k, 1 + g.below(6));
    const std::size_t s = std::max<std::size_t>(2 * std::max<std::size_t>(1, f.max_width()), 2);
    if (s > n) continue;
    auto r = regularize(f, s);
    if (!candidate_count(q, r.formula.num_vars, std::uint64_t{1} << 22)) continue;
    CHECK(brute_sat(r.formula).has_value() == oracle_sat(f));
  }
}

TEST_CASE("balancing family") {
  auto f = parse_qcnf("p qcnf 2 1 2\ng 2\n1!0 2!0 0\n");
  CHECK(balance_count(f) == 3);
  auto all = balance(f);
  CHECK(all.size() == 3);
  for (const auto &m : all) CHECK(brute_sat(m).has_value());

  auto g4 = parse_qcnf("p qcnf 6 1 3\ng 3\n1!0 0\n");
  CHECK(balance_count(g4) == static_cast<std::uint64_t>(std::pow(8, 4)));
  CHECK(balance_permutation(g4, 0)[0] == std::vector<Symbol>{0, 1, 2});
  for (std::uint64_t i : {0ULL, 5ULL, 4095ULL}) {
    for (const auto &p : balance_permutation(g4, i)) {
      auto sorted = p;
      std::sort(sorted.begin(), sorted.end());
      CHECK(sorted == std::vector<Symbol>{0, 1, 2});
    }
  }
  CHECK_THROWS_AS(balance(g4, 10), BudgetError);
  auto odd = parse_qcnf("p qcnf 3 1 2\ng 3\n1!0 0\n");
  CHECK_THROWS_AS(balance(odd), InvalidArgument);
}

TEST_CASE("balancing keeps satisfiability and reaches a balanced witness") {
  SplitMix64 g(43);
  for (int t = 0; t < 25; ++t) {
    auto f = random_formula(g, 4, 2, 2, 1 + g.below(4));
    f.group_size = 2;
    const bool sat = oracle_sat(f);
    bool balanced = false;
    for (const auto &m : balance(f)) {
      CHECK(oracle_sat(m) == sat);
      for (const auto &a : oracle::cube(2, 4))
        if (is_balanced(a, 2, 2) && satisfies(m, a)) balanced = true;
    }
    CHECK(balanced == sat);
  }
}

TEST_CASE("is_balanced") {
  CHECK(is_balanced(std::vector<Symbol>{0, 1, 1, 0}, 2, 2));
  CHECK(!is_balanced(std::vector<Symbol>{0, 0, 1, 1}, 2, 2));
  CHECK(is_balanced(std::vector<Symbol>{2, 0, 1}, 3, 3));
  CHECK(!is_balanced(std::vector<Symbol>{0, 1, 1}, 3, 2));
}

TEST_CASE("gadget instance structure") {
  auto f = parse_qcnf("p qcnf 4 2 2\ng 2\n1!0 3!1 0\n2!1 4!0 0\n");
  auto inst = to_remotest(f);
  CHECK(inst.threshold == 0);
  CHECK(inst.s == 2);
  CHECK(inst.r == 2);
  CHECK(inst.pre_dedup == 2 * 4);
  CHECK(inst.strings.n() <= inst.pre_dedup);
  for (std::size_t i = 0; i < inst.strings.n(); ++i) {
    auto a = inst.strings.row(i);
    CHECK(!satisfies(f, a));
  }
  CHECK_THROWS_AS(to_remotest(parse_qcnf("p qcnf 4 2 2\ng 2\n1!0 2!0 0\n1!1 3!1 0\n")), InvalidArgument);
}

TEST_CASE("gadget strings falsify a clause and are constant off it") {
  SplitMix64 g(47);
  for (int t = 0; t < 20; ++t) {
    auto base = random_formula(g, 4 + 2 * g.below(3), 2, 1, 1 + g.below(4));
    auto r = regularize(base, 2);
    auto f = balance_member(r.formula, g.below(*balance_count(r.formula)));
    auto inst = to_remotest(f);
    const std::size_t s = f.group_size, groups = f.group_count();
    CHECK(inst.strings.n() <= f.clauses.size() * (std::size_t{1} << (inst.r * s)) * (std::size_t{1} << (groups - inst.r)));
    for (std::size_t i = 0; i < inst.strings.n(); ++i) {
      auto a = inst.strings.row(i);
      bool explained = false;
      for (const auto &c : f.clauses) {
        bool falsified = std::all_of(c.begin(), c.end(), [&](const Literal &l) { return a[l.var] == l.value; });
        if (!falsified) continue;
        std::vector<bool> touched(groups, false);
        for (const auto &l : c) touched[l.var / s] = true;
        bool constant = true;
        for (std::size_t gi = 0; gi < groups; ++gi)
          if (!touched[gi])
            for (std::size_t v = gi * s; v < gi * s + s; ++v) constant = constant && a[v] == a[gi * s];
        explained = explained || constant;
      }
      REQUIRE(explained);
    }
  }
}

TEST_CASE("certify on tiny formulas") {
  auto sat = parse_qcnf("p qcnf 2 1 2\n1!0 0\n");
  PipelineOptions o;
  o.s = 2;
  auto rep = certify_pipeline(sat, o);
  CHECK(rep.satisfiable);
  CHECK(rep.pass);
  CHECK(rep.witness_member.has_value());
  CHECK(rep.max_distance >= rep.threshold + 1);

  auto unsat = parse_qcnf("p qcnf 2 2 2\n1!0 0\n1!1 0\n");
  auto bad = certify_pipeline(unsat, o);
  CHECK(!bad.satisfiable);
  CHECK(bad.pass);
  CHECK(bad.members_checked == bad.family_size);
  CHECK(bad.max_distance <= bad.threshold);
}

TEST_CASE("certify a single member and its tamper control") {
  auto f = parse_qcnf("p qcnf 2 1 2\n2!1 0\n");
  auto g = regularize(f, 2).formula;
  bool any_pass = false;
  for (std::uint64_t i = 0; i < *balance_count(g); ++i) {
    auto m = balance_member(g, i);
    auto inst = to_remotest(m);
    auto rep = certify(m, inst);
    CHECK(rep.satisfiable);
    if (rep.max_distance >= rep.threshold + 1) CHECK(rep.satisfiable);
    if (rep.balanced_witness) {
      CHECK(rep.witness_ok);
      CHECK(rep.biconditional);
      CHECK(rep.text().find("result=PASS") != std::string::npos);
    }
    any_pass = any_pass || rep.pass();
  }
  CHECK(any_pass);
  auto u = regularize(parse_qcnf("p qcnf 2 2 2\n1!0 0\n1!1 0\n"), 2).formula;
  auto inst = to_remotest(u);
  auto rep = certify(u, inst);
  CHECK(rep.pass());
  CHECK(!rep.satisfiable);
  // Dropping a string can only raise the farthest distance.
  std::vector<Symbol> symbols(inst.strings.symbols().begin(), inst.strings.symbols().end() - static_cast<std::ptrdiff_t>(inst.strings.d()));
  GadgetInstance cut = inst;
  cut.strings = StringSet(inst.strings.n() - 1, inst.strings.d(), inst.strings.sigma(), symbols);
  CHECK(certify(u, cut).max_distance >= rep.max_distance);
  CHECK_THROWS_AS(certify(f, inst), InvalidArgument);
}
