#include <doctest.h>

#include <bit>

#include "hammctr/error.hpp"
#include "hammctr/generate.hpp"
#include "hammctr/inclexcl.hpp"
#include "hammctr/rng.hpp"
#include "oracle.hpp"

using namespace hammctr;

namespace {

StringSet from_words(const std::vector<std::string> &words, Symbol sigma = 2) {
  return StringSet::from_rows(sigma, oracle::parse_rows(words));
}

std::vector<Symbol> word(const std::string &w) { return oracle::parse_rows({w})[0]; }

// T[x, I] by direct comparison.
std::uint32_t direct_t(const StringSet &s, std::size_t x, std::uint64_t subset) {
  std::uint32_t c = 0;
  for (std::size_t y = 0; y < s.n(); ++y) {
    bool eq = true;
    for (std::size_t k = 0; k < s.d(); ++k)
      if ((subset >> k & 1) && s.row(x)[k] != s.row(y)[k]) eq = false;
    c += eq;
  }
  return c;
}

}  // namespace

TEST_CASE("binomial table") {
  BinomialTable c(67);
  CHECK(c(0, 0) == 1);
  CHECK(c(5, 2) == 10);
  CHECK(c(3, 5) == 0);
  CHECK(c(62, 31) == oracle::binom(62, 31));
  CHECK(c(67, 33) == 14226520737620288370ULL);
  CHECK_THROWS_AS(BinomialTable(68), InvalidArgument);
}

TEST_CASE("binomial identities") {
  CHECK(zero_sum_identity(1, 1) == 0);
  CHECK(zero_sum_identity(3, 4) == 0);
  CHECK(zero_sum_identity(10, 1) == 0);
  CHECK(one_sum_identity(1, 0) == 1);
  CHECK(one_sum_identity(2, 3) == 1);
  CHECK(one_sum_identity(7, 7) == 1);
  for (std::size_t m = 1; m <= 20; ++m)
    for (std::size_t l = 0; l <= 20; ++l) {
      if (l >= 1) CHECK(zero_sum_identity(m, l) == 0);
      CHECK(one_sum_identity(m, l) == 1);
    }
  CHECK_THROWS_AS(zero_sum_identity(0, 1), InvalidArgument);
  CHECK_THROWS_AS(zero_sum_identity(1, 0), InvalidArgument);
  CHECK_THROWS_AS(one_sum_identity(0, 3), InvalidArgument);
}

TEST_CASE("distance indicator") {
  CHECK(hd_leq_indicator(word("010"), word("010"), 0) == 1);
  CHECK(hd_leq_indicator(word("000"), word("011"), 0) == 0);
  CHECK(hd_leq_indicator(word("000"), word("001"), 2) == 1);
  CHECK_THROWS_AS(hd_leq_indicator(word("000"), word("001"), 3), InvalidArgument);
  CHECK_THROWS_AS(hd_leq_indicator(word("00"), word("001"), 0), InvalidArgument);
  SplitMix64 g(3);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 1 + g.below(10);
    oracle::Row x(d), y(d);
    const auto sigma = 2 + g.below(4);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = static_cast<Symbol>(g.below(sigma));
      y[i] = g.below(3) ? x[i] : static_cast<Symbol>(g.below(sigma));
    }
    const std::size_t k = g.below(d);
    CHECK(hd_leq_indicator(x, y, k) == (oracle::hd(x, y) <= k ? 1 : 0));
  }
}

TEST_CASE("partition refinement") {
  std::vector<std::uint64_t> a{0, 0, 1, 1}, b{0, 1, 0, 1};
  auto p = Partition::from_labels(a), q = Partition::from_labels(b);
  auto r = refine(p, q);
  CHECK(r.part_count() == 4);
  CHECK(refine(p, Partition(4)) == p);
  CHECK(refine(p, p) == p);
  CHECK(refine(p, q).generation() > p.generation());
  CHECK(Partition(4).part_count() == 1);
  CHECK_THROWS_AS(refine(p, Partition(5)), InvalidArgument);

  auto labelled = Partition::from_labels(std::vector<std::uint64_t>{7, 3, 7, 9});
  CHECK(labelled.part_count() == 3);
  CHECK(labelled.part_of(0) == labelled.part_of(2));
  CHECK(labelled.part_size(labelled.part_of(0)) == 2);
  CHECK(labelled == Partition::from_labels(std::vector<std::uint64_t>{1, 2, 1, 0}));
  CHECK(!(labelled == Partition::from_labels(std::vector<std::uint64_t>{1, 2, 2, 0})));

  auto s = from_words({"010", "011", "110"});
  auto pos = Partition::by_position(s, 2);
  CHECK(pos.part_count() == 2);
  CHECK(pos.part_of(0) == pos.part_of(2));
}

TEST_CASE("refinement agrees with label pairs") {
  SplitMix64 g(8);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + g.below(40);
    std::vector<std::uint64_t> a(n), b(n), ab(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = g.below(4);
      b[i] = g.below(3);
      ab[i] = a[i] * 3 + b[i];
    }
    CHECK(refine(Partition::from_labels(a), Partition::from_labels(b)) == Partition::from_labels(ab));
  }
}

TEST_CASE("count tables") {
  auto s = from_words({"00", "01", "11"});
  auto t = build_count_tables(s);
  for (std::size_t x = 0; x < 3; ++x) CHECK(t.T(x, 0) == 3);
  CHECK(t.T(0, 1) == 2);
  for (std::size_t x = 0; x < 3; ++x) CHECK(t.S(x, 2) == 1);

  SplitMix64 g(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + g.below(30), d = 1 + g.below(8);
    auto r = random_instance(n, d, static_cast<Symbol>(2 + g.below(3)), g.next());
    auto full = build_count_tables(r);
    CountTableOptions lean;
    lean.keep_t = false;
    auto streamed = build_count_tables(r, lean);
    lean.threads = 3;
    auto threaded = build_count_tables(r, lean);
    CHECK(!streamed.has_t());
    CHECK(streamed.s == full.s);
    CHECK(threaded.s == full.s);
    for (std::size_t x = 0; x < n; ++x)
      for (std::uint64_t I = 0; I < (std::uint64_t{1} << d); ++I) {
        const auto want = direct_t(r, x, I);
        REQUIRE(full.T(x, I) == want);
      }
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t l = 0; l <= d; ++l) {
        std::int64_t sum = 0;
        for (std::uint64_t I = 0; I < (std::uint64_t{1} << d); ++I)
          if (static_cast<std::size_t>(std::popcount(I)) == l) sum += direct_t(r, x, I);
        REQUIRE(full.S(x, l) == sum);
      }
  }
}

TEST_CASE("count table limits") {
  auto wide = random_instance(4, 30, 2, 1);
  CHECK_THROWS_AS(build_count_tables(wide), BudgetError);
  CountTableOptions small;
  small.budget_bytes = 64 * 1024;
  CHECK_THROWS_AS(build_count_tables(random_instance(64, 12, 2, 1), small), BudgetError);
  small.keep_t = false;
  CHECK_NOTHROW(build_count_tables(random_instance(64, 12, 2, 1), small));
}

TEST_CASE("radius and remoteness tests") {
  auto s = from_words({"00", "01", "11"});
  auto t = build_count_tables(s);
  CHECK(radius_leq(1, 1, t));
  CHECK(!radius_leq(0, 1, t));
  CHECK(remoteness_gt(1, 0, t));
  CHECK(!remoteness_gt(1, 1, t));
  CHECK_THROWS_AS(radius_leq(0, 2, t), InvalidArgument);

  auto pair = build_count_tables(from_words({"000", "111"}));
  CHECK(remoteness_gt(0, 2, pair));
  CHECK(radius_leq(0, 2, pair) == false);

  auto dup = build_count_tables(from_words({"010", "010", "111"}));
  CHECK(!remoteness_gt(0, 0, dup));
  CHECK(remoteness_gt(2, 1, dup));
}

TEST_CASE("radius and remoteness agree with direct distances") {
  SplitMix64 g(4);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + g.below(25), d = 1 + g.below(9);
    auto s = random_instance(n, d, static_cast<Symbol>(2 + g.below(3)), g.next());
    auto t = build_count_tables(s);
    for (std::size_t x = 0; x < n; ++x) {
      const auto rad = radius_of(s.row(x), s);
      const auto rem = remoteness_of_row(s, x);
      for (std::size_t k = 0; k < d; ++k) {
        REQUIRE(radius_leq(x, k, t) == (rad <= k));
        REQUIRE(remoteness_gt(x, k, t) == (rem > k));
      }
    }
  }
}

TEST_CASE("inclexcl solvers") {
  auto s = from_words({"00", "01", "11"});
  auto c = inclexcl_closest(s);
  CHECK(c.center_index == 1);
  CHECK(c.objective == 1);
  CHECK(c.algorithm == "inclexcl");
  auto r = inclexcl_remotest(from_words({"000", "111"}));
  CHECK(r.objective == 3);
  CHECK(inclexcl_closest(from_words({"101", "101"})).objective == 0);

  auto xxy = from_words({"0101", "0101", "1110"});
  auto far = inclexcl_remotest(xxy);
  CHECK(far.center_index == 2);
  CHECK(far.objective == 3);

  CHECK(inclexcl_closest(from_words({"1"})).objective == 0);
  CHECK_THROWS_AS(inclexcl_remotest(from_words({"1"})), InvalidArgument);
  CHECK_THROWS_AS(inclexcl_closest(random_instance(3, 40, 2, 1)), BudgetError);
}

TEST_CASE("inclexcl solvers agree with naive") {
  SplitMix64 g(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + g.below(40), d = 1 + g.below(11);
    auto s = random_instance(n, d, static_cast<Symbol>(2 + g.below(3)), g.next());
    InclExclOptions o;
    o.threads = 1 + static_cast<unsigned>(g.below(3));
    auto a = inclexcl_closest(s, o), b = naive_closest(s);
    CHECK(a.objective == b.objective);
    CHECK(a.center_index == b.center_index);
    auto c = inclexcl_remotest(s, o), e = naive_remotest(s);
    CHECK(c.objective == e.objective);
    CHECK(c.center_index == e.center_index);
  }
}

TEST_CASE("s table csv") {
  auto t = build_count_tables(from_words({"00", "01", "11"}));
  const auto csv = s_table_csv(t);
  CHECK(csv.rfind("x,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
