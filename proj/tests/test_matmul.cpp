#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hammctr/error.hpp"
#include "hammctr/generate.hpp"
#include "hammctr/matmul.hpp"
#include "hammctr/rng.hpp"
#include "oracle.hpp"

using namespace hammctr;

namespace {

StringSet from_words(const std::vector<std::string> &words, Symbol sigma = 2) {
  return StringSet::from_rows(sigma, oracle::parse_rows(words));
}

std::vector<std::uint32_t> direct_matches(const StringSet &s) {
  std::vector<std::uint32_t> m(s.n() * s.n());
  for (std::size_t i = 0; i < s.n(); ++i)
    for (std::size_t j = 0; j < s.n(); ++j)
      m[i * s.n() + j] = static_cast<std::uint32_t>(s.d() - hamming(s.row(i), s.row(j)));
  return m;
}

}  // namespace

TEST_CASE("indicator matrix") {
  auto a = build_indicator(from_words({"01"}));
  auto nz = a.row_nonzeros(0);
  REQUIRE(nz.size() == 2);
  CHECK(nz[0] == 0 * 2 + 0);
  CHECK(nz[1] == 1 * 2 + 1);

  auto s = random_instance(30, 7, 5, 3);
  auto b = build_indicator(s);
  for (std::size_t i = 0; i < s.n(); ++i) CHECK(b.row_nonzeros(i).size() == s.d());
  for (std::size_t c = 0; c < b.columns(); ++c) {
    const std::size_t k = b.column_ids[c] / 5;
    const auto sym = static_cast<Symbol>(b.column_ids[c] % 5);
    std::uint32_t tally = 0;
    for (std::size_t i = 0; i < s.n(); ++i) tally += s.row(i)[k] == sym;
    CHECK(b.column_counts[c] == tally);
    CHECK(b.column_start[c + 1] - b.column_start[c] == tally);
  }
}

TEST_CASE("column split") {
  auto a = build_indicator(random_instance(40, 10, 3, 2));
  auto sp = split_columns(a, 15);
  CHECK(sp.heavy.size() + sp.light.size() == a.columns());
  for (auto c : sp.heavy) CHECK(a.column_counts[c] >= 15);
  for (auto c : sp.light) CHECK(a.column_counts[c] < 15);
  CHECK(auto_tau(1, 5) == 1);
  const std::size_t t = auto_tau(1000, 100);
  CHECK(t >= 1);
  CHECK(t <= 1000);
}

TEST_CASE("gram parts") {
  auto s = random_instance(50, 40, 4, 6);
  auto a = build_indicator(s);
  const auto want = direct_matches(s);
  for (std::size_t tau : {1, 4, 13, 50, 51}) {
    auto sp = split_columns(a, tau);
    auto h = gram_heavy(a, sp), l = gram_light(a, sp);
    std::vector<std::uint32_t> sum(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) sum[i] = h[i] + l[i];
    CHECK(sum == want);
  }
  auto none = split_columns(a, 1000);
  CHECK(none.heavy.empty());
  for (auto v : gram_heavy(a, none)) CHECK(v == 0);

  auto same = from_words({"0110", "0110", "0110"});
  auto sa = build_indicator(same);
  for (auto v : gram_heavy(sa, split_columns(sa, 3))) CHECK(v == 4);

  auto distinct = from_words({"0", "1", "2"}, 3);
  auto da = build_indicator(distinct);
  auto light = gram_light(da, split_columns(da, 2));
  CHECK(light == std::vector<std::uint32_t>{1, 0, 0, 0, 1, 0, 0, 0, 1});
}

TEST_CASE("distance matrix") {
  auto m = distance_matrix(from_words({"00", "01", "11"}));
  CHECK(m.entries == std::vector<std::uint32_t>{0, 1, 2, 1, 0, 1, 2, 1, 0});
  auto s = random_instance(64, 256, 8, 1);
  CHECK(distance_matrix(s) == naive_distance_matrix(s));
  auto b = random_instance(70, 200, 2, 2);
  MatmulOptions pop;
  pop.binary_popcount = true;
  MatmulStats stats;
  CHECK(distance_matrix(b, pop, &stats) == naive_distance_matrix(b));
  CHECK(stats.popcount_path);
  MatmulOptions tiny;
  tiny.tile = 3;
  tiny.threads = 2;
  CHECK(distance_matrix(s, tiny) == naive_distance_matrix(s));
}

TEST_CASE("distance matrix agrees with naive on random instances") {
  SplitMix64 g(77);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + g.below(90), d = 1 + g.below(120);
    const auto sigma = static_cast<Symbol>(2 + g.below(15));
    auto s = random_instance(n, d, sigma, g.next());
    MatmulOptions o;
    o.tau = g.below(3) == 0 ? 0 : 1 + g.below(n + 1);
    MatmulStats st;
    REQUIRE(distance_matrix(s, o, &st) == naive_distance_matrix(s));
    CHECK(st.light_pair_increments <= st.tau * n * d);
    CHECK(st.heavy_columns * st.tau <= n * d);
  }
}

TEST_CASE("matmul solvers") {
  auto s = from_words({"00", "01", "11"});
  auto c = matmul_closest(s);
  CHECK(c.center_index == 1);
  CHECK(c.objective == 1);
  auto r = matmul_remotest(s);
  CHECK(r.center_index == 0);
  CHECK(r.objective == 1);
  CHECK(c.algorithm == "matmul");
  CHECK(matmul_remotest(from_words({"0110", "0110", "1111"})).center_index == 2);
  CHECK_THROWS_AS(matmul_remotest(from_words({"1"})), InvalidArgument);

  SplitMix64 g(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_instance(2 + g.below(60), 1 + g.below(60), static_cast<Symbol>(2 + g.below(6)), g.next());
    for (std::size_t tau : {4, 16, 0}) {
      MatmulOptions o;
      o.tau = tau;
      auto a = matmul_closest(x, o), b = naive_closest(x);
      CHECK(a.objective == b.objective);
      CHECK(a.center_index == b.center_index);
      auto e = matmul_remotest(x, o), f = naive_remotest(x);
      CHECK(e.objective == f.objective);
      CHECK(e.center_index == f.center_index);
    }
  }
}

TEST_CASE("matmul budget") {
  MatmulOptions o;
  o.budget_bytes = 1000;
  CHECK_THROWS_AS(distance_matrix(random_instance(100, 4, 2, 1), o), BudgetError);
}

TEST_CASE("distance matrix dump") {
  auto m = distance_matrix(from_words({"00", "01", "11"}));
  const auto path = (std::filesystem::temp_directory_path() / "hammctr_dump_test.bin").string();
  write_distance_matrix(m, path);
  std::ifstream in(path, std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  REQUIRE(bytes.size() == 36);
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 2);
  CHECK(bytes[5] == 0);
  std::remove(path.c_str());
}
