#include "hammctr/inclexcl.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <thread>

#include "hammctr/error.hpp"
#include "refine_detail.hpp"

namespace hammctr {

BinomialTable::BinomialTable(std::size_t max_a) : max_a_(max_a) {
  if (max_a > 67) throw InvalidArgument("binomial table limited to a <= 67");
  const std::size_t w = max_a + 1;
  rows_.assign(w * w, 0);
  for (std::size_t a = 0; a <= max_a; ++a) {
    rows_[a * w] = 1;
    for (std::size_t b = 1; b <= a; ++b)
      rows_[a * w + b] = rows_[(a - 1) * w + b - 1] + (b < a ? rows_[(a - 1) * w + b] : 0);
  }
}

std::uint64_t BinomialTable::operator()(std::size_t a, std::size_t b) const {
  if (a > max_a_) throw InvalidArgument("binomial argument beyond table");
  if (b > a) return 0;
  return rows_[a * (max_a_ + 1) + b];
}

namespace {

const BinomialTable &binomials() {
  static const BinomialTable table(64);
  return table;
}

std::int64_t narrow(Wide v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error("identity sum does not fit 64 bits");
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::int64_t zero_sum_identity(std::size_t m, std::size_t l) {
  if (m < 1 || l < 1) throw InvalidArgument("zero_sum_identity needs m >= 1 and l >= 1");
  const auto &C = binomials();
  Wide sum = 0;
  for (std::size_t i = 0; i <= l; ++i) {
    Wide term = Wide(C(m + l - 1, m + i - 1)) * C(m + i - 1, m - 1);
    sum += (i % 2 ? -term : term);
  }
  return narrow(sum);
}

std::int64_t one_sum_identity(std::size_t m, std::size_t l) {
  if (m < 1) throw InvalidArgument("one_sum_identity needs m >= 1");
  const auto &C = binomials();
  Wide sum = 0;
  for (std::size_t i = 0; i <= l; ++i) {
    Wide term = Wide(C(m + l, m + i)) * C(m + i - 1, m - 1);
    sum += (i % 2 ? -term : term);
  }
  return narrow(sum);
}

std::int64_t hd_leq_indicator(std::span<const Symbol> x, std::span<const Symbol> y, std::size_t k,
                              std::uint64_t cap) {
  if (x.size() != y.size()) throw InvalidArgument("hd_leq_indicator: lengths differ");
  const std::size_t d = x.size();
  if (k >= d) throw InvalidArgument("hd_leq_indicator needs 0 <= k < d");
  if (!candidate_count(2, d, cap)) throw BudgetError("2^d subsets exceed the enumeration cap");
  std::uint64_t agree = 0;
  for (std::size_t p = 0; p < d; ++p)
    if (x[p] == y[p]) agree |= std::uint64_t{1} << p;
  const auto &C = binomials();
  Wide sum = 0;
  const std::uint64_t subsets = std::uint64_t{1} << d;
  for (std::uint64_t I = 0; I < subsets; ++I) {
    const auto size = static_cast<std::size_t>(std::popcount(I));
    if (size < d - k || (I & ~agree)) continue;
    Wide term = C(size - 1, d - k - 1);
    sum += ((size - (d - k)) % 2 ? -term : term);
  }
  return narrow(sum);
}

namespace {

void check_limits(const StringSet &set, std::size_t d_max) {
  const std::size_t d = set.d();
  if (d > d_max || d > 62)
    throw BudgetError("inclusion-exclusion needs d <= d_max=" + std::to_string(std::min<std::size_t>(d_max, 62)) +
                      " but d=" + std::to_string(d) + "; use the naive or matmul solver");
  // Largest signed term is n * C(d-1, ceil((d-1)/2)) * C(d, ceil(d/2)); d+1 of them are summed.
  const auto &C = binomials();
  const std::size_t dm1 = d - 1;
  Wide bound = 0;
  Wide a = Wide(set.n());
  bool overflow = __builtin_mul_overflow(a, Wide(C(dm1, (dm1 + 1) / 2)), &bound) ||
                  __builtin_mul_overflow(bound, Wide(C(d, (d + 1) / 2)), &bound) ||
                  __builtin_mul_overflow(bound, Wide(d + 1), &bound);
  if (overflow || bound < 0) throw BudgetError("signed sums could overflow the 128-bit accumulator");
}

void check_budget(std::uint64_t need, std::uint64_t budget, const char *what) {
  if (need > budget)
    throw BudgetError(std::string(what) + " needs " + std::to_string(need) +
                      " bytes, over the budget of " + std::to_string(budget) +
                      " bytes; use the naive solver");
}

// Depth-first sweep over subsets: each child adds a position below the
// smallest one already present, so its parent is the subset with the lowest
// bit cleared. Keeps one partition per depth.
class Streamer {
public:
  Streamer(const StringSet &set, const std::vector<detail::Buckets> &buckets)
      : n_(set.n()), d_(set.d()), buckets_(buckets), ids_(d_ + 1, std::vector<std::uint32_t>(n_)),
        sizes_(d_ + 1), scratch_(n_), s_(n_ * (d_ + 1), 0) {}

  void run_branch(std::size_t position) {
    sizes_[0].assign(1, static_cast<std::uint32_t>(n_));
    std::fill(ids_[0].begin(), ids_[0].end(), 0);
    descend(0, position);
  }

  std::vector<std::int64_t> &s() { return s_; }
  std::uint64_t refinements() const { return refinements_; }

private:
  // Builds the partition for parent-at-`level` plus `position`, then visits it.
  void descend(std::size_t level, std::size_t position) {
    const std::size_t next = level + 1;
    detail::refine_ids(ids_[level], buckets_[position], ids_[next], sizes_[next], scratch_);
    ++refinements_;
    visit(next, position);
  }

  void visit(std::size_t level, std::size_t below) {
    const auto &ids = ids_[level];
    const auto &sizes = sizes_[level];
    const std::size_t w = d_ + 1;
    if (sizes.size() == n_) {
      // All singletons: every superset within the remaining positions has T = 1.
      const auto &C = binomials();
      for (std::size_t j = 0; j <= below; ++j) {
        const auto c = static_cast<std::int64_t>(C(below, j));
        for (std::size_t x = 0; x < n_; ++x) s_[x * w + level + j] += c;
      }
      return;
    }
    for (std::size_t x = 0; x < n_; ++x) s_[x * w + level] += sizes[ids[x]];
    for (std::size_t i = 0; i < below; ++i) descend(level, i);
  }

  std::size_t n_, d_;
  const std::vector<detail::Buckets> &buckets_;
  std::vector<std::vector<std::uint32_t>> ids_;
  std::vector<std::vector<std::uint32_t>> sizes_;
  detail::RefineScratch scratch_;
  std::vector<std::int64_t> s_;
  std::uint64_t refinements_ = 0;
};

std::vector<detail::Buckets> all_position_buckets(const StringSet &set) {
  std::vector<detail::Buckets> out;
  out.reserve(set.d());
  for (std::size_t p = 0; p < set.d(); ++p) out.push_back(detail::position_buckets(set, p));
  return out;
}

CountTables stream_tables(const StringSet &set, std::uint64_t budget, unsigned threads) {
  const std::size_t n = set.n(), d = set.d();
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(d)));
  const std::uint64_t per_worker = 8ULL * n * (d + 1) * 2 + 20ULL * n;
  check_budget(8ULL * n * d + 8ULL * n * (d + 1) + per_worker * threads, budget, "count tables");

  const auto buckets = all_position_buckets(set);
  CountTables out;
  out.n = n;
  out.d = d;
  out.s.assign(n * (d + 1), 0);
  for (std::size_t x = 0; x < n; ++x) out.s[x * (d + 1)] = static_cast<std::int64_t>(n);

  std::vector<Streamer> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) workers.emplace_back(set, buckets);
  auto work = [&](unsigned t) {
    for (std::size_t p = t; p < d; p += threads) workers[t].run_branch(p);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto &th : pool) th.join();
  }
  for (auto &w : workers) {
    const auto &s = w.s();
    for (std::size_t k = 0; k < s.size(); ++k) out.s[k] += s[k];
    out.refinements += w.refinements();
  }
  return out;
}

CountTables full_tables(const StringSet &set, std::uint64_t budget) {
  const std::size_t n = set.n(), d = set.d();
  const std::uint64_t subsets = std::uint64_t{1} << d;
  std::uint64_t need = 0;
  if (__builtin_mul_overflow(subsets, std::uint64_t{8} * n, &need)) need = UINT64_MAX;
  check_budget(need + 16ULL * n * (d + 1), budget, "full count tables");

  const auto buckets = all_position_buckets(set);
  CountTables out;
  out.n = n;
  out.d = d;
  out.s.assign(n * (d + 1), 0);
  out.t.assign(subsets * n, 0);
  std::vector<std::uint32_t> ids(subsets * n, 0);
  std::vector<std::uint32_t> sizes;
  detail::RefineScratch scratch(n);

  std::vector<std::uint64_t> order(subsets);
  for (std::uint64_t I = 0; I < subsets; ++I) order[I] = I;
  std::stable_sort(order.begin(), order.end(), [](std::uint64_t a, std::uint64_t b) {
    return std::popcount(a) < std::popcount(b);
  });

  for (std::uint64_t I : order) {
    std::uint32_t *cur = ids.data() + I * n;
    if (I == 0) {
      sizes.assign(1, static_cast<std::uint32_t>(n));
    } else {
      const std::uint64_t low = I & (~I + 1);
      const std::uint64_t pred = I ^ low;
      const auto pos = static_cast<std::size_t>(std::countr_zero(low));
      detail::refine_ids({ids.data() + pred * n, n}, buckets[pos], {cur, n}, sizes, scratch);
      ++out.refinements;
    }
    const std::size_t l = static_cast<std::size_t>(std::popcount(I));
    for (std::size_t x = 0; x < n; ++x) {
      const std::uint32_t c = sizes[cur[x]];
      out.t[I * n + x] = c;
      out.s[x * (d + 1) + l] += c;
    }
  }
  return out;
}

Wide signed_sum(std::size_t x, std::size_t k, const CountTables &tables) {
  const std::size_t d = tables.d;
  if (k >= d) throw InvalidArgument("k must satisfy 0 <= k < d");
  const auto &C = binomials();
  Wide sum = 0;
  for (std::size_t l = d - k; l <= d; ++l) {
    Wide term = Wide(C(l - 1, d - k - 1)) * tables.S(x, l);
    sum += ((l - (d - k)) % 2 ? -term : term);
  }
  return sum;
}

}  // namespace

CountTables build_count_tables(const StringSet &set, const CountTableOptions &options) {
  check_limits(set, options.d_max);
  if (options.keep_t) return full_tables(set, options.budget_bytes);
  return stream_tables(set, options.budget_bytes, options.threads);
}

std::string s_table_csv(const CountTables &tables) {
  std::ostringstream out;
  out << 'x';
  for (std::size_t l = 0; l <= tables.d; ++l) out << ',' << l;
  out << '\n';
  for (std::size_t x = 0; x < tables.n; ++x) {
    out << x;
    for (std::size_t l = 0; l <= tables.d; ++l) out << ',' << tables.S(x, l);
    out << '\n';
  }
  return out.str();
}

bool radius_leq(std::size_t x, std::size_t k, const CountTables &tables) {
  return signed_sum(x, k, tables) == Wide(tables.n);
}

bool remoteness_gt(std::size_t x, std::size_t k, const CountTables &tables) {
  if (tables.S(x, tables.d) > 1) return false;
  return signed_sum(x, k, tables) == 1;
}

namespace {

CountTables solver_tables(const StringSet &set, const InclExclOptions &options) {
  check_limits(set, options.d_max);
  return stream_tables(set, options.budget_bytes, options.threads);
}

SolveResult finish(const StringSet &set, std::size_t index, std::size_t objective,
                   const CountTables &tables) {
  auto row = set.row(index);
  SolveResult r{index, {row.begin(), row.end()}, objective, "inclexcl", {}};
  r.counters = {{"subsets", std::uint64_t{1} << set.d()}, {"refinements", tables.refinements}};
  return r;
}

}  // namespace

SolveResult inclexcl_closest(const StringSet &set, const InclExclOptions &options) {
  const auto tables = solver_tables(set, options);
  for (std::size_t k = 0; k < set.d(); ++k)
    for (std::size_t x = 0; x < set.n(); ++x)
      if (radius_leq(x, k, tables)) return finish(set, x, k, tables);
  return finish(set, 0, set.d(), tables);
}

SolveResult inclexcl_remotest(const StringSet &set, const InclExclOptions &options) {
  if (set.n() < 2) throw InvalidArgument("remoteness undefined on fewer than two strings");
  const auto tables = solver_tables(set, options);
  for (std::size_t k = set.d(); k-- > 0;)
    for (std::size_t x = 0; x < set.n(); ++x)
      if (remoteness_gt(x, k, tables)) return finish(set, x, k + 1, tables);
  return finish(set, 0, 0, tables);
}

}  // namespace hammctr
