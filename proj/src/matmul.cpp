#include "hammctr/matmul.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include "hammctr/error.hpp"
#include "refine_detail.hpp"

namespace hammctr {

std::vector<std::uint64_t> IndicatorMatrix::row_nonzeros(std::size_t i) const {
  std::vector<std::uint64_t> out(d);
  for (std::size_t k = 0; k < d; ++k) out[k] = column_ids[entries[i * d + k]];
  return out;
}

IndicatorMatrix build_indicator(const StringSet &set) {
  IndicatorMatrix a;
  a.n = set.n();
  a.d = set.d();
  a.sigma = set.sigma();
  a.entries.resize(a.n * a.d);
  a.column_start.push_back(0);
  a.column_rows.reserve(a.n * a.d);
  for (std::size_t k = 0; k < a.d; ++k) {
    auto b = detail::position_buckets(set, k);
    for (std::size_t c = 0; c + 1 < b.starts.size(); ++c) {
      const auto col = static_cast<std::uint32_t>(a.column_ids.size());
      const std::uint32_t first = b.order[b.starts[c]];
      a.column_ids.push_back(std::uint64_t{k} * a.sigma + set.row(first)[k]);
      a.column_counts.push_back(b.starts[c + 1] - b.starts[c]);
      for (std::uint32_t t = b.starts[c]; t < b.starts[c + 1]; ++t) {
        a.entries[b.order[t] * a.d + k] = col;
        a.column_rows.push_back(b.order[t]);
      }
      a.column_start.push_back(static_cast<std::uint32_t>(a.column_rows.size()));
    }
  }
  return a;
}

ColumnSplit split_columns(const IndicatorMatrix &a, std::size_t tau) {
  if (tau == 0) throw InvalidArgument("threshold tau must be positive");
  ColumnSplit s;
  s.tau = tau;
  for (std::uint32_t c = 0; c < a.columns(); ++c)
    (a.column_counts[c] >= tau ? s.heavy : s.light).push_back(c);
  return s;
}

std::size_t auto_tau(std::size_t n, std::size_t d) {
  if (n <= 1) return 1;
  const double delta = std::log(static_cast<double>(d)) / std::log(static_cast<double>(n));
  const double eps = 0.3 * std::min(1.0, delta);
  auto tau = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 1.0 - eps) - 1e-9));
  return std::clamp<std::size_t>(tau, 1, n);
}

namespace {

template <class F>
void parallel_rows(std::size_t blocks, unsigned threads, F &&body) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(blocks, 1))));
  if (threads == 1) {
    for (std::size_t b = 0; b < blocks; ++b) body(b);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t b = t; b < blocks; b += threads) body(b);
    });
  for (auto &th : pool) th.join();
}

void check_square_budget(std::size_t n, std::uint64_t budget) {
  std::uint64_t need = 0;
  if (__builtin_mul_overflow(std::uint64_t{n} * 4, std::uint64_t{n}, &need) || need > budget)
    throw BudgetError("an n x n distance matrix for n=" + std::to_string(n) +
                      " does not fit the memory budget of " + std::to_string(budget >> 20) + " MiB");
}

}  // namespace

std::vector<std::uint32_t> gram_heavy(const IndicatorMatrix &a, const ColumnSplit &split,
                                      const MatmulOptions &options, MatmulStats *stats) {
  const std::size_t n = a.n, h = split.heavy.size();
  check_square_budget(n, options.budget_bytes);
  std::vector<std::uint32_t> g(n * n, 0);
  if (h == 0) return g;
  std::uint64_t dense_bytes = 0;
  if (__builtin_mul_overflow(std::uint64_t{n}, std::uint64_t{h}, &dense_bytes) ||
      dense_bytes + 4ULL * n * n > options.budget_bytes)
    throw BudgetError("densifying " + std::to_string(h) +
                      " heavy columns exceeds the memory budget; use a larger tau");

  // Dense n x h 0/1 block, row-major.
  std::vector<std::uint8_t> dense(n * h, 0);
  for (std::size_t t = 0; t < h; ++t) {
    const std::uint32_t c = split.heavy[t];
    for (std::uint32_t p = a.column_start[c]; p < a.column_start[c + 1]; ++p)
      dense[std::size_t{a.column_rows[p]} * h + t] = 1;
  }

  const std::size_t tile = std::max<std::size_t>(options.tile, 1);
  const std::size_t blocks = (n + tile - 1) / tile;
  parallel_rows(blocks, options.threads, [&](std::size_t bi) {
    const std::size_t i0 = bi * tile, i1 = std::min(n, i0 + tile);
    for (std::size_t j0 = i0; j0 < n; j0 += tile) {
      const std::size_t j1 = std::min(n, j0 + tile);
      for (std::size_t c0 = 0; c0 < h; c0 += tile) {
        const std::size_t c1 = std::min(h, c0 + tile);
        for (std::size_t i = i0; i < i1; ++i) {
          const std::uint8_t *ri = dense.data() + i * h;
          for (std::size_t j = std::max(j0, i); j < j1; ++j) {
            const std::uint8_t *rj = dense.data() + j * h;
            std::uint32_t acc = 0;
            for (std::size_t c = c0; c < c1; ++c) acc += ri[c] * rj[c];
            g[i * n + j] += acc;
          }
        }
      }
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g[j * n + i] = g[i * n + j];

  if (stats) {
    stats->heavy_columns = h;
    stats->heavy_multiply_adds = std::uint64_t{n} * (n + 1) / 2 * h;
  }
  return g;
}

std::vector<std::uint32_t> gram_light(const IndicatorMatrix &a, const ColumnSplit &split,
                                      const MatmulOptions &options, MatmulStats *stats) {
  const std::size_t n = a.n;
  check_square_budget(n, options.budget_bytes);
  std::vector<std::uint32_t> g(n * n, 0);
  std::uint64_t increments = 0;
  for (std::uint32_t c : split.light) {
    const std::uint32_t *rows = a.column_rows.data() + a.column_start[c];
    const std::size_t m = a.column_start[c + 1] - a.column_start[c];
    for (std::size_t p = 0; p < m; ++p) {
      const std::size_t i = rows[p];
      for (std::size_t q = 0; q < m; ++q) ++g[i * n + rows[q]];
    }
    increments += std::uint64_t{m} * m;
  }
  if (stats) {
    stats->light_columns = split.light.size();
    stats->light_pair_increments = increments;
  }
  return g;
}

namespace {

DistanceMatrix popcount_matrix(const StringSet &set, const MatmulOptions &options) {
  const std::size_t n = set.n();
  check_square_budget(n, options.budget_bytes);
  DistanceMatrix m{n, std::vector<std::uint32_t>(n * n, 0)};
  const std::size_t tile = std::max<std::size_t>(options.tile, 1);
  parallel_rows((n + tile - 1) / tile, options.threads, [&](std::size_t bi) {
    const std::size_t i1 = std::min(n, bi * tile + tile);
    for (std::size_t i = bi * tile; i < i1; ++i) {
      auto ri = set.packed_row(i);
      for (std::size_t j = i + 1; j < n; ++j)
        m.entries[i * n + j] = static_cast<std::uint32_t>(hamming_packed(ri, set.packed_row(j)));
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.entries[j * n + i] = m.entries[i * n + j];
  return m;
}

}  // namespace

DistanceMatrix distance_matrix(const StringSet &set, const MatmulOptions &options, MatmulStats *stats) {
  MatmulStats local;
  MatmulStats &st = stats ? *stats : local;
  st = MatmulStats{};
  const std::size_t n = set.n(), d = set.d();
  if (d >= (std::size_t{1} << 31)) throw InvalidArgument("d must be below 2^31");
  if (options.binary_popcount && set.is_binary()) {
    st.popcount_path = true;
    return popcount_matrix(set, options);
  }
  check_square_budget(n, options.budget_bytes / 2);
  const std::size_t tau = options.tau ? options.tau : auto_tau(n, d);
  st.tau = tau;
  const auto a = build_indicator(set);
  const auto split = split_columns(a, tau);
  auto g = gram_heavy(a, split, options, &st);
  {
    auto light = gram_light(a, split, options, &st);
    for (std::size_t t = 0; t < g.size(); ++t) g[t] += light[t];
  }

  // Work bounds of the heavy-light split.
  const std::uint64_t nd = std::uint64_t{n} * d;
  if (st.light_pair_increments > std::uint64_t{tau} * nd)
    throw Error("light pair increments exceed tau*n*d");
  if (st.heavy_columns > nd / tau) throw Error("heavy column count exceeds n*d/tau");

  DistanceMatrix m{n, std::move(g)};
  for (auto &v : m.entries) v = static_cast<std::uint32_t>(d) - v;
  return m;
}

namespace {

void attach_stats(SolveResult &r, const MatmulStats &st) {
  if (st.popcount_path) {
    r.counters = {{"popcount_path", 1}};
    return;
  }
  r.counters = {{"tau", st.tau},
                {"heavy_columns", st.heavy_columns},
                {"light_columns", st.light_columns},
                {"light_pair_increments", st.light_pair_increments},
                {"heavy_multiply_adds", st.heavy_multiply_adds}};
}

}  // namespace

SolveResult matmul_closest(const StringSet &set, const MatmulOptions &options) {
  MatmulStats st;
  const auto m = distance_matrix(set, options, &st);
  const std::size_t n = set.n();
  std::size_t best_index = 0, best = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t *row = m.entries.data() + i * n;
    const std::size_t radius = *std::max_element(row, row + n);
    if (radius < best) {
      best = radius;
      best_index = i;
    }
  }
  auto row = set.row(best_index);
  SolveResult r{best_index, {row.begin(), row.end()}, best, "matmul", {}};
  attach_stats(r, st);
  return r;
}

SolveResult matmul_remotest(const StringSet &set, const MatmulOptions &options) {
  if (set.n() < 2) throw InvalidArgument("remoteness undefined on fewer than two strings");
  MatmulStats st;
  const auto m = distance_matrix(set, options, &st);
  const std::size_t n = set.n();
  std::size_t best_index = 0, best = 0;
  bool have = false;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t nearest = std::numeric_limits<std::size_t>::max();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) nearest = std::min<std::size_t>(nearest, m.at(i, j));
    if (!have || nearest > best) {
      best = nearest;
      best_index = i;
      have = true;
    }
  }
  auto row = set.row(best_index);
  SolveResult r{best_index, {row.begin(), row.end()}, best, "matmul", {}};
  attach_stats(r, st);
  return r;
}

void write_distance_matrix(const DistanceMatrix &m, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  std::vector<unsigned char> buf(m.entries.size() * 4);
  for (std::size_t t = 0; t < m.entries.size(); ++t)
    for (int b = 0; b < 4; ++b) buf[t * 4 + b] = static_cast<unsigned char>(m.entries[t] >> (8 * b));
  out.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("write failed: " + path);
}

}  // namespace hammctr
