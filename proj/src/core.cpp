#include "hammctr/core.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "hammctr/error.hpp"

namespace hammctr {

StringSet::StringSet(std::size_t n, std::size_t d, Symbol sigma, std::vector<Symbol> symbols)
    : n_(n), d_(d), sigma_(sigma), symbols_(std::move(symbols)) {
  if (n_ == 0) throw InvalidArgument("an instance needs at least one string");
  if (d_ == 0) throw InvalidArgument("string length must be at least 1");
  if (sigma_ < 2) throw InvalidArgument("alphabet size must be at least 2");
  if (symbols_.size() != n_ * d_)
    throw InvalidArgument("expected " + std::to_string(n_ * d_) + " symbols, got " +
                          std::to_string(symbols_.size()));
  for (std::size_t k = 0; k < symbols_.size(); ++k) {
    if (symbols_[k] >= sigma_)
      throw InvalidArgument("symbol " + std::to_string(symbols_[k]) + " in string " +
                            std::to_string(k / d_) + " is not below sigma=" +
                            std::to_string(sigma_));
  }
  if (sigma_ == 2) {
    words_per_row_ = (d_ + 63) / 64;
    packed_.assign(n_ * words_per_row_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      std::uint64_t *words = packed_.data() + i * words_per_row_;
      const Symbol *r = symbols_.data() + i * d_;
      for (std::size_t k = 0; k < d_; ++k)
        if (r[k]) words[k / 64] |= std::uint64_t{1} << (k % 64);
    }
  }
}

StringSet StringSet::from_rows(Symbol sigma, const std::vector<std::vector<Symbol>> &rows) {
  if (rows.empty()) throw InvalidArgument("an instance needs at least one string");
  const std::size_t d = rows.front().size();
  std::vector<Symbol> flat;
  flat.reserve(rows.size() * d);
  for (const auto &r : rows) {
    if (r.size() != d) throw InvalidArgument("all strings must have the same length");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return StringSet(rows.size(), d, sigma, std::move(flat));
}

std::size_t hamming(std::span<const Symbol> x, std::span<const Symbol> y) {
  if (x.size() != y.size())
    throw InvalidArgument("hamming: lengths differ (" + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
  std::size_t count = 0;
  for (std::size_t k = 0; k < x.size(); ++k) count += x[k] != y[k];
  return count;
}

std::size_t hamming_packed(std::span<const std::uint64_t> x,
                           std::span<const std::uint64_t> y) noexcept {
  std::size_t count = 0;
  for (std::size_t w = 0; w < x.size(); ++w) count += std::popcount(x[w] ^ y[w]);
  return count;
}

std::size_t hamming_rows(const StringSet &x, std::size_t i, std::size_t j) noexcept {
  if (x.is_binary()) return hamming_packed(x.packed_row(i), x.packed_row(j));
  auto a = x.row(i);
  auto b = x.row(j);
  std::size_t count = 0;
  for (std::size_t k = 0; k < a.size(); ++k) count += a[k] != b[k];
  return count;
}

std::size_t radius_of(std::span<const Symbol> x, const StringSet &set) {
  std::size_t best = 0;
  for (std::size_t j = 0; j < set.n(); ++j) best = std::max(best, hamming(x, set.row(j)));
  return best;
}

std::size_t distance_to(std::span<const Symbol> x, const StringSet &set) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t j = 0; j < set.n(); ++j) best = std::min(best, hamming(x, set.row(j)));
  return best;
}

std::size_t remoteness_of_row(const StringSet &set, std::size_t i) {
  if (set.n() < 2) throw InvalidArgument("remoteness undefined on fewer than two strings");
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t j = 0; j < set.n(); ++j)
    if (j != i) best = std::min(best, hamming_rows(set, i, j));
  return best;
}

namespace {

// Plain symbol-by-symbol comparison; kept free of the packed form on purpose so
// the naive solvers measure scalar work unless asked otherwise.
inline std::size_t scalar_distance(const Symbol *a, const Symbol *b, std::size_t d) noexcept {
  std::size_t count = 0;
  for (std::size_t k = 0; k < d; ++k) count += a[k] != b[k];
  return count;
}

template <class Dist>
SolveResult naive_closest_impl(const StringSet &set, Dist dist) {
  std::size_t best_index = 0;
  std::size_t best_radius = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < set.n(); ++i) {
    std::size_t radius = 0;
    for (std::size_t j = 0; j < set.n(); ++j) radius = std::max(radius, dist(i, j));
    if (radius < best_radius) {
      best_radius = radius;
      best_index = i;
    }
  }
  auto row = set.row(best_index);
  return {best_index, {row.begin(), row.end()}, best_radius, "naive", {}};
}

template <class Dist>
SolveResult naive_remotest_impl(const StringSet &set, Dist dist) {
  if (set.n() < 2) throw InvalidArgument("remoteness undefined on fewer than two strings");
  std::size_t best_index = 0;
  std::size_t best_distance = 0;
  bool have = false;
  for (std::size_t i = 0; i < set.n(); ++i) {
    std::size_t nearest = std::numeric_limits<std::size_t>::max();
    for (std::size_t j = 0; j < set.n(); ++j)
      if (j != i) nearest = std::min(nearest, dist(i, j));
    if (!have || nearest > best_distance) {
      best_distance = nearest;
      best_index = i;
      have = true;
    }
  }
  auto row = set.row(best_index);
  return {best_index, {row.begin(), row.end()}, best_distance, "naive", {}};
}

}  // namespace

SolveResult naive_closest(const StringSet &set, NaiveOptions options) {
  if (options.packed && set.is_binary())
    return naive_closest_impl(set, [&](std::size_t i, std::size_t j) {
      return hamming_packed(set.packed_row(i), set.packed_row(j));
    });
  const Symbol *base = set.symbols().data();
  const std::size_t d = set.d();
  return naive_closest_impl(set, [&](std::size_t i, std::size_t j) {
    return scalar_distance(base + i * d, base + j * d, d);
  });
}

SolveResult naive_remotest(const StringSet &set, NaiveOptions options) {
  if (options.packed && set.is_binary())
    return naive_remotest_impl(set, [&](std::size_t i, std::size_t j) {
      return hamming_packed(set.packed_row(i), set.packed_row(j));
    });
  const Symbol *base = set.symbols().data();
  const std::size_t d = set.d();
  return naive_remotest_impl(set, [&](std::size_t i, std::size_t j) {
    return scalar_distance(base + i * d, base + j * d, d);
  });
}

DistanceMatrix naive_distance_matrix(const StringSet &set) {
  const std::size_t n = set.n();
  DistanceMatrix out{n, std::vector<std::uint32_t>(n * n, 0)};
  const Symbol *base = set.symbols().data();
  const std::size_t d = set.d();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto v = static_cast<std::uint32_t>(scalar_distance(base + i * d, base + j * d, d));
      out.entries[i * n + j] = v;
      out.entries[j * n + i] = v;
    }
  return out;
}

std::vector<Symbol> complement(std::span<const Symbol> x) {
  std::vector<Symbol> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] > 1) throw InvalidArgument("complement is only defined for binary strings");
    out[k] = 1 - x[k];
  }
  return out;
}

}  // namespace hammctr
