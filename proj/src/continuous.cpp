#include <algorithm>
#include <bit>
#include <deque>
#include <limits>

#include "hammctr/core.hpp"
#include "hammctr/error.hpp"

namespace hammctr {

std::optional<std::uint64_t> candidate_count(Symbol sigma, std::size_t d, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (total > cap / sigma) return std::nullopt;
    total *= sigma;
  }
  if (total > cap) return std::nullopt;
  return total;
}

namespace {

std::uint64_t require_candidates(const StringSet &set, std::uint64_t cap) {
  auto total = candidate_count(set.sigma(), set.d(), cap);
  if (!total)
    throw BudgetError("continuous search over sigma^d = " + std::to_string(set.sigma()) + "^" +
                      std::to_string(set.d()) + " candidates exceeds the enumeration cap of " +
                      std::to_string(cap));
  return *total;
}

// Lexicographic rank <-> mask: position 0 is the most significant bit.
std::uint64_t row_mask(std::span<const Symbol> r) {
  std::uint64_t m = 0;
  for (Symbol s : r) m = (m << 1) | s;
  return m;
}

std::vector<Symbol> mask_to_string(std::uint64_t m, std::size_t d) {
  std::vector<Symbol> out(d);
  for (std::size_t k = 0; k < d; ++k) out[k] = (m >> (d - 1 - k)) & 1U;
  return out;
}

std::vector<Symbol> rank_to_string(std::uint64_t rank, std::size_t d, Symbol sigma) {
  std::vector<Symbol> out(d);
  for (std::size_t k = d; k-- > 0;) {
    out[k] = static_cast<Symbol>(rank % sigma);
    rank /= sigma;
  }
  return out;
}

// Advances `cand` to the next string in lexicographic order; false on wrap-around.
bool next_candidate(std::vector<Symbol> &cand, Symbol sigma) {
  for (std::size_t k = cand.size(); k-- > 0;) {
    if (++cand[k] < sigma) return true;
    cand[k] = 0;
  }
  return false;
}

template <bool Closest>
SolveResult brute_binary(const StringSet &set, std::uint64_t total) {
  std::vector<std::uint64_t> rows(set.n());
  for (std::size_t i = 0; i < set.n(); ++i) rows[i] = row_mask(set.row(i));
  std::uint64_t best_mask = 0;
  std::size_t best = Closest ? std::numeric_limits<std::size_t>::max() : 0;
  bool have = false;
  for (std::uint64_t c = 0; c < total; ++c) {
    std::size_t value = Closest ? 0 : std::numeric_limits<std::size_t>::max();
    for (std::uint64_t r : rows) {
      auto h = static_cast<std::size_t>(std::popcount(c ^ r));
      if constexpr (Closest) {
        value = std::max(value, h);
        if (have && value >= best) break;
      } else {
        value = std::min(value, h);
        if (have && value <= best) break;
      }
    }
    if (!have || (Closest ? value < best : value > best)) {
      best = value;
      best_mask = c;
      have = true;
    }
  }
  return {std::nullopt, mask_to_string(best_mask, set.d()), best, "brute-continuous", {}};
}

template <bool Closest>
SolveResult brute_general(const StringSet &set) {
  std::vector<Symbol> cand(set.d(), 0);
  std::vector<Symbol> best_cand = cand;
  std::size_t best = Closest ? std::numeric_limits<std::size_t>::max() : 0;
  bool have = false;
  do {
    std::size_t value = Closest ? 0 : std::numeric_limits<std::size_t>::max();
    for (std::size_t j = 0; j < set.n(); ++j) {
      std::size_t h = hamming(cand, set.row(j));
      if constexpr (Closest) {
        value = std::max(value, h);
        if (have && value >= best) break;
      } else {
        value = std::min(value, h);
        if (have && value <= best) break;
      }
    }
    if (!have || (Closest ? value < best : value > best)) {
      best = value;
      best_cand = cand;
      have = true;
    }
  } while (next_candidate(cand, set.sigma()));
  return {std::nullopt, std::move(best_cand), best, "brute-continuous", {}};
}

}  // namespace

SolveResult brute_continuous_closest(const StringSet &set, std::uint64_t cap) {
  const auto total = require_candidates(set, cap);
  if (set.is_binary() && set.d() < 64) return brute_binary<true>(set, total);
  return brute_general<true>(set);
}

SolveResult brute_continuous_remotest(const StringSet &set, std::uint64_t cap) {
  const auto total = require_candidates(set, cap);
  if (set.is_binary() && set.d() < 64) return brute_binary<false>(set, total);
  return brute_general<false>(set);
}

namespace {

// One breadth-first layer on the hypercube {0,1}^d stored as a bitset:
// returns cover | N(cover).
void expand_hypercube(const std::vector<std::uint64_t> &cover, std::vector<std::uint64_t> &next,
                      std::size_t d) {
  static constexpr std::uint64_t kLow[6] = {
      0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
      0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL};
  next = cover;
  const std::size_t words = cover.size();
  for (std::size_t b = 0; b < d; ++b) {
    if (b < 6) {
      const unsigned shift = 1U << b;
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t c = cover[w];
        next[w] |= ((c >> shift) & kLow[b]) | ((c & kLow[b]) << shift);
      }
    } else {
      const std::size_t stride = std::size_t{1} << (b - 6);
      for (std::size_t w = 0; w < words; ++w) next[w] |= cover[w ^ stride];
    }
  }
}

SolveResult sweep_binary(std::span<const std::uint64_t> ranks, std::size_t d, std::uint64_t total) {
  std::vector<std::uint64_t> cover(static_cast<std::size_t>((total + 63) / 64), 0);
  for (std::uint64_t m : ranks) cover[m / 64] |= std::uint64_t{1} << (m % 64);
  return sweep_binary_cover(std::move(cover), d);
}

SolveResult sweep_general(std::span<const std::uint64_t> ranks, std::size_t d, Symbol sigma,
                          std::uint64_t total) {
  std::vector<std::uint64_t> weight(d);
  {
    std::uint64_t p = 1;
    for (std::size_t k = d; k-- > 0;) {
      weight[k] = p;
      p *= sigma;
    }
  }
  constexpr std::uint8_t kUnseen = std::numeric_limits<std::uint8_t>::max();
  std::vector<std::uint8_t> dist(total, kUnseen);
  std::deque<std::uint64_t> queue;
  for (std::uint64_t rank : ranks) {
    if (dist[rank] == kUnseen) {
      dist[rank] = 0;
      queue.push_back(rank);
    }
  }
  while (!queue.empty()) {
    std::uint64_t u = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < d; ++k) {
      const auto digit = static_cast<Symbol>((u / weight[k]) % sigma);
      const std::uint64_t base = u - digit * weight[k];
      for (Symbol v = 0; v < sigma; ++v) {
        if (v == digit) continue;
        std::uint64_t w = base + v * weight[k];
        if (dist[w] == kUnseen) {
          dist[w] = static_cast<std::uint8_t>(dist[u] + 1);
          queue.push_back(w);
        }
      }
    }
  }
  auto it = std::max_element(dist.begin(), dist.end());
  auto rank = static_cast<std::uint64_t>(it - dist.begin());
  return {std::nullopt, rank_to_string(rank, d, sigma), *it, "sweep-continuous", {}};
}

}  // namespace

SolveResult sweep_binary_cover(std::vector<std::uint64_t> cover, std::size_t d) {
  if (d >= 64) throw InvalidArgument("binary cover sweep needs d < 64");
  const std::uint64_t total = std::uint64_t{1} << d;
  const std::size_t words = static_cast<std::size_t>((total + 63) / 64);
  if (cover.size() != words) throw InvalidArgument("cover must hold 2^d bits");
  const std::uint64_t tail = (total % 64) ? ((std::uint64_t{1} << (total % 64)) - 1) : ~0ULL;
  auto full = [&](const std::vector<std::uint64_t> &c) {
    for (std::size_t w = 0; w + 1 < words; ++w)
      if (c[w] != ~0ULL) return false;
    return (c[words - 1] & tail) == tail;
  };
  auto empty = [&](const std::vector<std::uint64_t> &c) {
    return std::all_of(c.begin(), c.end(), [](std::uint64_t w) { return w == 0; });
  };
  if (empty(cover)) throw InvalidArgument("sweep needs at least one string");
  std::size_t layers = 0;
  std::vector<std::uint64_t> next;
  while (!full(cover)) {
    expand_hypercube(cover, next, d);
    cover.swap(next);
    ++layers;
  }
  // After the loop `next` holds the last partial cover.
  std::uint64_t argmax = 0;
  if (layers > 0) {
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t missing = ~next[w];
      if (w == words - 1) missing &= tail;
      if (missing) {
        argmax = w * 64 + static_cast<std::uint64_t>(std::countr_zero(missing));
        break;
      }
    }
  }
  return {std::nullopt, mask_to_string(argmax, d), layers, "sweep-continuous", {}};
}

SolveResult sweep_continuous_remotest(const StringSet &set, std::uint64_t cap) {
  require_candidates(set, cap);
  std::vector<std::uint64_t> ranks(set.n());
  for (std::size_t i = 0; i < set.n(); ++i)
    for (Symbol x : set.row(i)) ranks[i] = ranks[i] * set.sigma() + x;
  return sweep_continuous_remotest_ranks(ranks, set.d(), set.sigma(), cap);
}

SolveResult sweep_continuous_remotest_ranks(std::span<const std::uint64_t> ranks, std::size_t d, Symbol sigma,
                                            std::uint64_t cap) {
  const auto total = candidate_count(sigma, d, cap);
  if (!total)
    throw BudgetError("enumerating sigma^d = " + std::to_string(sigma) + "^" + std::to_string(d) +
                      " candidates exceeds the cap of " + std::to_string(cap));
  if (ranks.empty()) throw InvalidArgument("sweep needs at least one string");
  if (d >= 255) throw BudgetError("sweep supports d < 255");
  for (std::uint64_t r : ranks)
    if (r >= *total) throw InvalidArgument("rank " + std::to_string(r) + " is outside sigma^d");
  if (sigma == 2 && d < 64) return sweep_binary(ranks, d, *total);
  return sweep_general(ranks, d, sigma, *total);
}

}  // namespace hammctr
