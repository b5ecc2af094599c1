#include "hammctr/codes.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>

#include "hammctr/error.hpp"

namespace hammctr {

std::size_t distance_floor(std::size_t length) { return (37 * length + 99) / 100; }

std::size_t length_bound(std::size_t n, std::size_t length_factor) {
  std::size_t log2n = n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
  return length_factor * std::max<std::size_t>(1, log2n);
}

namespace {

// F4 = {0, 1, w, w^2} encoded 0..3; addition is XOR.
constexpr std::uint8_t kLog[4] = {0, 0, 1, 2};
constexpr std::uint8_t kExp[3] = {1, 2, 3};

std::uint8_t f4_mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return kExp[(kLog[a] + kLog[b]) % 3];
}

std::uint64_t pow4(std::size_t e) { return std::uint64_t{1} << (2 * e); }

struct Layout {
  std::size_t k = 1;
  std::vector<std::size_t> removed;  // dimensions of the removed coordinate subspaces
  std::uint64_t points = 0;          // L
  std::uint64_t distance = 0;        // minimum F4 weight
};

// Smallest L over all removal patterns with 2 * distance >= ceil(0.37 * 4L).
Layout choose_layout(std::size_t k) {
  Layout best;
  best.points = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::size_t> dims;
  std::function<void(std::size_t, std::size_t)> search = [&](std::size_t max_t, std::size_t budget) {
    std::uint64_t points = (pow4(k) - 1) / 3, distance = pow4(k - 1);
    for (auto t : dims) {
      points -= (pow4(t) - 1) / 3;
      distance -= pow4(t - 1);
    }
    if (distance > 0 && 2 * distance >= distance_floor(4 * points) && points < best.points) {
      best.k = k;
      best.removed = dims;
      best.points = points;
      best.distance = distance;
    }
    for (std::size_t t = std::min(max_t, budget); t >= 1; --t) {
      dims.push_back(t);
      search(t, budget - t);
      dims.pop_back();
    }
  };
  search(k - 1, k);
  return best;
}

// Normalised points of PG(k-1, 4) in lexicographic order, minus the removed
// coordinate subspaces (consecutive blocks of coordinates).
std::vector<std::vector<std::uint8_t>> generator_columns(const Layout &layout) {
  const std::size_t k = layout.k;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  std::size_t at = 0;
  for (auto t : layout.removed) {
    blocks.emplace_back(at, at + t);
    at += t;
  }
  std::vector<std::vector<std::uint8_t>> cols;
  std::vector<std::uint8_t> p(k);
  for (std::uint64_t v = 1; v < pow4(k); ++v) {
    for (std::size_t j = 0; j < k; ++j) p[k - 1 - j] = static_cast<std::uint8_t>((v >> (2 * j)) & 3);
    auto lead = std::find_if(p.begin(), p.end(), [](std::uint8_t c) { return c != 0; });
    if (*lead != 1) continue;
    const auto first = static_cast<std::size_t>(lead - p.begin());
    std::size_t last = k - 1;
    while (p[last] == 0) --last;
    bool inside = false;
    for (auto [lo, hi] : blocks)
      if (first >= lo && last < hi) inside = true;
    if (!inside) cols.push_back(p);
  }
  return cols;
}

}  // namespace

ConstantWeightCode build_code(std::size_t n, const CodeOptions &options) {
  if (n == 0) throw InvalidArgument("a code needs at least one word");
  if (n == 1) {
    StringSet words(1, 4, 2, {1, 0, 0, 0});
    return {1, 4, 1, std::move(words), 4};
  }
  std::size_t k = 1;
  while (pow4(k) < n) ++k;
  const Layout layout = choose_layout(k);
  const auto cols = generator_columns(layout);
  const std::size_t L = cols.size();
  const std::size_t length = 4 * L;
  if (options.strict && length > length_bound(n, options.length_factor))
    throw Error("code for n=" + std::to_string(n) + " has length " + std::to_string(length) +
                ", above the bound " + std::to_string(length_bound(n, options.length_factor)) +
                "; achieved distance " + std::to_string(2 * layout.distance));

  std::vector<Symbol> bits(n * length, 0);
  std::vector<std::uint8_t> message(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) message[j] = static_cast<std::uint8_t>((i >> (2 * j)) & 3);
    for (std::size_t c = 0; c < L; ++c) {
      std::uint8_t sym = 0;
      for (std::size_t j = 0; j < k; ++j) sym ^= f4_mul(message[j], cols[c][j]);
      bits[i * length + 4 * c + sym] = 1;
    }
  }
  StringSet words(n, length, 2, std::move(bits));
  return {n, length, L, std::move(words), static_cast<std::size_t>(2 * layout.distance)};
}

CodeReport verify_code(const ConstantWeightCode &code, std::size_t length_factor) {
  CodeReport r;
  const auto &w = code.words;
  if (w.n() != code.n || w.d() != code.length) {
    r.ok = false;
    r.messages.push_back("stored dimensions do not match the words");
  }
  if (code.length % 4 != 0) {
    r.ok = false;
    r.messages.push_back("length " + std::to_string(code.length) + " is not a multiple of 4");
  }
  const std::size_t want = code.length / 4;
  for (std::size_t i = 0; i < w.n(); ++i) {
    std::size_t weight = 0;
    for (auto s : w.row(i)) weight += s != 0;
    ++r.weight_histogram[weight];
    if (weight != want) {
      r.ok = false;
      r.weight_violations.push_back(i);
      r.messages.push_back("word " + std::to_string(i) + " has weight " + std::to_string(weight) +
                           ", expected " + std::to_string(want));
    }
  }
  const std::size_t floor = distance_floor(code.length);
  r.min_distance = code.length;
  for (std::size_t i = 0; i < w.n(); ++i)
    for (std::size_t j = i + 1; j < w.n(); ++j) {
      const std::size_t h = hamming_rows(w, i, j);
      if (!r.closest_pair || h < r.min_distance) {
        r.closest_pair = std::make_pair(i, j);
        r.min_distance = h;
      }
      if (h < floor) {
        r.ok = false;
        r.distance_violations.emplace_back(i, j);
        r.messages.push_back("words " + std::to_string(i) + " and " + std::to_string(j) +
                             " are at distance " + std::to_string(h) + ", below " +
                             std::to_string(floor));
      }
    }
  const std::size_t bound = length_bound(code.n, length_factor);
  if (code.length > bound) {
    r.ok = false;
    r.length_ok = false;
    r.messages.push_back("length " + std::to_string(code.length) + " exceeds " +
                         std::to_string(length_factor) + "*max(1,ceil(log2 n)) = " +
                         std::to_string(bound));
  }
  return r;
}

}  // namespace hammctr
