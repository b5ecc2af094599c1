#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hammctr {

using Symbol = std::uint32_t;

/// An instance: n strings of length d over the alphabet {0, ..., sigma-1}.
///
/// Rows are stored contiguously. Binary instances additionally keep every row
/// packed into 64-bit words (bit b of word w holds position 64*w + b) so that
/// Hamming distances reduce to popcounts. Immutable after construction.
class StringSet {
public:
  /// Throws InvalidArgument when n, d or sigma is out of range, when
  /// `symbols.size() != n * d`, or when some symbol is >= sigma.
  StringSet(std::size_t n, std::size_t d, Symbol sigma, std::vector<Symbol> symbols);

  static StringSet from_rows(Symbol sigma, const std::vector<std::vector<Symbol>> &rows);

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  Symbol sigma() const noexcept { return sigma_; }
  bool is_binary() const noexcept { return sigma_ == 2; }

  std::span<const Symbol> row(std::size_t i) const noexcept {
    return {symbols_.data() + i * d_, d_};
  }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }

  /// Packed row of a binary instance; empty span otherwise.
  std::span<const std::uint64_t> packed_row(std::size_t i) const noexcept {
    if (packed_.empty()) return {};
    return {packed_.data() + i * words_per_row_, words_per_row_};
  }
  std::size_t words_per_row() const noexcept { return words_per_row_; }

  friend bool operator==(const StringSet &a, const StringSet &b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.sigma_ == b.sigma_ && a.symbols_ == b.symbols_;
  }

private:
  std::size_t n_;
  std::size_t d_;
  Symbol sigma_;
  std::vector<Symbol> symbols_;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> packed_;
};

/// Outcome of any solver. `center_index` is empty for continuous solvers.
struct SolveResult {
  std::optional<std::size_t> center_index;
  std::vector<Symbol> center;
  std::size_t objective = 0;
  std::string algorithm;
  /// Instrumentation (name, value) in a fixed per-algorithm order.
  std::vector<std::pair<std::string, std::uint64_t>> counters;
};

/// Dense symmetric matrix of pairwise Hamming distances.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<std::uint32_t> entries;  // row-major n*n

  std::uint32_t at(std::size_t i, std::size_t j) const noexcept { return entries[i * n + j]; }
  friend bool operator==(const DistanceMatrix &, const DistanceMatrix &) = default;
};

/// Number of positions where x and y differ. Throws InvalidArgument on a length mismatch.
std::size_t hamming(std::span<const Symbol> x, std::span<const Symbol> y);

/// Popcount of the XOR of two packed rows of equal word count.
std::size_t hamming_packed(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y) noexcept;

/// Distance between rows i and j; uses the packed form when it exists.
std::size_t hamming_rows(const StringSet &x, std::size_t i, std::size_t j) noexcept;

/// r(x, X): largest distance from `x` to any row.
std::size_t radius_of(std::span<const Symbol> x, const StringSet &set);
/// d(x, X): smallest distance from `x` to any row.
std::size_t distance_to(std::span<const Symbol> x, const StringSet &set);
/// d(x_i, X \ {x_i}) where only the index i is removed (duplicates of x_i count).
std::size_t remoteness_of_row(const StringSet &set, std::size_t i);

// Instance text format: optional '#' comment lines, then "n d sigma", then n
// rows of d base-10 symbols.

StringSet read_instance(std::string_view text);
StringSet read_instance_file(const std::string &path);
std::string write_instance(const StringSet &set);
void write_instance_file(const StringSet &set, const std::string &path,
                         std::string_view comment = {});

struct NaiveOptions {
  /// Compare through the packed representation on binary instances.
  bool packed = false;
};

/// Exhaustive O(n^2 d) discrete closest string; ties go to the lowest index.
SolveResult naive_closest(const StringSet &set, NaiveOptions options = {});
/// Exhaustive discrete remotest string. Throws InvalidArgument when n < 2.
SolveResult naive_remotest(const StringSet &set, NaiveOptions options = {});
/// All-pairs Hamming distances by direct comparison.
DistanceMatrix naive_distance_matrix(const StringSet &set);

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 26;

/// sigma^d, or nullopt when it exceeds `cap`.
std::optional<std::uint64_t> candidate_count(Symbol sigma, std::size_t d, std::uint64_t cap);

/// Minimises r(x*, X) over all of sigma^d; ties go to the lexicographically
/// smallest candidate. Throws BudgetError when sigma^d > cap.
SolveResult brute_continuous_closest(const StringSet &set,
                                     std::uint64_t cap = kDefaultEnumerationCap);
/// Maximises d(x*, X) over all of sigma^d, same tie rule and cap.
SolveResult brute_continuous_remotest(const StringSet &set,
                                      std::uint64_t cap = kDefaultEnumerationCap);

/// Same contract as brute_continuous_remotest, computed as a multi-source
/// breadth-first sweep of the whole Hamming graph sigma^d (bit-parallel for
/// binary alphabets). Linear in sigma^d rather than in sigma^d * n.
SolveResult sweep_continuous_remotest(const StringSet &set,
                                      std::uint64_t cap = kDefaultEnumerationCap);
/// The same sweep seeded from base-sigma ranks (position 0 most significant).
SolveResult sweep_continuous_remotest_ranks(std::span<const std::uint64_t> ranks, std::size_t d,
                                            Symbol sigma, std::uint64_t cap = kDefaultEnumerationCap);
/// Binary sweep over a 2^d-bit indicator of the string set (bit m is the
/// string whose mask is m, position 0 most significant). Requires d < 64.
SolveResult sweep_binary_cover(std::vector<std::uint64_t> cover, std::size_t d);

/// Complement of a binary string.
std::vector<Symbol> complement(std::span<const Symbol> x);

}  // namespace hammctr
