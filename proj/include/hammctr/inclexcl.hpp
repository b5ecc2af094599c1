#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hammctr/core.hpp"

namespace hammctr {

using Wide = __int128;

inline constexpr std::size_t kDefaultDMax = 24;
inline constexpr std::uint64_t kDefaultBudgetBytes = std::uint64_t{1} << 30;

/// Pascal triangle C(a, b) for 0 <= b <= a <= max_a; C(a, b) = 0 for b > a.
class BinomialTable {
public:
  explicit BinomialTable(std::size_t max_a);

  std::uint64_t operator()(std::size_t a, std::size_t b) const;
  std::size_t max_a() const noexcept { return max_a_; }

private:
  std::size_t max_a_;
  std::vector<std::uint64_t> rows_;
};

/// sum_{i=0}^{l} (-1)^i C(m+l-1, m+i-1) C(m+i-1, m-1). Always 0 for m, l >= 1.
std::int64_t zero_sum_identity(std::size_t m, std::size_t l);
/// sum_{i=0}^{l} (-1)^i C(m+l, m+i) C(m+i-1, m-1). Always 1 for m >= 1.
std::int64_t one_sum_identity(std::size_t m, std::size_t l);

/// Evaluates the full 2^d-term signed subset sum for 1(HD(x, y) <= k).
/// Throws InvalidArgument unless 0 <= k < d, BudgetError when 2^d > cap.
std::int64_t hd_leq_indicator(std::span<const Symbol> x, std::span<const Symbol> y, std::size_t k,
                              std::uint64_t cap = kDefaultEnumerationCap);

/// A partition of {0, ..., n-1}. Part ids are dense in [0, part_count()).
class Partition {
public:
  /// The one-part partition.
  explicit Partition(std::size_t n);
  /// Any labelling; ids are renumbered by first occurrence.
  static Partition from_labels(std::span<const std::uint64_t> labels);
  /// Strings grouped by their symbol at `position`.
  static Partition by_position(const StringSet &set, std::size_t position);

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t part_count() const noexcept { return sizes_.size(); }
  std::uint32_t part_of(std::size_t i) const noexcept { return ids_[i]; }
  std::uint32_t part_size(std::uint32_t part) const noexcept { return sizes_[part]; }
  std::span<const std::uint32_t> ids() const noexcept { return ids_; }
  /// Number of refinements applied since the partition was created.
  std::uint64_t generation() const noexcept { return generation_; }

  /// Same parts, ids renumbered by first occurrence in index order.
  Partition canonical() const;
  /// Equal as set partitions (labels ignored).
  friend bool operator==(const Partition &a, const Partition &b);

  friend Partition refine(const Partition &p, const Partition &q);

private:
  Partition() = default;
  std::vector<std::uint32_t> ids_;
  std::vector<std::uint32_t> sizes_;
  std::uint64_t generation_ = 0;
};

/// Common refinement {P ∩ Q}, in O(n). Throws InvalidArgument on a size mismatch.
Partition refine(const Partition &p, const Partition &q);

struct CountTableOptions {
  std::size_t d_max = kDefaultDMax;
  std::uint64_t budget_bytes = kDefaultBudgetBytes;
  /// Keep the full T table. When false only S is produced.
  bool keep_t = true;
  unsigned threads = 1;
};

/// T[x, I] = |{y : x[I] = y[I]}| and S[x, l] = sum over |I| = l of T[x, I].
/// Subsets I are bitmasks over positions (bit k <-> position k).
struct CountTables {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<std::int64_t> s;  // n x (d + 1)
  std::vector<std::uint32_t> t; // 2^d x n, empty when not kept
  std::uint64_t refinements = 0;

  bool has_t() const noexcept { return !t.empty(); }
  std::int64_t S(std::size_t x, std::size_t l) const noexcept { return s[x * (d + 1) + l]; }
  std::uint32_t T(std::size_t x, std::uint64_t subset) const noexcept { return t[subset * n + x]; }
};

/// Throws BudgetError when d > d_max, when the tables do not fit the budget,
/// or when the signed sums could overflow 128-bit accumulators.
CountTables build_count_tables(const StringSet &set, const CountTableOptions &options = {});

/// S as CSV: header "x,0,1,...,d", then one row per string.
std::string s_table_csv(const CountTables &tables);

/// r(x, X) <= k, evaluated from S. Requires k < d.
bool radius_leq(std::size_t x, std::size_t k, const CountTables &tables);
/// d(x, X \ {x}) > k, evaluated from S. A duplicated x is never remote.
bool remoteness_gt(std::size_t x, std::size_t k, const CountTables &tables);

struct InclExclOptions {
  std::size_t d_max = kDefaultDMax;
  std::uint64_t budget_bytes = kDefaultBudgetBytes;
  unsigned threads = 1;
};

SolveResult inclexcl_closest(const StringSet &set, const InclExclOptions &options = {});
/// Throws InvalidArgument when n < 2.
SolveResult inclexcl_remotest(const StringSet &set, const InclExclOptions &options = {});

}  // namespace hammctr
