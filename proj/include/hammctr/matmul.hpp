#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hammctr/core.hpp"
#include "hammctr/inclexcl.hpp"

namespace hammctr {

/// Sparse n x (d*sigma) 0/1 matrix: A[i][k*sigma + a] = 1 iff x_i[k] = a.
/// Only nonempty columns are materialised; they are numbered densely in
/// ascending column-id order.
struct IndicatorMatrix {
  std::size_t n = 0;
  std::size_t d = 0;
  Symbol sigma = 2;
  std::vector<std::uint64_t> column_ids;     // ascending
  std::vector<std::uint32_t> column_counts;  // nonzeros per column
  std::vector<std::uint32_t> entries;        // n x d dense column numbers, row-major
  std::vector<std::uint32_t> column_start;   // CSC offsets, size columns + 1
  std::vector<std::uint32_t> column_rows;    // CSC row lists, ascending

  std::size_t columns() const noexcept { return column_ids.size(); }
  /// Column ids k*sigma + a of row i, ascending.
  std::vector<std::uint64_t> row_nonzeros(std::size_t i) const;
};

IndicatorMatrix build_indicator(const StringSet &set);

struct ColumnSplit {
  std::size_t tau = 1;
  std::vector<std::uint32_t> heavy;  // dense column numbers with count >= tau
  std::vector<std::uint32_t> light;
};

ColumnSplit split_columns(const IndicatorMatrix &a, std::size_t tau);

/// ceil(n^(1 - 0.3 min(1, log_n d))); 1 when n = 1.
std::size_t auto_tau(std::size_t n, std::size_t d);

struct MatmulOptions {
  std::size_t tau = 0;  // 0 selects auto_tau
  unsigned threads = 1;
  std::uint64_t budget_bytes = kDefaultBudgetBytes;
  /// Binary instances: popcount over packed rows, no column split.
  bool binary_popcount = false;
  std::size_t tile = 64;
};

struct MatmulStats {
  std::size_t tau = 0;
  std::uint64_t heavy_columns = 0;
  std::uint64_t light_columns = 0;
  std::uint64_t light_pair_increments = 0;
  std::uint64_t heavy_multiply_adds = 0;
  bool popcount_path = false;
};

/// Row-major n x n match counts; entry (i, j) = |{k : x_i[k] = x_j[k]}| restricted to the given columns.
std::vector<std::uint32_t> gram_heavy(const IndicatorMatrix &a, const ColumnSplit &split,
                                      const MatmulOptions &options = {}, MatmulStats *stats = nullptr);
std::vector<std::uint32_t> gram_light(const IndicatorMatrix &a, const ColumnSplit &split,
                                      const MatmulOptions &options = {}, MatmulStats *stats = nullptr);

/// D = d - A A^T. Throws BudgetError when n^2 counters or the dense heavy
/// block do not fit the budget; throws Error if a work bound is violated.
DistanceMatrix distance_matrix(const StringSet &set, const MatmulOptions &options = {},
                               MatmulStats *stats = nullptr);

SolveResult matmul_closest(const StringSet &set, const MatmulOptions &options = {});
/// Throws InvalidArgument when n < 2.
SolveResult matmul_remotest(const StringSet &set, const MatmulOptions &options = {});

/// Row-major little-endian 32-bit dump of D.
void write_distance_matrix(const DistanceMatrix &m, const std::string &path);

}  // namespace hammctr
