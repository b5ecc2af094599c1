#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hammctr/core.hpp"

namespace hammctr::detail {

/// Members of a partition listed part by part: part b is
/// order[starts[b] .. starts[b + 1]).
struct Buckets {
  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> starts;
};

/// Groups indices by their symbol at `position`, buckets in symbol order.
Buckets position_buckets(const StringSet &set, std::size_t position);
/// Groups indices by part id, buckets in id order.
Buckets id_buckets(std::span<const std::uint32_t> ids, std::size_t part_count);

/// Scratch space reused across refinements of the same universe.
struct RefineScratch {
  std::vector<std::uint64_t> stamp;
  std::vector<std::uint32_t> new_id;
  std::uint64_t clock = 0;

  explicit RefineScratch(std::size_t n) : stamp(n, 0), new_id(n, 0) {}
};

/// Common refinement of `ids` by the partition given as `buckets`.
/// Writes the new ids and returns the new part count; part sizes go to `sizes`.
std::uint32_t refine_ids(std::span<const std::uint32_t> ids, const Buckets &buckets,
                         std::span<std::uint32_t> out, std::vector<std::uint32_t> &sizes,
                         RefineScratch &scratch);

}  // namespace hammctr::detail
