#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hammctr/codes.hpp"
#include "hammctr/core.hpp"

namespace hammctr {

enum class Direction { ClosestToRemotest, RemotestToClosest, ContinuousComplement };
enum class Role { A, B, X, Y, Same };

std::string_view direction_name(Direction d);  // "c2r", "r2c", "complement"
std::string_view role_name(Role r);            // "a", "b", "x", "y", "same"

struct IndexEntry {
  std::size_t source = 0;
  Role role = Role::Same;
  friend bool operator==(const IndexEntry &, const IndexEntry &) = default;
};

/// Links a produced instance to its source: source objective = offset - target objective.
struct ReductionMap {
  Direction direction = Direction::ContinuousComplement;
  std::size_t source_n = 0, source_d = 0;
  std::size_t target_n = 0, target_d = 0;
  std::size_t repetitions = 0;  // r
  std::size_t code_length = 0;  // d''
  std::size_t offset = 0;       // d + r * d''/4, or d for the complement identity
  std::vector<IndexEntry> index_map;  // one entry per target string

  friend bool operator==(const ReductionMap &, const ReductionMap &) = default;
};

struct Reduction {
  StringSet target;
  ReductionMap map;
};

/// Binary only. The target is X itself; closest radius = d - remotest distance.
Reduction complement_continuous(const StringSet &set);

/// Binary only. a_i = x_i + c_i^r, b_i = complement(x_i) + 0^(r d''); targets a_0.., b_0...
Reduction closest_to_remotest(const StringSet &set, const CodeOptions &code = {});
/// Binary only. x_i = a_i + 0^(r d''), y_i = complement(a_i) + c_i^r; targets x_0.., y_0...
Reduction remotest_to_closest(const StringSet &set, const CodeOptions &code = {});

/// offset - target. Throws InvalidArgument when target is outside [0, target_d] or above offset.
std::size_t apply_transform(const ReductionMap &map, std::size_t target_objective);
/// Source index and role of a target index. Throws InvalidArgument when out of range.
IndexEntry source_of(const ReductionMap &map, std::size_t target_index);

/// Distance regimes of a discrete reduction, checked over all pairs.
struct RegimeReport {
  bool far_pairs_ok = true;    // a-a (c2r) / y-y (r2c): every distance > offset
  bool near_pairs_ok = true;   // b-b (c2r) / x-x (r2c): every distance < r d''/4
  bool cross_pairs_ok = true;  // every a_i-b_j / x_i-y_j equals d - HD(src_i, src_j) + r d''/4
  std::size_t checked_pairs = 0;
  bool ok() const noexcept { return far_pairs_ok && near_pairs_ok && cross_pairs_ok; }
};

RegimeReport check_regimes(const StringSet &source, const Reduction &reduction);

/// JSON-lines sidecar: a header object, then one object per target index.
std::string map_to_jsonl(const ReductionMap &map);
ReductionMap map_from_jsonl(std::string_view text);

}  // namespace hammctr
