#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hammctr/core.hpp"

namespace hammctr {

/// n binary words of length `length` (a multiple of 4), each of weight length/4.
struct ConstantWeightCode {
  std::size_t n = 0;
  std::size_t length = 0;
  std::size_t weight = 0;
  StringSet words;
  /// Smallest pairwise distance; `length` when n = 1.
  std::size_t min_distance = 0;
};

struct CodeOptions {
  /// C in the length bound length <= C * max(1, ceil(log2 n)).
  std::size_t length_factor = 40;
  /// Throw instead of returning a code that breaks the length bound.
  bool strict = false;
};

/// ceil(0.37 * length).
std::size_t distance_floor(std::size_t length);
/// C * max(1, ceil(log2 n)).
std::size_t length_bound(std::size_t n, std::size_t length_factor);

/// Deterministic construction. The words are the rows of a linear code over
/// F4 whose generator columns are the points of PG(k-1, 4) with some disjoint
/// coordinate subspaces removed, each coordinate written as its characteristic
/// vector in {0,1}^4. Throws InvalidArgument when n = 0.
ConstantWeightCode build_code(std::size_t n, const CodeOptions &options = {});

struct CodeReport {
  bool ok = true;
  std::size_t min_distance = 0;
  std::optional<std::pair<std::size_t, std::size_t>> closest_pair;
  std::map<std::size_t, std::size_t> weight_histogram;
  std::vector<std::size_t> weight_violations;  // word indices
  std::vector<std::pair<std::size_t, std::size_t>> distance_violations;
  bool length_ok = true;
  std::vector<std::string> messages;
};

/// Exhaustive pairwise check of weight, distance and length. Never throws on violations.
CodeReport verify_code(const ConstantWeightCode &code, std::size_t length_factor = 40);

}  // namespace hammctr
