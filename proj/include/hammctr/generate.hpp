#pragma once

#include <cstdint>
#include <vector>

#include "hammctr/core.hpp"

namespace hammctr {

/// n strings with i.i.d. uniform symbols, row-major draw order.
StringSet random_instance(std::size_t n, std::size_t d, Symbol sigma, std::uint64_t seed);

struct PlantedInstance {
  StringSet set;
  std::vector<Symbol> center;
  std::size_t rho;
};

/// Draws a uniform center, then every string is the center changed in exactly
/// `rho` distinct positions (each to a different symbol). Requires rho <= d.
PlantedInstance planted_instance(std::size_t n, std::size_t d, Symbol sigma, std::size_t rho,
                                 std::uint64_t seed);

}  // namespace hammctr
