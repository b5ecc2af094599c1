#include "hammctr/generate.hpp"

#include <numeric>

#include "hammctr/error.hpp"
#include "hammctr/rng.hpp"

namespace hammctr {

StringSet random_instance(std::size_t n, std::size_t d, Symbol sigma, std::uint64_t seed) {
  if (n == 0 || d == 0 || sigma < 2) throw InvalidArgument("random instance needs n, d >= 1 and sigma >= 2");
  SplitMix64 rng(seed);
  std::vector<Symbol> symbols(n * d);
  for (auto &s : symbols) s = static_cast<Symbol>(rng.below(sigma));
  return StringSet(n, d, sigma, std::move(symbols));
}

PlantedInstance planted_instance(std::size_t n, std::size_t d, Symbol sigma, std::size_t rho,
                                 std::uint64_t seed) {
  if (n == 0 || d == 0 || sigma < 2) throw InvalidArgument("planted instance needs n, d >= 1 and sigma >= 2");
  if (rho > d) throw InvalidArgument("rho must not exceed d");
  SplitMix64 rng(seed);
  std::vector<Symbol> center(d);
  for (auto &s : center) s = static_cast<Symbol>(rng.below(sigma));

  std::vector<Symbol> symbols;
  symbols.reserve(n * d);
  std::vector<std::size_t> positions(d);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Symbol> row = center;
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    // Partial Fisher-Yates: the first rho slots become the changed positions.
    for (std::size_t t = 0; t < rho; ++t) {
      std::size_t j = t + static_cast<std::size_t>(rng.below(d - t));
      std::swap(positions[t], positions[j]);
      const std::size_t k = positions[t];
      row[k] = static_cast<Symbol>((center[k] + 1 + rng.below(sigma - 1)) % sigma);
    }
    symbols.insert(symbols.end(), row.begin(), row.end());
  }
  return {StringSet(n, d, sigma, std::move(symbols)), std::move(center), rho};
}

}  // namespace hammctr
