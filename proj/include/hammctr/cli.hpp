#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hammctr::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;       // certification or cross-check failed
inline constexpr int kInputError = 2;   // I/O, parse, usage or kind errors
inline constexpr int kBudgetError = 3;  // caps and memory budgets

/// Discrete algorithm chosen by "--algo auto":
/// inclexcl when 2^d <= n*d and d <= d_max; matmul when the n x n matrix fits
/// the budget, d >= n^0.1 and n >= 64; naive otherwise.
std::string select_discrete(std::size_t n, std::size_t d, std::uint64_t budget_bytes,
                            std::size_t d_max);

/// Memory budget in bytes: HAMMCTR_BUDGET_MB when set, else 1 GiB.
std::uint64_t budget_from_env();

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace hammctr::cli
