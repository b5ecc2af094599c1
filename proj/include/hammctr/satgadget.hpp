#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hammctr/core.hpp"

namespace hammctr {

/// The predicate X_var != value. Variables are 0-based in memory, 1-based in files.
struct Literal {
  std::uint32_t var = 0;
  Symbol value = 0;
  friend bool operator==(const Literal &, const Literal &) = default;
};

using Clause = std::vector<Literal>;

/// A q-ary CNF formula. When group_size is nonzero the variables are split
/// into consecutive groups of that size: group(v) = v / group_size.
struct QaryCnf {
  std::size_t num_vars = 0;
  Symbol q = 2;
  std::vector<Clause> clauses;
  std::size_t group_size = 0;

  std::size_t group_of(std::uint32_t var) const noexcept { return var / group_size; }
  std::size_t group_count() const noexcept { return group_size ? num_vars / group_size : 0; }
  std::size_t max_width() const noexcept;

  friend bool operator==(const QaryCnf &, const QaryCnf &) = default;
};

/// Throws InvalidArgument when a variable or value is out of range, a clause
/// is empty, or the group size does not divide the variable count.
void validate(const QaryCnf &f);

// Text format:
//   # comment
//   p qcnf N M q
//   g s            (optional group size)
//   1!0 2!1 0      (M clause lines, literals v!a, terminated by 0)

QaryCnf parse_qcnf(std::string_view text);
std::string write_qcnf(const QaryCnf &f);
/// FNV-1a over the canonical text.
std::uint64_t formula_hash(const QaryCnf &f);

bool satisfies(const QaryCnf &f, std::span<const Symbol> assignment);
/// First satisfying assignment in lexicographic order (variable 0 most
/// significant), or nullopt. Throws BudgetError when q^N > cap.
std::optional<std::vector<Symbol>> brute_sat(const QaryCnf &f,
                                             std::uint64_t cap = kDefaultEnumerationCap);

/// Every clause has exactly k literals from exactly r distinct groups.
struct RegularityWitness {
  std::size_t k = 0;
  std::size_t r = 0;
  bool width_uniform = false;
  bool groups_uniform = false;

  bool regular() const noexcept { return width_uniform && groups_uniform; }
};

/// Measures the formula; the flags are false when it is not regular.
RegularityWitness regularity(const QaryCnf &f);
/// True when the witness describes `f` exactly.
bool check_witness(const QaryCnf &f, const RegularityWitness &w);

struct Regularized {
  QaryCnf formula;
  RegularityWitness witness;
  std::size_t padded_vars = 0;  // original variables rounded up to a multiple of s
};

/// Pads the variables to a multiple of s and appends (k+1) groups of fresh
/// variables that every satisfying assignment sets to 0. The result has width
/// 2k and is (k+1)-regular. Requires 2k <= s <= N, k = max clause width.
Regularized regularize(const QaryCnf &f, std::size_t s);

/// Balanced: each symbol occurs exactly s/q times in every group.
bool is_balanced(std::span<const Symbol> assignment, std::size_t s, Symbol q);

inline constexpr std::uint64_t kDefaultBalanceCap = 1'000'000;

/// ((s+1)(q-1))^((q-1)N/s), or nullopt on 64-bit overflow. Requires a grouped formula.
std::optional<std::uint64_t> balance_count(const QaryCnf &f);
/// Per-variable value relabelling of member `index`: perm[v][old] = new.
std::vector<std::vector<Symbol>> balance_permutation(const QaryCnf &f, std::uint64_t index);
/// Member `index` of the balancing family.
QaryCnf balance_member(const QaryCnf &f, std::uint64_t index);
/// All members in index order. Throws BudgetError when the count exceeds cap.
std::vector<QaryCnf> balance(const QaryCnf &f, std::uint64_t cap = kDefaultBalanceCap);

struct GadgetInstance {
  StringSet strings;
  std::size_t threshold = 0;
  std::size_t pre_dedup = 0;
  std::size_t s = 0;
  std::size_t r = 0;
  std::uint64_t source_hash = 0;
};

inline constexpr std::uint64_t kDefaultGadgetCap = std::uint64_t{1} << 24;

/// Every assignment that falsifies some clause and is constant on each group
/// the clause does not touch; sorted and deduplicated. Threshold
/// (q-1)(N-rs)/q. Throws InvalidArgument when f is not regular or grouped,
/// BudgetError when the projected string count exceeds cap.
GadgetInstance to_remotest(const QaryCnf &f, std::uint64_t cap = kDefaultGadgetCap);

struct CertifyReport {
  bool satisfiable = false;
  std::optional<std::vector<Symbol>> satisfying;
  std::optional<std::vector<Symbol>> balanced_witness;
  std::optional<std::size_t> witness_distance;
  std::size_t max_distance = 0;
  std::vector<Symbol> farthest;
  std::size_t threshold = 0;
  bool biconditional = false;  // satisfiable <=> max_distance >= threshold + 1
  bool witness_ok = true;      // balanced witness reaches threshold + 1, when present

  bool pass() const noexcept { return biconditional && witness_ok; }
  std::string text() const;
};

/// Brute-force check of one formula against its instance.
CertifyReport certify(const QaryCnf &f, const GadgetInstance &instance,
                      std::uint64_t cap = kDefaultEnumerationCap);

struct PipelineOptions {
  std::size_t s = 2;
  /// Skip regularize when the input is already regular over groups of size s.
  bool keep_regular_input = false;
  std::uint64_t balance_cap = kDefaultBalanceCap;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

struct PipelineReport {
  bool satisfiable = false;
  bool equisatisfiable = true;        // regularized formula agrees with the input
  std::uint64_t family_size = 0;
  std::uint64_t members_checked = 0;
  std::optional<std::uint64_t> witness_member;  // satisfiable: first member with a balanced witness
  std::size_t threshold = 0;
  std::size_t max_distance = 0;       // over the witness member, or over all members when unsatisfiable
  std::size_t gadget_vars = 0;
  bool pass = false;
  std::string detail;
};

/// regularize -> balance -> to_remotest -> certify. Satisfiable inputs pass
/// when the first member admitting a balanced satisfying assignment yields
/// distance >= threshold + 1; unsatisfiable inputs pass when no member does.
PipelineReport certify_pipeline(const QaryCnf &f, const PipelineOptions &options);

}  // namespace hammctr
