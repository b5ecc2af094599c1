#include <algorithm>

#include "hammctr/error.hpp"
#include "hammctr/satgadget.hpp"
#include "text_util.hpp"

namespace hammctr {

std::size_t QaryCnf::max_width() const noexcept {
  std::size_t w = 0;
  for (const auto &c : clauses) w = std::max(w, c.size());
  return w;
}

void validate(const QaryCnf &f) {
  if (f.q < 2) throw InvalidArgument("q must be at least 2");
  if (f.group_size && f.num_vars % f.group_size)
    throw InvalidArgument("group size " + std::to_string(f.group_size) + " does not divide N=" +
                          std::to_string(f.num_vars));
  for (std::size_t c = 0; c < f.clauses.size(); ++c) {
    if (f.clauses[c].empty()) throw InvalidArgument("clause " + std::to_string(c) + " is empty");
    for (const auto &lit : f.clauses[c]) {
      if (lit.var >= f.num_vars)
        throw InvalidArgument("clause " + std::to_string(c) + " uses variable " +
                              std::to_string(lit.var + 1) + " beyond N=" + std::to_string(f.num_vars));
      if (lit.value >= f.q)
        throw InvalidArgument("clause " + std::to_string(c) + " forbids value " +
                              std::to_string(lit.value) + ", not below q=" + std::to_string(f.q));
    }
  }
}

QaryCnf parse_qcnf(std::string_view text) {
  LineReader lines(text);
  std::string_view line;
  std::size_t lineno = 0;
  QaryCnf f;
  std::size_t expected = 0;
  bool have_header = false;
  while (lines.next(line, lineno)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto words = split_words(t);
    if (!have_header) {
      if (words.size() != 5 || words[0] != "p" || words[1] != "qcnf")
        throw ParseError(lineno, "expected header \"p qcnf N M q\"");
      f.num_vars = parse_u64(words[2], lineno);
      expected = parse_u64(words[3], lineno);
      const auto q = parse_u64(words[4], lineno);
      if (q < 2 || q > 0xffffffffULL) throw ParseError(lineno, "q must be in [2, 2^32)");
      f.q = static_cast<Symbol>(q);
      have_header = true;
      continue;
    }
    if (words[0] == "g") {
      if (words.size() != 2 || !f.clauses.empty()) throw ParseError(lineno, "group line must be \"g s\" before the clauses");
      f.group_size = parse_u64(words[1], lineno);
      if (f.group_size == 0 || f.num_vars % f.group_size)
        throw ParseError(lineno, "group size must divide N");
      continue;
    }
    if (f.clauses.size() == expected) throw ParseError(lineno, "more clauses than the header declares");
    if (words.back() != "0") throw ParseError(lineno, "clause must end with 0");
    Clause clause;
    for (std::size_t w = 0; w + 1 < words.size(); ++w) {
      auto bang = words[w].find('!');
      if (bang == std::string_view::npos) throw ParseError(lineno, "literal must be v!a: \"" + std::string(words[w]) + "\"");
      const auto v = parse_u64(words[w].substr(0, bang), lineno);
      const auto a = parse_u64(words[w].substr(bang + 1), lineno);
      if (v < 1 || v > f.num_vars) throw ParseError(lineno, "variable " + std::to_string(v) + " out of range 1.." + std::to_string(f.num_vars));
      if (a >= f.q) throw ParseError(lineno, "value " + std::to_string(a) + " out of range for q=" + std::to_string(f.q));
      clause.push_back({static_cast<std::uint32_t>(v - 1), static_cast<Symbol>(a)});
    }
    if (clause.empty()) throw ParseError(lineno, "empty clause");
    f.clauses.push_back(std::move(clause));
  }
  if (!have_header) throw ParseError(0, "missing header \"p qcnf N M q\"");
  if (f.clauses.size() != expected)
    throw ParseError(lineno, "header declares " + std::to_string(expected) + " clauses, found " +
                                 std::to_string(f.clauses.size()));
  return f;
}

std::string write_qcnf(const QaryCnf &f) {
  std::string out = "p qcnf " + std::to_string(f.num_vars) + ' ' + std::to_string(f.clauses.size()) +
                    ' ' + std::to_string(f.q) + '\n';
  if (f.group_size) out += "g " + std::to_string(f.group_size) + '\n';
  for (const auto &c : f.clauses) {
    for (const auto &lit : c) out += std::to_string(lit.var + 1) + '!' + std::to_string(lit.value) + ' ';
    out += "0\n";
  }
  return out;
}

std::uint64_t formula_hash(const QaryCnf &f) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : write_qcnf(f)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool satisfies(const QaryCnf &f, std::span<const Symbol> assignment) {
  for (const auto &c : f.clauses) {
    bool sat = false;
    for (const auto &lit : c)
      if (assignment[lit.var] != lit.value) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

std::optional<std::vector<Symbol>> brute_sat(const QaryCnf &f, std::uint64_t cap) {
  validate(f);
  if (!candidate_count(f.q, f.num_vars, cap))
    throw BudgetError("brute-force SAT over q^N = " + std::to_string(f.q) + "^" +
                      std::to_string(f.num_vars) + " assignments exceeds the cap of " + std::to_string(cap));
  std::vector<Symbol> a(f.num_vars, 0);
  for (;;) {
    if (satisfies(f, a)) return a;
    std::size_t k = f.num_vars;
    while (k > 0) {
      --k;
      if (++a[k] < f.q) break;
      a[k] = 0;
      if (k == 0) return std::nullopt;
    }
    if (f.num_vars == 0) return std::nullopt;
  }
}

}  // namespace hammctr
