#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "hammctr/error.hpp"
#include "hammctr/satgadget.hpp"

namespace hammctr {

RegularityWitness regularity(const QaryCnf &f) {
  RegularityWitness w;
  if (f.clauses.empty()) return w;
  auto groups_of = [&](const Clause &c) {
    std::vector<std::size_t> g;
    for (const auto &lit : c) g.push_back(f.group_of(lit.var));
    std::sort(g.begin(), g.end());
    return static_cast<std::size_t>(std::unique(g.begin(), g.end()) - g.begin());
  };
  w.k = f.clauses.front().size();
  w.width_uniform = std::all_of(f.clauses.begin(), f.clauses.end(),
                                [&](const Clause &c) { return c.size() == w.k; });
  if (f.group_size) {
    w.r = groups_of(f.clauses.front());
    w.groups_uniform = std::all_of(f.clauses.begin(), f.clauses.end(),
                                   [&](const Clause &c) { return groups_of(c) == w.r; });
  }
  return w;
}

bool check_witness(const QaryCnf &f, const RegularityWitness &w) {
  const auto m = regularity(f);
  return w.regular() && m.regular() && m.k == w.k && m.r == w.r;
}

Regularized regularize(const QaryCnf &f, std::size_t s) {
  validate(f);
  const std::size_t k = std::max<std::size_t>(1, f.max_width());
  const std::size_t n = f.num_vars;
  if (2 * k > s || s > n)
    throw InvalidArgument("regularize needs 2k <= s <= N, got k=" + std::to_string(k) +
                          " s=" + std::to_string(s) + " N=" + std::to_string(n));
  const std::size_t padded = (n + s - 1) / s * s;
  // Y(l, j), l < s, j <= k; fresh group j holds Y(0, j) .. Y(s-1, j).
  auto Y = [&](std::size_t l, std::size_t j) { return static_cast<std::uint32_t>(padded + j * s + l); };

  QaryCnf out;
  out.num_vars = padded + (k + 1) * s;
  out.q = f.q;
  out.group_size = s;

  for (const auto &c : f.clauses) {
    Clause wide = c;
    std::vector<std::size_t> groups;
    for (const auto &lit : c) groups.push_back(lit.var / s);
    std::sort(groups.begin(), groups.end());
    const auto g = static_cast<std::size_t>(std::unique(groups.begin(), groups.end()) - groups.begin());
    // One literal in each of k+1-g fresh groups, the rest inside fresh group 0.
    for (std::size_t j = 0; j + g < k + 1; ++j) wide.push_back({Y(0, j), 0});
    const std::size_t extra = 2 * k - c.size() - (k + 1 - g);
    for (std::size_t l = 1; l <= extra; ++l) wide.push_back({Y(l, 0), 0});
    out.clauses.push_back(std::move(wide));
  }

  // Block l: Y(l, 0..k) plus Y(l+1, 0) .. Y(l+k-1, 0) (indices mod s), every
  // clause on these 2k variables except the one forbidding all zeros.
  const std::size_t width = 2 * k;
  std::vector<std::uint32_t> vars(width);
  std::vector<Symbol> beta(width);
  for (std::size_t l = 0; l < s; ++l) {
    for (std::size_t j = 0; j <= k; ++j) vars[j] = Y(l, j);
    for (std::size_t t = 1; t < k; ++t) vars[k + t] = Y((l + t) % s, 0);
    std::fill(beta.begin(), beta.end(), 0);
    for (;;) {
      std::size_t p = width;
      while (p > 0) {
        --p;
        if (++beta[p] < f.q) break;
        beta[p] = 0;
      }
      if (std::all_of(beta.begin(), beta.end(), [](Symbol b) { return b == 0; })) break;
      Clause c(width);
      for (std::size_t i = 0; i < width; ++i) c[i] = {vars[i], beta[i]};
      out.clauses.push_back(std::move(c));
    }
  }

  Regularized r{std::move(out), {}, padded};
  r.witness = regularity(r.formula);
  if (!r.witness.regular() || r.witness.k != width || r.witness.r != k + 1)
    throw Error("regularize produced an irregular formula");
  return r;
}

bool is_balanced(std::span<const Symbol> assignment, std::size_t s, Symbol q) {
  if (s == 0 || s % q || assignment.size() % s) return false;
  std::vector<std::size_t> count(q);
  for (std::size_t g = 0; g < assignment.size(); g += s) {
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t v = g; v < g + s; ++v) ++count[assignment[v]];
    for (auto c : count)
      if (c != s / q) return false;
  }
  return true;
}

namespace {

void require_grouped(const QaryCnf &f, const char *what) {
  if (!f.group_size || f.num_vars % f.group_size)
    throw InvalidArgument(std::string(what) + " needs a formula with a group partition");
}

}  // namespace

std::optional<std::uint64_t> balance_count(const QaryCnf &f) {
  require_grouped(f, "balance");
  const std::uint64_t base = (f.group_size + 1) * std::uint64_t{f.q - 1};
  const std::uint64_t exponent = std::uint64_t{f.q - 1} * f.group_count();
  std::uint64_t t = 1;
  for (std::uint64_t e = 0; e < exponent; ++e)
    if (__builtin_mul_overflow(t, base, &t)) return std::nullopt;
  return t;
}

std::vector<std::vector<Symbol>> balance_permutation(const QaryCnf &f, std::uint64_t index) {
  const auto t = balance_count(f);
  if (f.group_size % f.q) throw InvalidArgument("balance needs q to divide the group size");
  if (t && index >= *t) throw InvalidArgument("member index out of range");
  const std::size_t s = f.group_size;
  std::vector<Symbol> identity(f.q);
  std::iota(identity.begin(), identity.end(), Symbol{0});
  std::vector<std::vector<Symbol>> perm(f.num_vars, identity);
  const std::uint64_t base = (s + 1) * std::uint64_t{f.q - 1};
  // Digits, least significant first: group 0 stage 0, group 0 stage 1, ...
  for (std::size_t g = 0; g < f.group_count(); ++g)
    for (Symbol l = 0; l + 1 < f.q; ++l) {
      const std::uint64_t c = index % base;
      index /= base;
      const auto ai = static_cast<Symbol>(c / (s + 1));
      const Symbol a = ai < l ? ai : ai + 1;
      const std::size_t j = c % (s + 1);
      for (std::size_t v = g * s; v < g * s + j; ++v)
        for (auto &x : perm[v]) x = x == l ? a : x == a ? l : x;
    }
  return perm;
}

QaryCnf balance_member(const QaryCnf &f, std::uint64_t index) {
  const auto perm = balance_permutation(f, index);
  QaryCnf out = f;
  for (auto &c : out.clauses)
    for (auto &lit : c) lit.value = perm[lit.var][lit.value];
  return out;
}

std::vector<QaryCnf> balance(const QaryCnf &f, std::uint64_t cap) {
  validate(f);
  require_grouped(f, "balance");
  if (f.group_size % f.q)
    throw InvalidArgument("balance needs q=" + std::to_string(f.q) + " to divide s=" +
                          std::to_string(f.group_size));
  const auto t = balance_count(f);
  if (!t || *t > cap)
    throw BudgetError("balancing family has " + (t ? std::to_string(*t) : std::string("more than 2^64")) +
                      " members, over the cap of " + std::to_string(cap));
  std::vector<QaryCnf> out;
  out.reserve(*t);
  for (std::uint64_t i = 0; i < *t; ++i) out.push_back(balance_member(f, i));
  return out;
}

namespace {

constexpr std::uint64_t kDedupBitsetLimit = std::uint64_t{1} << 30;

struct Plan {
  std::vector<std::pair<std::uint32_t, Symbol>> fixed;
  std::vector<std::uint32_t> free_vars;
  std::vector<std::size_t> const_groups;
};

struct GadgetPlan {
  std::vector<Plan> plans;
  std::size_t threshold = 0;
  std::uint64_t projected = 0;
  std::size_t r = 0;
};

GadgetPlan plan_gadget(const QaryCnf &f, std::uint64_t cap) {
  validate(f);
  require_grouped(f, "to_remotest");
  const auto w = regularity(f);
  if (!w.regular()) throw InvalidArgument("to_remotest needs a regular formula");
  const std::size_t n = f.num_vars, s = f.group_size, r = w.r, groups = f.group_count();
  const Symbol q = f.q;
  const std::uint64_t numerator = std::uint64_t{q - 1} * (n - r * s);
  if (numerator % q)
    throw InvalidArgument("threshold (q-1)(N-rs)/q is not an integer for q=" + std::to_string(q) +
                          " N=" + std::to_string(n) + " r=" + std::to_string(r) + " s=" + std::to_string(s));

  GadgetPlan out;
  out.r = r;
  out.threshold = static_cast<std::size_t>(numerator / q);
  auto &plans = out.plans;
  auto &projected = out.projected;
  for (const auto &c : f.clauses) {
    Plan p;
    std::vector<std::int64_t> fixed(n, -1);
    bool falsifiable = true;
    std::vector<bool> touched(groups, false);
    for (const auto &lit : c) {
      if (fixed[lit.var] >= 0 && fixed[lit.var] != lit.value) falsifiable = false;
      fixed[lit.var] = lit.value;
      touched[f.group_of(lit.var)] = true;
    }
    if (!falsifiable) continue;
    for (std::size_t g = 0; g < groups; ++g) {
      if (!touched[g]) {
        p.const_groups.push_back(g);
        continue;
      }
      for (std::size_t v = g * s; v < g * s + s; ++v) {
        if (fixed[v] >= 0)
          p.fixed.emplace_back(static_cast<std::uint32_t>(v), static_cast<Symbol>(fixed[v]));
        else
          p.free_vars.push_back(static_cast<std::uint32_t>(v));
      }
    }
    auto count = candidate_count(q, p.free_vars.size() + p.const_groups.size(), cap);
    if (!count || projected + *count > cap)
      throw BudgetError("gadget instance would exceed " + std::to_string(cap) + " strings");
    projected += *count;
    plans.push_back(std::move(p));
  }
  if (projected == 0) throw InvalidArgument("no clause can be falsified; the gadget instance would be empty");
  return out;
}

// Sets bit m for every gadget string with mask m (variable 0 most significant).
void mark_binary(const GadgetPlan &plan, std::size_t n, std::size_t s, std::vector<std::uint64_t> &bits) {
  auto bit = [n](std::size_t v) { return std::uint64_t{1} << (n - 1 - v); };
  for (const auto &p : plan.plans) {
    std::uint64_t fixed = 0, free = 0;
    for (auto [v, a] : p.fixed)
      if (a) fixed |= bit(v);
    for (auto v : p.free_vars) free |= bit(v);
    std::vector<std::uint64_t> groups;
    for (auto g : p.const_groups) {
      std::uint64_t m = 0;
      for (std::size_t v = g * s; v < g * s + s; ++v) m |= bit(v);
      groups.push_back(m);
    }
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << groups.size()); ++c) {
      std::uint64_t base = fixed;
      for (std::size_t i = 0; i < groups.size(); ++i)
        if (c >> i & 1) base |= groups[i];
      std::uint64_t sub = 0;
      do {
        const std::uint64_t x = base | sub;
        bits[x / 64] |= std::uint64_t{1} << (x % 64);
        sub = (sub - free) & free;
      } while (sub);
    }
  }
}

// Sorted distinct ranks of the gadget strings. Requires q^N < 2^64.
std::vector<std::uint64_t> gadget_ranks(const GadgetPlan &plan, std::size_t n, std::size_t s, Symbol q,
                                      std::uint64_t space) {
  // Ranks are updated per digit step; duplicates are dropped by a bitset
  // when q^N is small enough, by sort and unique otherwise.
  std::vector<std::uint64_t> weight(n);
  for (std::uint64_t w = 1, v = n; v-- > 0; w *= q) weight[v] = w;
  const bool use_bits = space <= kDedupBitsetLimit;
  std::vector<std::uint64_t> bits(use_bits ? (space + 63) / 64 : 0);
  std::vector<std::uint64_t> ranks;
  ranks.reserve(use_bits ? 0 : plan.projected);
  if (q == 2 && use_bits) {
    mark_binary(plan, n, s, bits);
  } else {
  for (const auto &p : plan.plans) {
    std::uint64_t rank = 0;
    for (auto [v, a] : p.fixed) rank += a * weight[v];
    std::vector<std::uint64_t> step(p.free_vars.size() + p.const_groups.size());
    for (std::size_t i = 0; i < p.free_vars.size(); ++i) step[i] = weight[p.free_vars[i]];
    for (std::size_t i = 0; i < p.const_groups.size(); ++i) {
      std::uint64_t w = 0;
      for (std::size_t v = p.const_groups[i] * s; v < p.const_groups[i] * s + s; ++v) w += weight[v];
      step[p.free_vars.size() + i] = w;
    }
    std::vector<Symbol> digit(step.size(), 0);
    for (;;) {
      if (use_bits)
        bits[rank / 64] |= std::uint64_t{1} << (rank % 64);
      else
        ranks.push_back(rank);
      std::size_t i = step.size();
      while (i > 0) {
        --i;
        if (++digit[i] < q) {
          rank += step[i];
          break;
        }
        digit[i] = 0;
        rank -= (q - 1) * step[i];
      }
      if (i == 0 && (step.empty() || digit[0] == 0)) break;
    }
  }
  }
  if (use_bits) {
    for (std::size_t w = 0; w < bits.size(); ++w)
      for (std::uint64_t m = bits[w]; m; m &= m - 1)
        ranks.push_back(w * 64 + static_cast<std::uint64_t>(std::countr_zero(m)));
  } else {
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  }
  return ranks;
}

}  // namespace

GadgetInstance to_remotest(const QaryCnf &f, std::uint64_t cap) {
  const auto plan = plan_gadget(f, cap);
  const std::size_t n = f.num_vars, s = f.group_size;
  const Symbol q = f.q;
  const auto space = candidate_count(q, n, ~std::uint64_t{0});
  std::vector<Symbol> symbols;
  std::size_t count = 0;
  if (space) {
    const auto ranks = gadget_ranks(plan, n, s, q, *space);
    count = ranks.size();
    symbols.resize(count * n);
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t rank = ranks[i];
      for (std::size_t v = n; v-- > 0;) {
        symbols[i * n + v] = static_cast<Symbol>(rank % q);
        rank /= q;
      }
    }
  } else {
    std::vector<std::vector<Symbol>> rows;
    std::vector<Symbol> alpha(n, 0);
    for (const auto &p : plan.plans) {
      for (auto [v, a] : p.fixed) alpha[v] = a;
      const std::size_t digits = p.free_vars.size() + p.const_groups.size();
      std::vector<Symbol> digit(digits, 0);
      for (;;) {
        for (std::size_t i = 0; i < p.free_vars.size(); ++i) alpha[p.free_vars[i]] = digit[i];
        for (std::size_t i = 0; i < p.const_groups.size(); ++i) {
          const Symbol a = digit[p.free_vars.size() + i];
          const std::size_t g = p.const_groups[i];
          std::fill(alpha.begin() + static_cast<std::ptrdiff_t>(g * s),
                    alpha.begin() + static_cast<std::ptrdiff_t>(g * s + s), a);
        }
        rows.push_back(alpha);
        std::size_t i = digits;
        while (i > 0) {
          --i;
          if (++digit[i] < q) break;
          digit[i] = 0;
        }
        if (std::all_of(digit.begin(), digit.end(), [](Symbol x) { return x == 0; })) break;
      }
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    count = rows.size();
    symbols.reserve(count * n);
    for (const auto &row : rows) symbols.insert(symbols.end(), row.begin(), row.end());
  }
  return {StringSet(count, n, q, std::move(symbols)), plan.threshold, static_cast<std::size_t>(plan.projected),
          s, plan.r, formula_hash(f)};
}

namespace {

// First balanced satisfying assignment, groups in order, each group's
// patterns in lexicographic order.
std::optional<std::vector<Symbol>> balanced_satisfying(const QaryCnf &f) {
  const std::size_t s = f.group_size, groups = f.group_count();
  if (!s || s % f.q) return std::nullopt;
  std::vector<Symbol> first(s);
  for (std::size_t i = 0; i < s; ++i) first[i] = static_cast<Symbol>(i / (s / f.q));
  std::vector<std::vector<Symbol>> patterns;
  auto p = first;
  do patterns.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  std::vector<std::size_t> pick(groups, 0);
  std::vector<Symbol> alpha(f.num_vars);
  for (;;) {
    for (std::size_t g = 0; g < groups; ++g)
      std::copy(patterns[pick[g]].begin(), patterns[pick[g]].end(),
                alpha.begin() + static_cast<std::ptrdiff_t>(g * s));
    if (satisfies(f, alpha)) return alpha;
    std::size_t g = groups;
    while (g > 0) {
      --g;
      if (++pick[g] < patterns.size()) break;
      pick[g] = 0;
    }
    if (std::all_of(pick.begin(), pick.end(), [](std::size_t x) { return x == 0; })) return std::nullopt;
  }
}

}  // namespace

std::string CertifyReport::text() const {
  std::ostringstream out;
  auto join = [](const std::vector<Symbol> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  out << "satisfiable=" << (satisfiable ? "yes" : "no") << '\n';
  out << "threshold=" << threshold << '\n';
  out << "max_distance=" << max_distance << '\n';
  out << "farthest=" << join(farthest) << '\n';
  if (balanced_witness) {
    out << "balanced_witness=" << join(*balanced_witness) << '\n';
    out << "witness_distance=" << *witness_distance << '\n';
  }
  out << "completeness=" << (!satisfiable || (biconditional && witness_ok) ? "PASS" : "FAIL") << '\n';
  out << "soundness=" << (satisfiable || biconditional ? "PASS" : "FAIL") << '\n';
  out << "result=" << (pass() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

CertifyReport certify(const QaryCnf &f, const GadgetInstance &instance, std::uint64_t cap) {
  if (instance.strings.d() != f.num_vars || instance.strings.sigma() != f.q)
    throw InvalidArgument("instance does not match the formula's N and q");
  CertifyReport rep;
  rep.threshold = instance.threshold;
  rep.satisfying = brute_sat(f, cap);
  rep.satisfiable = rep.satisfying.has_value();
  const auto sweep = sweep_continuous_remotest(instance.strings, cap);
  rep.max_distance = sweep.objective;
  rep.farthest = sweep.center;
  rep.biconditional = rep.satisfiable == (rep.max_distance >= rep.threshold + 1);
  if (rep.satisfiable) {
    rep.balanced_witness = balanced_satisfying(f);
    if (rep.balanced_witness) {
      rep.witness_distance = distance_to(*rep.balanced_witness, instance.strings);
      rep.witness_ok = *rep.witness_distance >= rep.threshold + 1;
    }
  }
  return rep;
}

namespace {

// Threshold and continuous remotest objective of the gadget instance of f.
std::pair<std::size_t, std::size_t> gadget_objective(const QaryCnf &f, std::uint64_t cap) {
  const auto space = candidate_count(f.q, f.num_vars, cap);
  if (!space) {
    const auto inst = to_remotest(f);
    return {inst.threshold, sweep_continuous_remotest(inst.strings, cap).objective};
  }
  const auto plan = plan_gadget(f, kDefaultGadgetCap);
  if (f.q == 2 && f.num_vars < 64 && *space <= kDedupBitsetLimit) {
    std::vector<std::uint64_t> bits((*space + 63) / 64, 0);
    mark_binary(plan, f.num_vars, f.group_size, bits);
    return {plan.threshold, sweep_binary_cover(std::move(bits), f.num_vars).objective};
  }
  const auto ranks = gadget_ranks(plan, f.num_vars, f.group_size, f.q, *space);
  return {plan.threshold, sweep_continuous_remotest_ranks(ranks, f.num_vars, f.q, cap).objective};
}

}  // namespace

PipelineReport certify_pipeline(const QaryCnf &f, const PipelineOptions &options) {
  validate(f);
  PipelineReport rep;
  const std::size_t s = options.s;
  QaryCnf g;
  if (options.keep_regular_input && f.group_size == s && regularity(f).regular())
    g = f;
  else
    g = regularize(f, s).formula;
  rep.gadget_vars = g.num_vars;

  const auto source = brute_sat(f, options.enumeration_cap);
  const auto target = brute_sat(g, options.enumeration_cap);
  rep.satisfiable = source.has_value();
  rep.equisatisfiable = source.has_value() == target.has_value();

  const auto t = balance_count(g);
  if (g.group_size % g.q) throw InvalidArgument("balance needs q to divide s");
  if (!t || *t > options.balance_cap)
    throw BudgetError("balancing family has " + (t ? std::to_string(*t) : std::string("more than 2^64")) +
                      " members, over the cap of " + std::to_string(options.balance_cap));
  rep.family_size = *t;

  std::ostringstream detail;
  if (rep.satisfiable) {
    for (std::uint64_t i = 0; i < *t; ++i) {
      const auto member = balance_member(g, i);
      ++rep.members_checked;
      auto witness = balanced_satisfying(member);
      if (!witness) continue;
      const auto inst = to_remotest(member);
      rep.threshold = inst.threshold;
      const std::size_t direct = distance_to(*witness, inst.strings);
      rep.max_distance = sweep_continuous_remotest(inst.strings, options.enumeration_cap).objective;
      rep.witness_member = i;
      rep.pass = rep.equisatisfiable && direct >= inst.threshold + 1 && rep.max_distance >= inst.threshold + 1;
      detail << "member " << i << ": witness distance " << direct << ", max distance " << rep.max_distance
             << ", threshold " << inst.threshold;
      break;
    }
    if (!rep.witness_member) detail << "no family member admits a balanced satisfying assignment";
  } else {
    rep.pass = rep.equisatisfiable;
    for (std::uint64_t i = 0; i < *t; ++i) {
      const auto [threshold, m] = gadget_objective(balance_member(g, i), options.enumeration_cap);
      ++rep.members_checked;
      rep.threshold = threshold;
      rep.max_distance = std::max(rep.max_distance, m);
      if (m >= threshold + 1) {
        rep.pass = false;
        detail << "member " << i << " reaches distance " << m << " above threshold " << threshold;
        break;
      }
    }
    if (rep.pass) detail << "all " << *t << " members stay within threshold " << rep.threshold;
  }
  if (!rep.equisatisfiable) detail << "; regularized formula is not equisatisfiable";
  rep.detail = detail.str();
  return rep;
}

}  // namespace hammctr
