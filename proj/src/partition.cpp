#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "hammctr/error.hpp"
#include "hammctr/inclexcl.hpp"
#include "refine_detail.hpp"

namespace hammctr {

namespace detail {

Buckets position_buckets(const StringSet &set, std::size_t position) {
  const std::size_t n = set.n();
  Buckets b;
  b.order.resize(n);
  std::iota(b.order.begin(), b.order.end(), std::uint32_t{0});
  const Symbol *base = set.symbols().data();
  const std::size_t d = set.d();
  auto sym = [&](std::uint32_t i) { return base[i * d + position]; };
  std::stable_sort(b.order.begin(), b.order.end(),
                   [&](std::uint32_t a, std::uint32_t c) { return sym(a) < sym(c); });
  for (std::size_t t = 0; t < n; ++t)
    if (t == 0 || sym(b.order[t]) != sym(b.order[t - 1])) b.starts.push_back(static_cast<std::uint32_t>(t));
  b.starts.push_back(static_cast<std::uint32_t>(n));
  return b;
}

Buckets id_buckets(std::span<const std::uint32_t> ids, std::size_t part_count) {
  Buckets b;
  b.starts.assign(part_count + 1, 0);
  for (auto id : ids) ++b.starts[id + 1];
  for (std::size_t p = 0; p < part_count; ++p) b.starts[p + 1] += b.starts[p];
  b.order.resize(ids.size());
  std::vector<std::uint32_t> fill(b.starts.begin(), b.starts.end() - 1);
  for (std::size_t i = 0; i < ids.size(); ++i) b.order[fill[ids[i]]++] = static_cast<std::uint32_t>(i);
  return b;
}

std::uint32_t refine_ids(std::span<const std::uint32_t> ids, const Buckets &buckets,
                         std::span<std::uint32_t> out, std::vector<std::uint32_t> &sizes,
                         RefineScratch &scratch) {
  sizes.clear();
  std::uint32_t next = 0;
  for (std::size_t b = 0; b + 1 < buckets.starts.size(); ++b) {
    const std::uint64_t tick = ++scratch.clock;
    for (std::uint32_t t = buckets.starts[b]; t < buckets.starts[b + 1]; ++t) {
      const std::uint32_t x = buckets.order[t];
      const std::uint32_t old = ids[x];
      if (scratch.stamp[old] != tick) {
        scratch.stamp[old] = tick;
        scratch.new_id[old] = next++;
        sizes.push_back(0);
      }
      const std::uint32_t id = scratch.new_id[old];
      out[x] = id;
      ++sizes[id];
    }
  }
  return next;
}

}  // namespace detail

Partition::Partition(std::size_t n) : ids_(n, 0), sizes_() {
  if (n > 0) sizes_.push_back(static_cast<std::uint32_t>(n));
}

Partition Partition::from_labels(std::span<const std::uint64_t> labels) {
  Partition p;
  p.ids_.resize(labels.size());
  std::unordered_map<std::uint64_t, std::uint32_t> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = seen.try_emplace(labels[i], static_cast<std::uint32_t>(p.sizes_.size()));
    if (inserted) p.sizes_.push_back(0);
    p.ids_[i] = it->second;
    ++p.sizes_[it->second];
  }
  return p;
}

Partition Partition::by_position(const StringSet &set, std::size_t position) {
  if (position >= set.d()) throw InvalidArgument("position out of range");
  std::vector<std::uint64_t> labels(set.n());
  for (std::size_t i = 0; i < set.n(); ++i) labels[i] = set.row(i)[position];
  return from_labels(labels);
}

Partition Partition::canonical() const {
  std::vector<std::uint64_t> labels(ids_.begin(), ids_.end());
  Partition c = from_labels(labels);
  c.generation_ = generation_;
  return c;
}

bool operator==(const Partition &a, const Partition &b) {
  if (a.size() != b.size() || a.part_count() != b.part_count()) return false;
  return a.canonical().ids_ == b.canonical().ids_;
}

Partition refine(const Partition &p, const Partition &q) {
  if (p.size() != q.size())
    throw InvalidArgument("refine: universe sizes differ (" + std::to_string(p.size()) + " vs " +
                          std::to_string(q.size()) + ")");
  const std::size_t n = p.size();
  auto buckets = detail::id_buckets(q.ids_, q.part_count());
  detail::RefineScratch scratch(std::max<std::size_t>(p.part_count(), 1));
  Partition out;
  out.ids_.resize(n);
  detail::refine_ids(p.ids_, buckets, out.ids_, out.sizes_, scratch);
  out.generation_ = std::max(p.generation_, q.generation_) + 1;
  return out;
}

}  // namespace hammctr
