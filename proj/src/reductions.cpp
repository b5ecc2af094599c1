#include "hammctr/reductions.hpp"

#include <json.hpp>

#include "hammctr/error.hpp"
#include "text_util.hpp"

namespace hammctr {

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::ClosestToRemotest: return "c2r";
    case Direction::RemotestToClosest: return "r2c";
    case Direction::ContinuousComplement: return "complement";
  }
  return "?";
}

std::string_view role_name(Role r) {
  switch (r) {
    case Role::A: return "a";
    case Role::B: return "b";
    case Role::X: return "x";
    case Role::Y: return "y";
    case Role::Same: return "same";
  }
  return "?";
}

namespace {

Direction parse_direction(std::string_view s) {
  if (s == "c2r") return Direction::ClosestToRemotest;
  if (s == "r2c") return Direction::RemotestToClosest;
  if (s == "complement") return Direction::ContinuousComplement;
  throw ParseError(1, "unknown direction \"" + std::string(s) + "\"");
}

Role parse_role(std::string_view s, std::size_t line) {
  for (Role r : {Role::A, Role::B, Role::X, Role::Y, Role::Same})
    if (role_name(r) == s) return r;
  throw ParseError(line, "unknown role \"" + std::string(s) + "\"");
}

void require_binary(const StringSet &set, std::string_view what) {
  if (!set.is_binary())
    throw InvalidArgument(std::string(what) + " needs a binary alphabet, got sigma=" +
                          std::to_string(set.sigma()));
}

// Strings are `first` followed by `second`, all of length d + r d''.
Reduction discrete(const StringSet &set, Direction dir, const CodeOptions &options) {
  require_binary(set, direction_name(dir));
  const std::size_t n = set.n(), d = set.d();
  const auto code = build_code(n, options);
  const std::size_t dd = code.length;
  const std::size_t r = 10 * ((d + dd - 1) / dd);
  const std::size_t width = d + r * dd;

  std::vector<Symbol> out;
  out.reserve(2 * n * width);
  auto emit = [&](std::size_t i, bool flip, bool with_code) {
    for (Symbol s : set.row(i)) out.push_back(flip ? 1 - s : s);
    auto c = code.words.row(i);
    for (std::size_t rep = 0; rep < r; ++rep)
      for (Symbol s : c) out.push_back(with_code ? s : 0);
  };
  const bool c2r = dir == Direction::ClosestToRemotest;
  ReductionMap map;
  map.direction = dir;
  map.source_n = n;
  map.source_d = d;
  map.target_n = 2 * n;
  map.target_d = width;
  map.repetitions = r;
  map.code_length = dd;
  map.offset = d + r * dd / 4;
  // c2r: a_i = x_i c_i^r, b_i = ~x_i 0^(r d'').  r2c: x_i = a_i 0^(r d''), y_i = ~a_i c_i^r.
  for (std::size_t i = 0; i < n; ++i) {
    emit(i, false, c2r);
    map.index_map.push_back({i, c2r ? Role::A : Role::X});
  }
  for (std::size_t i = 0; i < n; ++i) {
    emit(i, true, !c2r);
    map.index_map.push_back({i, c2r ? Role::B : Role::Y});
  }
  return {StringSet(2 * n, width, 2, std::move(out)), std::move(map)};
}

}  // namespace

Reduction complement_continuous(const StringSet &set) {
  require_binary(set, "complement");
  ReductionMap map;
  map.direction = Direction::ContinuousComplement;
  map.source_n = map.target_n = set.n();
  map.source_d = map.target_d = set.d();
  map.offset = set.d();
  for (std::size_t i = 0; i < set.n(); ++i) map.index_map.push_back({i, Role::Same});
  return {set, std::move(map)};
}

Reduction closest_to_remotest(const StringSet &set, const CodeOptions &code) {
  return discrete(set, Direction::ClosestToRemotest, code);
}

Reduction remotest_to_closest(const StringSet &set, const CodeOptions &code) {
  return discrete(set, Direction::RemotestToClosest, code);
}

std::size_t apply_transform(const ReductionMap &map, std::size_t target_objective) {
  if (target_objective > map.target_d || target_objective > map.offset)
    throw InvalidArgument("target objective " + std::to_string(target_objective) +
                          " is outside [0, " + std::to_string(std::min(map.target_d, map.offset)) + "]");
  return map.offset - target_objective;
}

IndexEntry source_of(const ReductionMap &map, std::size_t target_index) {
  if (target_index >= map.index_map.size())
    throw InvalidArgument("target index " + std::to_string(target_index) + " out of range");
  return map.index_map[target_index];
}

RegimeReport check_regimes(const StringSet &source, const Reduction &reduction) {
  const auto &map = reduction.map;
  if (map.direction == Direction::ContinuousComplement)
    throw InvalidArgument("distance regimes apply to the discrete reductions only");
  const auto &t = reduction.target;
  const std::size_t n = map.source_n;
  const std::size_t quarter = map.repetitions * map.code_length / 4;
  const bool c2r = map.direction == Direction::ClosestToRemotest;
  // Index blocks: [0, n) carry the code in c2r, [n, 2n) carry it in r2c.
  const std::size_t far0 = c2r ? 0 : n, near0 = c2r ? n : 0;
  RegimeReport rep;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i < j) {
        rep.far_pairs_ok &= hamming_rows(t, far0 + i, far0 + j) > map.offset;
        rep.near_pairs_ok &= hamming_rows(t, near0 + i, near0 + j) < quarter;
        rep.checked_pairs += 2;
      }
      const std::size_t want = map.source_d - hamming_rows(source, i, j) + quarter;
      rep.cross_pairs_ok &= hamming_rows(t, i, n + j) == want;
      ++rep.checked_pairs;
    }
  return rep;
}

std::string map_to_jsonl(const ReductionMap &map) {
  nlohmann::ordered_json header = {
      {"direction", direction_name(map.direction)},
      {"source_n", map.source_n},
      {"source_d", map.source_d},
      {"target_n", map.target_n},
      {"target_d", map.target_d},
      {"r", map.repetitions},
      {"code_length", map.code_length},
      {"offset", map.offset},
  };
  std::string out = header.dump() + '\n';
  for (std::size_t t = 0; t < map.index_map.size(); ++t) {
    nlohmann::ordered_json line = {{"target", t},
                                   {"source", map.index_map[t].source},
                                   {"role", role_name(map.index_map[t].role)}};
    out += line.dump() + '\n';
  }
  return out;
}

ReductionMap map_from_jsonl(std::string_view text) {
  LineReader lines(text);
  std::string_view line;
  std::size_t lineno = 0;
  ReductionMap map;
  bool have_header = false;
  try {
    while (lines.next(line, lineno)) {
      if (trim(line).empty()) continue;
      auto j = nlohmann::json::parse(line);
      if (!have_header) {
        map.direction = parse_direction(j.at("direction").get<std::string>());
        map.source_n = j.at("source_n").get<std::size_t>();
        map.source_d = j.at("source_d").get<std::size_t>();
        map.target_n = j.at("target_n").get<std::size_t>();
        map.target_d = j.at("target_d").get<std::size_t>();
        map.repetitions = j.at("r").get<std::size_t>();
        map.code_length = j.at("code_length").get<std::size_t>();
        map.offset = j.at("offset").get<std::size_t>();
        have_header = true;
        continue;
      }
      if (j.at("target").get<std::size_t>() != map.index_map.size())
        throw ParseError(lineno, "index map entries must be in target order");
      map.index_map.push_back(
          {j.at("source").get<std::size_t>(), parse_role(j.at("role").get<std::string>(), lineno)});
    }
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(lineno, e.what());
  }
  if (!have_header) throw ParseError(0, "empty map file");
  if (map.index_map.size() != map.target_n)
    throw ParseError(lineno, "index map has " + std::to_string(map.index_map.size()) +
                                 " entries, expected " + std::to_string(map.target_n));
  return map;
}

}  // namespace hammctr
