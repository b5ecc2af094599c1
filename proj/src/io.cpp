#include <charconv>
#include <fstream>
#include <sstream>

#include "hammctr/core.hpp"
#include "hammctr/error.hpp"
#include "text_util.hpp"

namespace hammctr {

StringSet read_instance(std::string_view text) {
  LineReader lines(text);
  std::string_view line;
  std::size_t lineno = 0;

  // Header, skipping '#' comments and blank lines before it.
  for (;;) {
    if (!lines.next(line, lineno)) throw ParseError(0, "missing header \"n d sigma\"");
    auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    break;
  }
  auto header = split_integers(line, lineno);
  if (header.size() != 3) throw ParseError(lineno, "header must be \"n d sigma\"");
  const std::uint64_t n = header[0], d = header[1], sigma = header[2];
  if (n < 1) throw ParseError(lineno, "n must be at least 1");
  if (d < 1) throw ParseError(lineno, "d must be at least 1");
  if (sigma < 2 || sigma > 0xffffffffULL) throw ParseError(lineno, "sigma must be in [2, 2^32)");

  std::vector<Symbol> symbols;
  symbols.reserve(n * d);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!lines.next(line, lineno))
      throw ParseError(lineno, "expected " + std::to_string(n) + " rows, found " + std::to_string(i));
    auto row = split_integers(line, lineno);
    if (row.size() != d)
      throw ParseError(lineno, "row has " + std::to_string(row.size()) + " symbols, expected " +
                                   std::to_string(d));
    for (auto v : row) {
      if (v >= sigma)
        throw ParseError(lineno, "symbol " + std::to_string(v) + " out of range for sigma=" +
                                     std::to_string(sigma));
      symbols.push_back(static_cast<Symbol>(v));
    }
  }
  while (lines.next(line, lineno))
    if (!trim(line).empty()) throw ParseError(lineno, "unexpected content after the last row");
  return StringSet(n, d, static_cast<Symbol>(sigma), std::move(symbols));
}

StringSet read_instance_file(const std::string &path) {
  return read_instance(read_file(path));
}

std::string write_instance(const StringSet &set) {
  std::string out;
  out.reserve(set.n() * set.d() * 2 + 32);
  out += std::to_string(set.n()) + ' ' + std::to_string(set.d()) + ' ' +
         std::to_string(set.sigma()) + '\n';
  char buf[16];
  for (std::size_t i = 0; i < set.n(); ++i) {
    auto r = set.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (k) out += ' ';
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, r[k]);
      out.append(buf, end);
    }
    out += '\n';
  }
  return out;
}

void write_instance_file(const StringSet &set, const std::string &path, std::string_view comment) {
  std::string text;
  if (!comment.empty()) {
    std::istringstream in{std::string(comment)};
    for (std::string c; std::getline(in, c);) text += "# " + c + '\n';
  }
  text += write_instance(set);
  write_file(path, text);
}

}  // namespace hammctr
