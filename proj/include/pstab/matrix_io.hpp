#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pstab/errors.hpp"
#include "pstab/matrix.hpp"
#include "pstab/rational.hpp"

namespace pstab {

/// Malformed matrix text; line and column are 1-based (column 0 means the
/// problem is the line as a whole).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                           what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

inline std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

}  // namespace detail

/// Matrix text: a line holding n, then n rows of n entries. Blank lines and
/// lines starting with '#' are skipped anywhere.
inline ExactMatrix parse_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  std::vector<std::vector<Rational>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = detail::tokenize(line);
    if (tokens.empty() || tokens.front().text.front() == '#') continue;
    if (n == 0) {
      if (tokens.size() != 1 || !detail::all_digits(tokens[0].text))
        throw ParseError(lineno, tokens[0].column, "expected the dimension n");
      n = std::stoul(tokens[0].text);
      if (n == 0) throw ParseError(lineno, tokens[0].column, "dimension must be at least 1");
      continue;
    }
    if (rows.size() == n) throw ParseError(lineno, tokens[0].column, "more than n rows");
    if (tokens.size() != n)
      throw ParseError(lineno, tokens.size() < n ? line.size() + 1 : tokens[n].column,
                       "expected " + std::to_string(n) + " entries, found " + std::to_string(tokens.size()));
    std::vector<Rational> row;
    for (const auto& t : tokens) {
      try {
        row.push_back(parse_rational(t.text));
      } catch (const ArgumentError& e) {
        throw ParseError(lineno, t.column, e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  if (n == 0) throw ParseError(lineno + 1, 0, "missing dimension line");
  if (rows.size() != n)
    throw ParseError(lineno + 1, 0, "expected " + std::to_string(n) + " rows, found " + std::to_string(rows.size()));
  return ExactMatrix::from_rows(rows);
}

inline ExactMatrix parse_matrix_string(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix(in);
}

inline ExactMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  return parse_matrix(in);
}

/// Canonical text: n on the first line, entries as "7" or "-93/5" separated by
/// single spaces. parse_matrix reads it back unchanged.
inline std::string format_matrix(const ExactMatrix& m) {
  std::string s = std::to_string(m.size()) + "\n";
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m.size(); ++c) {
      if (c) s += ' ';
      s += to_canonical_string(m(r, c));
    }
    s += '\n';
  }
  return s;
}

}  // namespace pstab
