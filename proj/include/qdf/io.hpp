#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qdf/cayley_table.hpp"
#include "qdf/design.hpp"
#include "qdf/errors.hpp"
#include "qdf/permutation.hpp"

namespace qdf::io {

namespace detail {

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur)) lines.push_back(cur);
  return lines;
}

inline std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r'))
      ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r')
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool is_blank(std::string_view line) { return tokens(line).empty(); }

inline int parse_int(std::string_view tok, int lineno) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw parse_error(lineno, "invalid integer '" + std::string(tok) + "'");
  return value;
}

// Parses one Cayley table block starting at lines[pos]; advances pos past it.
inline CayleyTable parse_table_block(const std::vector<std::string>& lines,
                                     size_t& pos) {
  while (pos < lines.size() && is_blank(lines[pos])) ++pos;
  if (pos >= lines.size())
    throw parse_error(static_cast<int>(pos) + 1, "expected table order");
  auto head = tokens(lines[pos]);
  if (head.size() != 1)
    throw parse_error(static_cast<int>(pos) + 1,
                      "expected a single integer (the order) on the first line");
  const int n = parse_int(head[0], static_cast<int>(pos) + 1);
  if (n <= 0)
    throw parse_error(static_cast<int>(pos) + 1, "order must be positive");
  ++pos;

  std::vector<int> cells;
  cells.reserve(static_cast<size_t>(n) * n);
  for (int r = 0; r < n; ++r, ++pos) {
    const int lineno = static_cast<int>(pos) + 1;
    if (pos >= lines.size())
      throw parse_error(lineno, "missing table row " + std::to_string(r + 1));
    auto toks = tokens(lines[pos]);
    if (static_cast<int>(toks.size()) != n)
      throw parse_error(lineno, "ragged row: expected " + std::to_string(n) +
                                    " entries, got " +
                                    std::to_string(toks.size()));
    for (auto tok : toks) {
      const int v = parse_int(tok, lineno);
      if (v < 0 || v >= n) throw range_error(lineno, v);
      cells.push_back(v);
    }
  }
  return CayleyTable(n, std::move(cells));
}

inline void expect_only_blank(const std::vector<std::string>& lines,
                              size_t pos) {
  for (; pos < lines.size(); ++pos)
    if (!is_blank(lines[pos]))
      throw parse_error(static_cast<int>(pos) + 1,
                        "unexpected trailing content");
}

}  // namespace detail

// Cayley table text format: line 1 is n, then n rows of n integers in [0,n).
inline CayleyTable parse_table(const std::string& text) {
  auto lines = detail::split_lines(text);
  size_t pos = 0;
  CayleyTable t = detail::parse_table_block(lines, pos);
  detail::expect_only_blank(lines, pos);
  return t;
}

inline std::string format_table(const CayleyTable& t) {
  std::string out = std::to_string(t.order()) + "\n";
  for (int a = 0; a < t.order(); ++a) {
    for (int b = 0; b < t.order(); ++b) {
      if (b) out += ' ';
      out += std::to_string(t.at(a, b));
    }
    out += '\n';
  }
  return out;
}

// DFBQ file format: add table, a line holding only "%", sub table.
inline std::pair<CayleyTable, CayleyTable> parse_dfbq_tables(
    const std::string& text) {
  auto lines = detail::split_lines(text);
  size_t pos = 0;
  CayleyTable add = detail::parse_table_block(lines, pos);
  while (pos < lines.size() && detail::is_blank(lines[pos])) ++pos;
  if (pos >= lines.size() || detail::tokens(lines[pos]).size() != 1 ||
      detail::tokens(lines[pos])[0] != "%")
    throw parse_error(static_cast<int>(pos) + 1,
                      "expected '%' separator between add and sub tables");
  ++pos;
  CayleyTable sub = detail::parse_table_block(lines, pos);
  detail::expect_only_blank(lines, pos);
  if (add.order() != sub.order())
    throw parse_error(1, "add and sub tables have different orders");
  return {std::move(add), std::move(sub)};
}

inline std::string format_dfbq_tables(const CayleyTable& add,
                                      const CayleyTable& sub) {
  return format_table(add) + "%\n" + format_table(sub);
}

inline bool looks_like_dfbq_file(const std::string& text) {
  for (const auto& line : detail::split_lines(text)) {
    auto toks = detail::tokens(line);
    if (toks.size() == 1 && toks[0] == "%") return true;
  }
  return false;
}

// Blocks file: one block per nonempty line, distinct integers; '#' starts
// a comment.
inline std::vector<Block> parse_blocks(const std::string& text) {
  auto lines = detail::split_lines(text);
  std::vector<Block> blocks;
  for (size_t pos = 0; pos < lines.size(); ++pos) {
    const int lineno = static_cast<int>(pos) + 1;
    std::string line = lines[pos];
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    auto toks = detail::tokens(line);
    if (toks.empty()) continue;
    std::vector<int> elems;
    for (auto tok : toks) {
      const int v = detail::parse_int(tok, lineno);
      if (v < 0) throw range_error(lineno, v);
      elems.push_back(v);
    }
    try {
      blocks.push_back(Block(std::move(elems)));
    } catch (const bad_parameters& ex) {
      throw parse_error(lineno, ex.what());
    }
  }
  if (blocks.empty()) throw parse_error(1, "no blocks in file");
  return blocks;
}

inline std::string format_block(const Block& b) {
  std::string out;
  for (size_t i = 0; i < b.elems.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(b.elems[i]);
  }
  return out;
}

inline std::string format_family(const BlockFamily& fam) {
  std::string out;
  for (size_t i = 0; i < fam.blocks.size(); ++i) {
    if (i) out += " | ";
    out += format_block(fam.blocks[i]);
  }
  return out;
}

// Design output: header "v=<v> b=<#blocks> k=<k> lambda=<lambda>", then the
// sorted blocks one per line.
inline std::string format_design(const Design& d,
                                 const DesignCertificate* cert) {
  std::string k = "-", lambda = "-";
  if (cert) {
    k = std::to_string(cert->k);
    lambda = std::to_string(cert->lambda);
  } else if (!d.blocks.empty()) {
    const int k0 = d.blocks.front().first.size();
    bool uniform = true;
    for (const auto& [b, m] : d.blocks)
      if (b.size() != k0) uniform = false;
    if (uniform) k = std::to_string(k0);
  }
  std::string out = "v=" + std::to_string(d.points) +
                    " b=" + std::to_string(d.distinct_blocks()) + " k=" + k +
                    " lambda=" + lambda + "\n";
  for (const auto& [b, m] : d.blocks) out += format_block(b) + "\n";
  return out;
}

inline Permutation parse_permutation(const std::string& text) {
  std::vector<int> im;
  for (auto tok : detail::tokens(text)) im.push_back(detail::parse_int(tok, 1));
  return Permutation(std::move(im));
}

inline std::string format_permutation(const Permutation& p) {
  std::string out;
  for (int i = 0; i < p.order(); ++i) {
    if (i) out += ' ';
    out += std::to_string(p(i));
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qdf::io
