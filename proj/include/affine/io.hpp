#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "affine/algebra.hpp"
#include "affine/free_clone.hpp"
#include "affine/galois.hpp"
#include "affine/term.hpp"

namespace affine {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  return out;
}

inline std::size_t parse_index(std::string_view text, const std::string& what) {
  text = trim(text);
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size())
    fail(ErrorKind::parse_error, what + ": '" + std::string(text) + "' is not a non-negative integer");
  return value;
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline void flatten_table(const ordered_json& node, std::size_t depth, std::size_t size, const std::string& path,
                          std::vector<Elem>& out) {
  if (depth == 0) {
    if (!node.is_number_unsigned())
      fail(ErrorKind::validation_error, path + ": expected an element index, got " + std::string(node.type_name()));
    const auto v = node.get<std::uint64_t>();
    if (v >= size)
      fail(ErrorKind::validation_error, path + ": entry " + std::to_string(v) + " outside carrier of size " + std::to_string(size));
    out.push_back(static_cast<Elem>(v));
    return;
  }
  if (!node.is_array() || node.size() != size)
    fail(ErrorKind::validation_error, path + ": expected an array of " + std::to_string(size) + " entries");
  for (std::size_t i = 0; i < size; ++i) flatten_table(node[i], depth - 1, size, path + "[" + std::to_string(i) + "]", out);
}

}  // namespace detail

/// Parses the algebra file format:
///
///   {"name": "z2", "size": 2,
///    "ops": {"add": {"arity": 2, "table": [[0, 1], [1, 0]]},
///            "neg": {"arity": 1, "table": [0, 1]},
///            "zero": {"arity": 0, "table": 0}}}
///
/// A table of arity k is nested k deep, first argument outermost. Symbol
/// order is file order.
inline FiniteAlgebra parse_algebra_file(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    fail(ErrorKind::parse_error, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": malformed JSON");
  }
  if (!doc.is_object()) fail(ErrorKind::parse_error, "top level: expected an object");
  for (const auto& [key, value] : doc.items())
    if (key != "name" && key != "size" && key != "ops") fail(ErrorKind::parse_error, "unknown field '" + key + "'");
  if (!doc.contains("name") || !doc["name"].is_string()) fail(ErrorKind::parse_error, "field 'name': expected a string");
  if (!doc.contains("size") || !doc["size"].is_number_unsigned())
    fail(ErrorKind::parse_error, "field 'size': expected a non-negative integer");
  if (!doc.contains("ops") || !doc["ops"].is_object()) fail(ErrorKind::parse_error, "field 'ops': expected an object");

  const auto size = doc["size"].get<std::uint64_t>();
  if (size > std::numeric_limits<Elem>::max()) fail(ErrorKind::validation_error, "field 'size': too large");
  std::vector<Symbol> symbols;
  std::vector<std::vector<Elem>> tables;
  for (const auto& [name, op] : doc["ops"].items()) {
    const std::string path = "ops." + name;
    if (name.empty() || std::any_of(name.begin(), name.end(), [](char c) {
          return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' || c == ';' || c == '=';
        }))
      fail(ErrorKind::validation_error, path + ": symbol names may not contain spaces or ( ) , ; =");
    if (!op.is_object()) fail(ErrorKind::parse_error, path + ": expected an object");
    for (const auto& [key, value] : op.items())
      if (key != "arity" && key != "table") fail(ErrorKind::parse_error, path + ": unknown field '" + key + "'");
    if (!op.contains("arity") || !op["arity"].is_number_unsigned())
      fail(ErrorKind::parse_error, path + ".arity: expected a non-negative integer");
    if (!op.contains("table")) fail(ErrorKind::parse_error, path + ".table: missing");
    const auto arity = op["arity"].get<std::uint64_t>();
    if (arity > 8) fail(ErrorKind::validation_error, path + ".arity: at most 8 supported");
    std::vector<Elem> table;
    detail::flatten_table(op["table"], static_cast<std::size_t>(arity), static_cast<std::size_t>(size), path + ".table", table);
    symbols.push_back({name, static_cast<std::size_t>(arity)});
    tables.push_back(std::move(table));
  }
  try {
    return FiniteAlgebra(Signature(std::move(symbols)), static_cast<std::size_t>(size), std::move(tables),
                         doc["name"].get<std::string>());
  } catch (const Error& e) {
    fail(ErrorKind::validation_error, e.what());
  }
}

inline FiniteAlgebra load_algebra_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::usage_error, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_algebra_file(buf.str());
}

/// Inverse of parse_algebra_file.
inline ordered_json algebra_to_json(const FiniteAlgebra& a) {
  ordered_json ops = ordered_json::object();
  for (std::size_t op = 0; op < a.signature().size(); ++op) {
    const auto& sym = a.signature()[op];
    const auto table = a.table(op);
    std::function<ordered_json(std::size_t, std::size_t)> nest = [&](std::size_t depth, std::size_t offset) -> ordered_json {
      if (depth == sym.arity) return table[offset];
      ordered_json arr = ordered_json::array();
      const std::size_t stride = saturating_pow(a.size(), sym.arity - depth - 1);
      for (std::size_t i = 0; i < a.size(); ++i) arr.push_back(nest(depth + 1, offset + i * stride));
      return arr;
    };
    ops[sym.name] = {{"arity", sym.arity}, {"table", nest(0, 0)}};
  }
  return {{"name", a.name()}, {"size", a.size()}, {"ops", ops}};
}

/// Point sets: "0,1;1,0" lists points of A^n; "()" is the point of A^0;
/// "" and "{}" are the empty set.
inline AffineSubset parse_points(std::string_view text, const GroundInstance& gi) {
  AffineSubset out = AffineSubset::empty(gi);
  text = detail::trim(text);
  if (text.empty() || text == "{}") return out;
  const std::size_t k = gi.ground()->size();
  for (auto item : detail::split(text, ';')) {
    item = detail::trim(item);
    std::vector<Elem> pt;
    if (item != "()") {
      for (auto part : detail::split(item, ',')) {
        const auto v = detail::parse_index(part, "point coordinate");
        if (v >= k) fail(ErrorKind::validation_error, "coordinate " + std::to_string(v) + " outside carrier of size " + std::to_string(k));
        pt.push_back(static_cast<Elem>(v));
      }
    }
    if (pt.size() != gi.arity())
      fail(ErrorKind::validation_error, "point '" + std::string(item) + "' has " + std::to_string(pt.size()) +
                                            " coordinates, arity is " + std::to_string(gi.arity()));
    out.insert(gi.encode(pt));
  }
  return out;
}

/// The element of F(n) a term denotes.
inline Elem term_element(const FreeAlgebra& f, const Term& t) {
  const auto& g = *f.generator_algebra();
  std::vector<Elem> values(f.table_length());
  for (std::size_t x = 0; x < values.size(); ++x) {
    const auto pt = decode_tuple(x, g.size(), f.arity());
    values[x] = evaluate_term(g, t, pt);
  }
  auto found = f.find(values);
  if (!found) fail(ErrorKind::assertion_failure, "term value table missing from the clone");
  return *found;
}

/// Relations: "p,q;..." with element indices of F(n), or "s=t;..." with
/// terms over the signature.
inline Relation parse_relation(std::string_view text, const FreeAlgebra& f) {
  std::vector<std::pair<Elem, Elem>> pairs;
  text = detail::trim(text);
  if (text.empty() || text == "{}") return Relation(f.size(), {});
  const auto& sig = f.generator_algebra()->signature();
  for (auto item : detail::split(text, ';')) {
    item = detail::trim(item);
    const auto eq = item.find('=');
    if (eq != std::string_view::npos) {
      const Term lhs = parse_term(detail::trim(item.substr(0, eq)), sig);
      const Term rhs = parse_term(detail::trim(item.substr(eq + 1)), sig);
      pairs.emplace_back(term_element(f, lhs), term_element(f, rhs));
      continue;
    }
    const auto parts = detail::split(item, ',');
    if (parts.size() != 2) fail(ErrorKind::parse_error, "relation pair '" + std::string(item) + "' needs two entries");
    const auto p = detail::parse_index(parts[0], "relation entry");
    const auto q = detail::parse_index(parts[1], "relation entry");
    if (p >= f.size() || q >= f.size())
      fail(ErrorKind::validation_error, "relation entry outside F(" + std::to_string(f.arity()) + ") of size " + std::to_string(f.size()));
    pairs.emplace_back(static_cast<Elem>(p), static_cast<Elem>(q));
  }
  return Relation(f.size(), std::move(pairs));
}

}  // namespace affine
