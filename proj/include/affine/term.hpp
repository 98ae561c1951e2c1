#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "affine/error.hpp"
#include "affine/signature.hpp"

namespace affine {

/// Either a variable x<i> or a symbol applied to argument terms.
///
/// Terms are syntax: nothing here checks them against a signature.
/// evaluate_term reports ill-formed terms when it meets them.
struct Term {
  enum class Kind { variable, apply };

  Kind kind = Kind::variable;
  std::size_t variable = 0;
  std::string symbol;
  std::vector<Term> args;

  static Term var(std::size_t index) {
    Term t;
    t.kind = Kind::variable;
    t.variable = index;
    return t;
  }

  static Term apply(std::string symbol, std::vector<Term> args = {}) {
    Term t;
    t.kind = Kind::apply;
    t.symbol = std::move(symbol);
    t.args = std::move(args);
    return t;
  }

  bool is_variable() const { return kind == Kind::variable; }

  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& a : args) d = std::max(d, a.depth() + 1);
    return d;
  }

  friend bool operator==(const Term&, const Term&) = default;
};

/// Prefix form, e.g. `and(x0, not(x1))`. Constants print bare.
inline std::string to_string(const Term& t) {
  if (t.is_variable()) return "x" + std::to_string(t.variable);
  if (t.args.empty()) return t.symbol;
  std::string out = t.symbol + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(t.args[i]);
  }
  return out + ")";
}

namespace detail {

class TermParser {
 public:
  TermParser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Term parse() {
    Term t = parse_term();
    skip_space();
    if (pos_ != text_.size()) error("trailing input");
    return t;
  }

 private:
  static bool is_token_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' &&
           c != ';' && c != '=';
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::parse_error,
         what + " at column " + std::to_string(pos_ + 1) + " in term '" + std::string(text_) + "'");
  }

  static bool variable_token(std::string_view tok, std::size_t& index) {
    if (tok.size() < 2 || tok[0] != 'x') return false;
    index = 0;
    for (char c : tok.substr(1)) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
      index = index * 10 + static_cast<std::size_t>(c - '0');
    }
    return true;
  }

  Term parse_term() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_token_char(text_[pos_])) ++pos_;
    if (start == pos_) error("expected a symbol or variable");
    const std::string_view tok = text_.substr(start, pos_ - start);

    std::size_t var = 0;
    if (!sig_.find(std::string(tok)) && variable_token(tok, var)) return Term::var(var);

    const auto sym = sig_.find(std::string(tok));
    if (!sym) fail(ErrorKind::unknown_symbol, "'" + std::string(tok) + "' is not in the signature");

    std::vector<Term> args;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
      } else {
        for (;;) {
          args.push_back(parse_term());
          skip_space();
          if (pos_ >= text_.size()) error("unterminated argument list");
          if (text_[pos_] == ',') {
            ++pos_;
            continue;
          }
          if (text_[pos_] == ')') {
            ++pos_;
            break;
          }
          error("expected ',' or ')'");
        }
      }
    }
    if (args.size() != sig_[*sym].arity)
      fail(ErrorKind::arity_mismatch, "'" + std::string(tok) + "' takes " +
                                          std::to_string(sig_[*sym].arity) + " arguments, got " +
                                          std::to_string(args.size()));
    return Term::apply(std::string(tok), std::move(args));
  }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses prefix syntax against a signature. Variables are x0, x1, ...;
/// constants may be written `c` or `c()`.
inline Term parse_term(std::string_view text, const Signature& sig) {
  return detail::TermParser(text, sig).parse();
}

}  // namespace affine
