#pragma once

// Rational-function expressions over F_p(t):
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor | factor)*     juxtaposition multiplies
//   factor  := '-' factor | primary ('^' ['-'] digits)?
//   primary := digits | 't' | '(' expr ')'
//
// Integer literals are reduced mod p. Matrices are written [[a, b], [c, d]].

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "linfdc/algebra/matrix.hpp"
#include "linfdc/io/text_format.hpp"

namespace linfdc::cli {

using io::ParseError;

class ExprParser {
 public:
  /// `line` and `col0` locate text[0] in the enclosing file for diagnostics.
  ExprParser(const std::string& text, std::uint64_t p, std::size_t line = 1, std::size_t col0 = 1)
      : s_(text), p_(p), line_(line), col0_(col0) {}

  RatFunc parse_all() {
    RatFunc v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

  /// Parses a matrix literal and checks it is rows x rows.
  Matrix parse_matrix(std::size_t n) {
    std::vector<RatFunc> entries;
    std::size_t rows = 0;
    expect('[');
    while (true) {
      expect('[');
      std::size_t cols = 0;
      while (true) {
        entries.push_back(expr());
        ++cols;
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(']');
        break;
      }
      if (cols != n) fail("row " + std::to_string(rows + 1) + " has " + std::to_string(cols) + " entries, expected " + std::to_string(n));
      ++rows;
      skip();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(']');
      break;
    }
    if (rows != n) fail("matrix has " + std::to_string(rows) + " rows, expected " + std::to_string(n));
    skip();
    if (pos_ != s_.size()) fail("unexpected text after matrix");
    return Matrix(p_, n, n, std::move(entries));
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, col0_ + pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool starts_primary() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == 't' || c == '(';
  }

  RatFunc expr() {
    RatFunc v = term();
    while (true) {
      const char c = peek();
      if (c == '+') {
        ++pos_;
        v = v + term();
      } else if (c == '-') {
        ++pos_;
        v = v - term();
      } else {
        return v;
      }
    }
  }

  RatFunc term() {
    RatFunc v = factor();
    while (true) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        v = v * factor();
      } else if (c == '/') {
        ++pos_;
        const std::size_t at = pos_;
        RatFunc d = factor();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        v = v / d;
      } else if (starts_primary()) {
        v = v * factor();
      } else {
        return v;
      }
    }
  }

  RatFunc factor() {
    if (peek() == '-') {
      ++pos_;
      return -factor();
    }
    RatFunc base = primary();
    if (peek() == '^') {
      ++pos_;
      bool neg = false;
      if (peek() == '-') {
        neg = true;
        ++pos_;
      }
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected an exponent");
      if (pos_ - start > 6) fail("exponent too large");
      long e = std::stol(s_.substr(start, pos_ - start));
      if (neg) {
        if (base.is_zero()) fail("negative power of zero");
        e = -e;
      }
      return base.pow(e);
    }
    return base;
  }

  RatFunc primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      RatFunc v = expr();
      expect(')');
      return v;
    }
    if (c == 't') {
      ++pos_;
      return RatFunc::t(p_);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::uint64_t v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v = (v * 10 + static_cast<std::uint64_t>(s_[pos_] - '0')) % p_;
        ++pos_;
      }
      return RatFunc::constant(p_, v);
    }
    if (c == '\0') fail("unexpected end of expression");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::uint64_t p_;
  std::size_t line_;
  std::size_t col0_;
  std::size_t pos_ = 0;
};

inline RatFunc parse_ratfunc(const std::string& text, std::uint64_t p) { return ExprParser(text, p).parse_all(); }

inline Matrix parse_matrix(const std::string& text, std::uint64_t p, std::size_t n) {
  return ExprParser(text, p).parse_matrix(n);
}

}  // namespace linfdc::cli
