#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stavi {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                           ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A parsed s-expression: either a bare token or a parenthesized list.
struct SExpr {
  std::string token;
  std::vector<SExpr> items;
  bool is_list = false;
  std::size_t line = 1;
  std::size_t column = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, column);
  }
};

namespace detail {

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  SExpr read_single() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty input", line_, col_);
    SExpr e = read();
    skip_ws();
    if (pos_ < text_.size())
      throw ParseError("trailing input after expression", line_, col_);
    return e;
  }

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    for (skip_ws(); pos_ < text_.size(); skip_ws()) out.push_back(read());
    return out;
  }

 private:
  static bool is_delim(char c) {
    return c == '(' || c == ')' || c == ' ' || c == '\t' || c == '\n' ||
           c == '\r';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      advance();
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    e.column = col_;
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    if (c == '(') {
      advance();
      e.is_list = true;
      for (;;) {
        skip_ws();
        if (pos_ >= text_.size())
          throw ParseError("unbalanced '(' opened here", e.line, e.column);
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      if (e.items.empty()) e.fail("empty list");
      return e;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) advance();
    e.token = std::string(text_.substr(start, pos_ - start));
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (!alpha(s[0])) return false;
  for (char c : s)
    if (!alpha(c) && !(c >= '0' && c <= '9') && c != '\'') return false;
  return true;
}

}  // namespace detail

inline SExpr read_sexpr(std::string_view text) {
  return detail::SExprReader(text).read_single();
}

}  // namespace stavi
