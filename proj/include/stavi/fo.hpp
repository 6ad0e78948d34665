#pragma once

// First-order monadic formulas over <, = and unary predicates.

#include <algorithm>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "stavi/sexpr.hpp"

namespace stavi {

enum class FoKind { Less, Equal, Pred, Not, And, Or, Exists, Forall };

class FoFormula {
 public:
  static FoFormula less(std::string x, std::string y) {
    return FoFormula(Node{FoKind::Less, {}, std::move(x), std::move(y), {}});
  }
  static FoFormula equal(std::string x, std::string y) {
    return FoFormula(Node{FoKind::Equal, {}, std::move(x), std::move(y), {}});
  }
  static FoFormula pred(std::string atom, std::string x) {
    return FoFormula(Node{FoKind::Pred, std::move(atom), std::move(x), {}, {}});
  }
  static FoFormula lnot(FoFormula f) {
    return FoFormula(Node{FoKind::Not, {}, {}, {}, {std::move(f)}});
  }
  static FoFormula land(FoFormula f, FoFormula g) {
    return FoFormula(Node{FoKind::And, {}, {}, {}, {std::move(f), std::move(g)}});
  }
  static FoFormula lor(FoFormula f, FoFormula g) {
    return FoFormula(Node{FoKind::Or, {}, {}, {}, {std::move(f), std::move(g)}});
  }
  static FoFormula exists(std::string x, FoFormula f) {
    return FoFormula(Node{FoKind::Exists, {}, std::move(x), {}, {std::move(f)}});
  }
  static FoFormula forall(std::string x, FoFormula f) {
    return FoFormula(Node{FoKind::Forall, {}, std::move(x), {}, {std::move(f)}});
  }
  static FoFormula implies(FoFormula f, FoFormula g) {
    return lor(lnot(std::move(f)), std::move(g));
  }

  FoKind kind() const { return node_->kind; }
  // Predicate name of a Pred node.
  const std::string& atom() const { return node_->atom; }
  // First variable: Less/Equal/Pred argument, or the quantified variable.
  const std::string& var() const { return node_->x; }
  const std::string& var2() const { return node_->y; }
  const FoFormula& sub(std::size_t i = 0) const { return node_->subs[i]; }
  std::size_t arity() const { return node_->subs.size(); }

  bool operator==(const FoFormula& o) const {
    return node_ == o.node_ || *node_ == *o.node_;
  }

 private:
  struct Node {
    FoKind kind;
    std::string atom;
    std::string x;
    std::string y;
    std::vector<FoFormula> subs;
    bool operator==(const Node&) const = default;
  };
  explicit FoFormula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

inline std::set<std::string> free_vars(const FoFormula& f) {
  switch (f.kind()) {
    case FoKind::Less:
    case FoKind::Equal: return {f.var(), f.var2()};
    case FoKind::Pred: return {f.var()};
    case FoKind::Not: return free_vars(f.sub());
    case FoKind::And:
    case FoKind::Or: {
      auto s = free_vars(f.sub(0));
      auto t = free_vars(f.sub(1));
      s.insert(t.begin(), t.end());
      return s;
    }
    case FoKind::Exists:
    case FoKind::Forall: {
      auto s = free_vars(f.sub());
      s.erase(f.var());
      return s;
    }
  }
  return {};
}

inline std::size_t quantifier_depth(const FoFormula& f) {
  switch (f.kind()) {
    case FoKind::Not: return quantifier_depth(f.sub());
    case FoKind::And:
    case FoKind::Or:
      return std::max(quantifier_depth(f.sub(0)), quantifier_depth(f.sub(1)));
    case FoKind::Exists:
    case FoKind::Forall: return 1 + quantifier_depth(f.sub());
    default: return 0;
  }
}

inline std::set<std::string> predicates_of(const FoFormula& f) {
  if (f.kind() == FoKind::Pred) return {f.atom()};
  std::set<std::string> out;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    auto s = predicates_of(f.sub(i));
    out.insert(s.begin(), s.end());
  }
  return out;
}

inline std::size_t node_count(const FoFormula& f) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < f.arity(); ++i) n += node_count(f.sub(i));
  return n;
}

namespace detail {

inline void print_fo(std::ostream& os, const FoFormula& f) {
  switch (f.kind()) {
    case FoKind::Less: os << "(< " << f.var() << ' ' << f.var2() << ')'; return;
    case FoKind::Equal: os << "(= " << f.var() << ' ' << f.var2() << ')'; return;
    case FoKind::Pred: os << '(' << f.atom() << ' ' << f.var() << ')'; return;
    case FoKind::Not:
      os << "(! ";
      print_fo(os, f.sub());
      os << ')';
      return;
    case FoKind::And:
    case FoKind::Or:
      os << (f.kind() == FoKind::And ? "(& " : "(| ");
      print_fo(os, f.sub(0));
      os << ' ';
      print_fo(os, f.sub(1));
      os << ')';
      return;
    case FoKind::Exists:
    case FoKind::Forall:
      os << (f.kind() == FoKind::Exists ? "(E " : "(A ") << f.var() << ' ';
      print_fo(os, f.sub());
      os << ')';
      return;
  }
}

inline std::string ident(const SExpr& e, const char* what) {
  if (e.is_list || !is_identifier(e.token))
    e.fail(std::string("expected ") + what);
  return e.token;
}

inline FoFormula fo_from_sexpr(const SExpr& e) {
  if (!e.is_list) e.fail("expected a parenthesized formula");
  const SExpr& head = e.items.front();
  if (head.is_list) head.fail("expected an operator or predicate");
  const std::string& op = head.token;
  const auto n = e.items.size();
  if ((op == "<" || op == "=") && n == 3) {
    auto x = ident(e.items[1], "variable");
    auto y = ident(e.items[2], "variable");
    return op == "<" ? FoFormula::less(x, y) : FoFormula::equal(x, y);
  }
  if (op == "!" && n == 2) return FoFormula::lnot(fo_from_sexpr(e.items[1]));
  if ((op == "&" || op == "|") && n == 3) {
    auto a = fo_from_sexpr(e.items[1]);
    auto b = fo_from_sexpr(e.items[2]);
    return op == "&" ? FoFormula::land(a, b) : FoFormula::lor(a, b);
  }
  if ((op == "E" || op == "A") && n == 3) {
    auto x = ident(e.items[1], "variable");
    auto body = fo_from_sexpr(e.items[2]);
    return op == "E" ? FoFormula::exists(x, body) : FoFormula::forall(x, body);
  }
  if (is_identifier(op) && n == 2)
    return FoFormula::pred(op, ident(e.items[1], "variable"));
  head.fail("malformed formula headed by '" + op + "'");
}

}  // namespace detail

inline FoFormula parse_fo(std::string_view text) {
  return detail::fo_from_sexpr(read_sexpr(text));
}

inline std::string print_fo(const FoFormula& f) {
  std::ostringstream os;
  detail::print_fo(os, f);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const FoFormula& f) {
  detail::print_fo(os, f);
  return os;
}

}  // namespace stavi
