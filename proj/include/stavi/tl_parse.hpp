#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stavi/expansion.hpp"
#include "stavi/sexpr.hpp"
#include "stavi/tl.hpp"

namespace stavi {

namespace detail {

inline TlFormula tl_from_sexpr(const SExpr& e) {
  if (!e.is_list) {
    if (e.token == "TRUE") return tl::top();
    if (e.token == "FALSE") return tl::bottom();
    if (!is_identifier(e.token)) e.fail("invalid atom '" + e.token + "'");
    return tl::atom(e.token);
  }
  const SExpr& head = e.items.front();
  if (head.is_list) head.fail("expected an operator");
  const std::string& op = head.token;
  std::vector<TlFormula> args;
  for (std::size_t i = 1; i < e.items.size(); ++i)
    args.push_back(tl_from_sexpr(e.items[i]));
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      e.fail("'" + op + "' expects " + std::to_string(n) + " operand(s)");
  };
  if (op == "!") {
    need(1);
    return tl::lnot(args[0]);
  }
  if (op == "&" || op == "|" || op == "U" || op == "S" || op == "Us" ||
      op == "Ss") {
    need(2);
    if (op == "&") return tl::land(args[0], args[1]);
    if (op == "|") return tl::lor(args[0], args[1]);
    if (op == "U") return tl::until(args[0], args[1]);
    if (op == "S") return tl::since(args[0], args[1]);
    if (op == "Us") return tl::until_s(args[0], args[1]);
    return tl::since_s(args[0], args[1]);
  }
  const auto& table = tl::expansion_table();
  auto it = table.find(op);
  if (it == table.end()) head.fail("unknown operator '" + op + "'");
  need(it->second.arity);
  return it->second.build(args);
}

}  // namespace detail

// Derived keywords (BOX, GAMMA+, USTAR, ...) are expanded while parsing.
inline TlFormula parse_tl(std::string_view text) {
  return detail::tl_from_sexpr(read_sexpr(text));
}

}  // namespace stavi
