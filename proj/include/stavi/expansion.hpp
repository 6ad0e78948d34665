#pragma once

// Derived modalities, each written out in terms of the four primitives.

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stavi/tl.hpp"

namespace stavi::tl {

// P holds at every later point.
inline TlFormula box(TlFormula p) { return lnot(until(top(), lnot(p))); }
inline TlFormula box_past(TlFormula p) { return lnot(since(top(), lnot(p))); }

// Some later point satisfies p.
inline TlFormula eventually(TlFormula p) { return until(top(), p); }
inline TlFormula once(TlFormula p) { return since(top(), p); }

// The current point is the infimum of the later p-points.
inline TlFormula k_plus(TlFormula p) { return lnot(until(lnot(p), top())); }
inline TlFormula k_minus(TlFormula p) { return lnot(since(lnot(p), top())); }

// A gap left-definable by p succeeds the current point.
inline TlFormula gamma_plus(TlFormula p) {
  return land({until(p, p), lnot(until(p, lnot(p))), lnot(box(p)),
               lnot(until(p, land(p, k_plus(lnot(p)))))});
}

inline TlFormula gamma_minus(TlFormula p) { return mirror(gamma_plus(mirror(p))); }

// Part<p, q>{} holds on [t, t'] for some t' > t.
inline TlFormula until_star(TlFormula p, TlFormula q) {
  TlFormula qq = until(q, q);
  TlFormula bounded =
      land(p, lor({until(p, q), qq, until(p, land(p, qq))}));
  return lor(bounded, land(p, until_s(p, q)));
}

inline TlFormula since_star(TlFormula p, TlFormula q) {
  return mirror(until_star(mirror(p), mirror(q)));
}

// The current point is succeeded by a p1-gap and p1 & p2 holds up to it.
inline TlFormula until_gap(TlFormula p1, TlFormula p2) {
  TlFormula both = land(p1, p2);
  return land({gamma_plus(p1), gamma_plus(both), lnot(until_s(both, p1))});
}

inline TlFormula since_gap(TlFormula p1, TlFormula p2) {
  return mirror(until_gap(mirror(p1), mirror(p2)));
}

// The current point has an immediate successor / predecessor.
inline TlFormula has_successor() { return until(bottom(), top()); }
inline TlFormula has_predecessor() { return since(bottom(), top()); }

// The current point is the last / first point of the order.
inline TlFormula is_last() { return box(bottom()); }
inline TlFormula is_first() { return box_past(bottom()); }

// p holds somewhere in the order.
inline TlFormula somewhere(TlFormula p) {
  return lor({p, eventually(p), once(p)});
}

class UnknownModality : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Expansion {
  std::size_t arity;
  std::function<TlFormula(std::span<const TlFormula>)> build;
};

inline const std::map<std::string, Expansion>& expansion_table() {
  using Args = std::span<const TlFormula>;
  static const std::map<std::string, Expansion> table = {
      {"BOX", {1, [](Args a) { return box(a[0]); }}},
      {"BOXP", {1, [](Args a) { return box_past(a[0]); }}},
      {"DIAM", {1, [](Args a) { return eventually(a[0]); }}},
      {"DIAMP", {1, [](Args a) { return once(a[0]); }}},
      {"KPLUS", {1, [](Args a) { return k_plus(a[0]); }}},
      {"KMINUS", {1, [](Args a) { return k_minus(a[0]); }}},
      {"GAMMA+", {1, [](Args a) { return gamma_plus(a[0]); }}},
      {"GAMMA-", {1, [](Args a) { return gamma_minus(a[0]); }}},
      {"USTAR", {2, [](Args a) { return until_star(a[0], a[1]); }}},
      {"SSTAR", {2, [](Args a) { return since_star(a[0], a[1]); }}},
      {"UGAP", {2, [](Args a) { return until_gap(a[0], a[1]); }}},
      {"SGAP", {2, [](Args a) { return since_gap(a[0], a[1]); }}},
  };
  return table;
}

inline TlFormula expand(const std::string& name,
                        std::span<const TlFormula> operands) {
  const auto& table = expansion_table();
  auto it = table.find(name);
  if (it == table.end()) throw UnknownModality("unknown modality " + name);
  if (operands.size() != it->second.arity)
    throw UnknownModality(name + " expects " +
                          std::to_string(it->second.arity) + " operand(s)");
  return it->second.build(operands);
}

}  // namespace stavi::tl
