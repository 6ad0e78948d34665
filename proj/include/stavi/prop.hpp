#pragma once

// Propositional reasoning on TL formulas: temporal subformulas and atoms are
// treated as opaque variables, and formulas with few of them are replaced by
// a canonical representative of their truth table. Used to prune
// contradictory slots and subsumed alternatives; formulas with too many
// opaque parts are left unchanged.

#include <algorithm>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stavi/tl.hpp"

namespace stavi::prop {

inline constexpr std::size_t kMaxLeaves = 12;

inline bool is_leaf(TlFormula f) {
  switch (f.kind()) {
    case TlKind::True:
    case TlKind::False:
    case TlKind::Not:
    case TlKind::And:
    case TlKind::Or: return false;
    default: return true;
  }
}

namespace detail {

inline bool collect(TlFormula f, std::vector<std::uint32_t>& leaves) {
  if (is_leaf(f)) {
    if (std::find(leaves.begin(), leaves.end(), f.id()) == leaves.end()) {
      if (leaves.size() == kMaxLeaves) return false;
      leaves.push_back(f.id());
    }
    return true;
  }
  switch (f.kind()) {
    case TlKind::Not: return collect(f.lhs(), leaves);
    case TlKind::And:
    case TlKind::Or: return collect(f.lhs(), leaves) && collect(f.rhs(), leaves);
    default: return true;
  }
}

using Bits = std::vector<std::uint64_t>;

inline Bits leaf_bits(std::size_t i, std::size_t k) {
  const std::size_t n = std::size_t{1} << k;
  Bits b((n + 63) / 64, 0);
  for (std::size_t j = 0; j < n; ++j)
    if (j >> i & 1) b[j / 64] |= std::uint64_t{1} << (j % 64);
  return b;
}

inline Bits eval(TlFormula f, const std::vector<std::uint32_t>& leaves, std::size_t k,
                 std::unordered_map<std::uint32_t, Bits>& memo) {
  if (auto it = memo.find(f.id()); it != memo.end()) return it->second;
  const std::size_t n = std::size_t{1} << k;
  const std::size_t words = (n + 63) / 64;
  const std::uint64_t tail = n % 64 ? (std::uint64_t{1} << (n % 64)) - 1 : ~std::uint64_t{0};
  Bits r(words, 0);
  switch (f.kind()) {
    case TlKind::False: break;
    case TlKind::True:
      std::fill(r.begin(), r.end(), ~std::uint64_t{0});
      r.back() &= tail;
      break;
    case TlKind::Not:
      r = eval(f.lhs(), leaves, k, memo);
      for (auto& w : r) w = ~w;
      r.back() &= tail;
      break;
    case TlKind::And:
    case TlKind::Or: {
      r = eval(f.lhs(), leaves, k, memo);
      Bits s = eval(f.rhs(), leaves, k, memo);
      for (std::size_t w = 0; w < words; ++w) r[w] = f.kind() == TlKind::And ? r[w] & s[w] : r[w] | s[w];
      break;
    }
    default: {
      auto pos = std::find(leaves.begin(), leaves.end(), f.id()) - leaves.begin();
      r = leaf_bits(static_cast<std::size_t>(pos), k);
    }
  }
  memo.emplace(f.id(), r);
  return r;
}

struct Cache {
  std::unordered_map<std::uint32_t, TlFormula> simplified;
  std::map<std::pair<std::vector<std::uint32_t>, Bits>, TlFormula> canonical;
};

inline Cache& cache() {
  static Cache c;
  return c;
}

}  // namespace detail

// An equivalent formula: False if unsatisfiable, True if valid, otherwise
// the first formula seen with the same truth table on its relevant leaves.
inline TlFormula simplify(TlFormula f) {
  if (is_leaf(f) || f.is_true() || f.is_false()) return f;
  auto& c = detail::cache();
  if (auto it = c.simplified.find(f.id()); it != c.simplified.end()) return it->second;
  std::vector<std::uint32_t> leaves;
  TlFormula out = f;
  if (detail::collect(f, leaves)) {
    std::sort(leaves.begin(), leaves.end());
    const std::size_t k = leaves.size();
    std::unordered_map<std::uint32_t, detail::Bits> memo;
    const detail::Bits bits = detail::eval(f, leaves, k, memo);
    const std::size_t n = std::size_t{1} << k;
    auto bit = [&](std::size_t j) { return (bits[j / 64] >> (j % 64)) & 1; };
    // drop leaves the table does not depend on
    std::vector<std::size_t> relevant;
    for (std::size_t i = 0; i < k; ++i) {
      bool dep = false;
      for (std::size_t j = 0; j < n && !dep; ++j)
        if (!(j >> i & 1) && bit(j) != bit(j | (std::size_t{1} << i))) dep = true;
      if (dep) relevant.push_back(i);
    }
    const std::size_t rk = relevant.size();
    const std::size_t rn = std::size_t{1} << rk;
    detail::Bits proj((rn + 63) / 64, 0);
    bool any = false, all = true;
    for (std::size_t j = 0; j < rn; ++j) {
      std::size_t full = 0;
      for (std::size_t i = 0; i < rk; ++i)
        if (j >> i & 1) full |= std::size_t{1} << relevant[i];
      if (bit(full)) {
        proj[j / 64] |= std::uint64_t{1} << (j % 64);
        any = true;
      } else {
        all = false;
      }
    }
    if (!any) {
      out = tl::bottom();
    } else if (all) {
      out = tl::top();
    } else {
      std::vector<std::uint32_t> key;
      for (auto i : relevant) key.push_back(leaves[i]);
      out = c.canonical.emplace(std::make_pair(std::move(key), std::move(proj)), f).first->second;
    }
  }
  c.simplified.emplace(f.id(), out);
  return out;
}

inline bool unsat(TlFormula f) { return simplify(f).is_false(); }

// a implies b propositionally. With many opaque parts a valid implication
// may go unnoticed.
inline bool implies(TlFormula a, TlFormula b) {
  if (a == b || b.is_true() || a.is_false()) return true;
  static std::unordered_map<std::uint64_t, bool> memo;
  const std::uint64_t key = (std::uint64_t{a.id()} << 32) | b.id();
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const bool r = unsat(tl::land(a, tl::lnot(b)));
  memo.emplace(key, r);
  return r;
}

inline TlFormula land(TlFormula a, TlFormula b) { return simplify(tl::land(a, b)); }
inline TlFormula lor(TlFormula a, TlFormula b) { return simplify(tl::lor(a, b)); }

}  // namespace stavi::prop
