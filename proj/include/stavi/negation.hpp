#pragma once

// Negation of simple formulas. The core is the negation of a partition
// expression on an open interval (z0,z1), built by induction on the number
// of slots with a case split on where the first failure of d1 and the last
// failure of dn sit. Helper predicates that are TL definable (K+, gamma+,
// Until-gap, the to-gap F formulas) appear as point predicates.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stavi/expansion.hpp"
#include "stavi/fseq.hpp"
#include "stavi/partition.hpp"
#include "stavi/pe.hpp"
#include "stavi/tl.hpp"

namespace stavi {

struct CaseSplit {
  std::string name;
  SimpleFormula cond;
  SimpleFormula form;
};

// Small assertions about open intervals and their negations.
namespace neg {

using S = SimpleFormula;

inline S not_less(const std::string& a, const std::string& b) {
  return S::lor(simple::var_less(b, a), simple::var_eq(a, b));
}

inline S not_successor(const std::string& a, const std::string& b) {
  return S::lor({simple::var_less(b, a), simple::var_eq(a, b), simple::nonempty(a, b)});
}

// (a,b) has no point, including the case b <= a.
inline S empty_open(const std::string& a, const std::string& b) {
  return S::lor(not_less(a, b), simple::successor(a, b));
}

// (a,b) contains a point satisfying p.
// x1 < .. < xn in (a,b) with preds[i](x_i).
inline S chain(const std::vector<PointPredicate>& preds, const std::string& a,
               const std::string& b) {
  const std::size_t n = preds.size();
  for (auto p : preds)
    if (p.is_false()) return S::bottom();
  std::vector<S> alts;
  for (unsigned mask = 0; mask < (1u << (n + 1)); ++mask) {
    PartitionExpression pe;
    for (std::size_t i = 0; i <= n; ++i) {
      if (mask >> i & 1) pe.deltas.push_back(tl::top()), pe.singleton.push_back(false);
      if (i < n) pe.deltas.push_back(preds[i]), pe.singleton.push_back(true);
    }
    alts.push_back(simple::open(pe, a, b));
  }
  return S::lor(alts);
}

inline S contains(PointPredicate p, const std::string& a, const std::string& b) {
  return chain({p}, a, b);
}

inline S not_contains(PointPredicate p, const std::string& a, const std::string& b) {
  return S::lor(empty_open(a, b), simple::open(PartitionExpression::one(tl::lnot(p)), a, b));
}

// (a,b) has exactly k points.
inline S exactly(std::size_t k, const std::string& a, const std::string& b) {
  if (k == 0) return simple::successor(a, b);
  return simple::open(PartitionExpression(std::vector<PointPredicate>(k, tl::top()),
                                          std::vector<bool>(k, true)),
                      a, b);
}

inline S at_most(std::size_t k, const std::string& a, const std::string& b) {
  std::vector<S> alts;
  for (std::size_t j = 0; j <= k; ++j) alts.push_back(exactly(j, a, b));
  return S::lor(alts);
}

// No x1 < .. < xn in (a,b) with preds[i](x_i): (a,b) splits into
// consecutive convex pieces J_1..J_n, possibly empty, where not p_k holds on
// J_k except possibly at its maximum, and not p_n holds on all of J_n.
inline S no_chain(const std::vector<PointPredicate>& preds, const std::string& a,
                  const std::string& b) {
  const std::size_t n = preds.size();
  std::vector<PartitionExpression> cur{PartitionExpression{}};
  for (std::size_t k = 0; k < n; ++k) {
    const PointPredicate np = tl::lnot(preds[k]);
    std::vector<PartitionExpression> opts{PartitionExpression{}, PartitionExpression::one(np)};
    if (k + 1 < n) {
      opts.push_back(PartitionExpression({np, tl::top()}, {false, true}));
      opts.push_back(PartitionExpression::one(tl::top(), true));
    }
    std::vector<PartitionExpression> next;
    for (const auto& c : cur)
      for (const auto& o : opts) {
        if (o.size() && o.deltas[0].is_false()) continue;
        PartitionExpression r = c;
        r.deltas.insert(r.deltas.end(), o.deltas.begin(), o.deltas.end());
        r.singleton.insert(r.singleton.end(), o.singleton.begin(), o.singleton.end());
        next.push_back(std::move(r));
      }
    cur.swap(next);
  }
  std::vector<S> alts{empty_open(a, b)};
  for (const auto& pe : cur)
    if (pe.size()) alts.push_back(simple::open(pe, a, b));
  return S::lor(alts);
}

}  // namespace neg

// ---------------------------------------------------------------------------
// The engine. Results are built once per expression over placeholder
// variables and renamed at use. Placeholder names start with '%', which the
// FO parser never produces.


namespace detail::negation {

using S = SimpleFormula;
using PE = PartitionExpression;

inline const std::string A = "%0", B = "%1", Z = "%2";

struct Memo {
  std::map<PE, S> open;
  std::map<std::vector<TlFormula>, S> chain;
  std::map<std::pair<PE, int>, S> prefix;
};

inline Memo& memo() {
  static Memo m;
  return m;
}

inline S to(const S& f, const std::string& a, const std::string& b) {
  if (a == A && b == B) return f;
  return rename(f, {{A, a}, {B, b}});
}

// f speaks about (A,B) in the reversed order; read it in the original one.
inline S mirror_swap(const S& f) { return mirror(rename(f, {{A, B}, {B, A}})); }

inline S at(PointPredicate d, const std::string& v) { return simple::at(d, v); }
inline S one(PointPredicate d, const std::string& a, const std::string& b) {
  return simple::open(PE::one(d), a, b);
}
inline S between(const std::string& a, const std::string& z, const std::string& b) {
  return S::land(simple::var_less(a, z), simple::var_less(z, b));
}

inline S open_raw(const PE& pe);
inline S chain_raw(const std::vector<TlFormula>& preds);
inline S prefix_raw(const PE& pe, Side side);
inline std::vector<CaseSplit> open_cases(const PE& pe);
inline std::vector<CaseSplit> chain_cases(const std::vector<TlFormula>& preds);

// Negation of slots lo..hi (1-based) on (a,b); no slots means "b is the
// successor of a".
inline S neg_slice(const PE& pe, std::size_t lo, std::size_t hi, const std::string& a,
                   const std::string& b) {
  if (lo > hi) return neg::not_successor(a, b);
  return to(open_raw(slice(pe, lo, hi)), a, b);
}

inline S neg_chain(const std::vector<TlFormula>& preds, std::size_t lo, std::size_t hi,
                   const std::string& a, const std::string& b) {
  return to(chain_raw(std::vector<TlFormula>(preds.begin() + (lo - 1), preds.begin() + hi)), a, b);
}

// Case 1 form: when d1 holds along (a,b), the negation of pe on (a,b).
inline S first_uniform(const PE& pe, const std::string& a, const std::string& b) {
  return to(prefix_raw(pe, Side::Right), a, b);
}
inline S last_uniform(const PE& pe, const std::string& a, const std::string& b) {
  return to(prefix_raw(pe, Side::Left), a, b);
}

// Negation of slots 1..k on (A,Z) when d1 holds along (A,Z), and of
// slots k..n on (Z,B) when dn holds along (Z,B).
inline S neg_head(const PE& pe, std::size_t k) {
  if (k == 1) return neg::empty_open(A, Z);
  return first_uniform(slice(pe, 1, k), A, Z);
}
inline S neg_tail(const PE& pe, std::size_t k) {
  if (k == pe.size()) return neg::empty_open(Z, B);
  return last_uniform(slice(pe, k, pe.size()), Z, B);
}

// Negation of A_i for the inner slots, over (A, Z, B). With head (tail)
// set, d1 (dn) is known to hold along (A,Z) ((Z,B)).
inline S neg_a(const PE& pe, std::size_t i, bool head, bool tail) {
  const std::size_t n = pe.size();
  auto left = [&](std::size_t k) { return head ? neg_head(pe, k) : neg_slice(pe, 1, k, A, Z); };
  auto right = [&](std::size_t k) { return tail ? neg_tail(pe, k) : neg_slice(pe, k, n, Z, B); };
  const S lt = left(i - 1);
  const S gt = right(i + 1);
  const S here = at(tl::lnot(pe.deltas[i - 1]), Z);
  if (pe.singleton[i - 1]) return S::lor({lt, here, gt});
  return S::lor({S::land(lt, left(i)), here, S::land(gt, right(i))});
}

// exists z (u and body) when u has at most one witness z: the quantifier
// then distributes over both connectives and is applied leaf by leaf.
inline S exists_unique(const S& u, const S& body, const std::string& z) {
  const S any = exists_simple(u, z);
  std::map<const void*, S> done;
  std::function<S(const S&)> go = [&](const S& f) -> S {
    if (!std::binary_search(f.vars().begin(), f.vars().end(), z)) return S::land(f, any);
    if (auto it = done.find(f.identity()); it != done.end()) return it->second;
    S r;
    switch (f.kind()) {
      case SimpleKind::And:
      case SimpleKind::Or: {
        std::vector<S> cs;
        for (const auto& c : f.children()) cs.push_back(go(c));
        r = f.kind() == SimpleKind::And ? S::land(cs) : S::lor(cs);
        break;
      }
      default: r = exists_simple(S::land(u, f), z);
    }
    done.emplace(f.identity(), r);
    return r;
  };
  return go(body);
}

inline S neg_inner(const PE& pe, bool head = false, bool tail = false) {
  std::vector<S> parts;
  for (std::size_t i = 2; i + 1 <= pe.size(); ++i) parts.push_back(neg_a(pe, i, head, tail));
  return S::land(parts);
}

inline CaseSplit open_case3(const PE& pe) {
  using namespace tl;
  const std::size_t n = pe.size();
  const TlFormula d1 = pe.deltas.front(), dn = pe.deltas.back();
  const S inf = S::land({between(A, Z, B), S::lor(simple::successor(A, Z), one(d1, A, Z)),
                         S::lor(at(lnot(d1), Z), at(k_plus(lnot(d1)), Z))});
  // d1 holds along (A,Z)
  const S neg1 = S::lor(at(lnot(d1), Z), neg_slice(pe, 2, n, Z, B));
  const S negn = S::lor(
      {S::land(neg::not_successor(Z, B), neg_slice(pe, n, n, Z, B)), at(lnot(dn), Z),
       S::land(neg_head(pe, n - 1),
               S::lor(simple::successor(A, Z), S::land(one(d1, A, Z), first_uniform(pe, A, Z))))});
  return {"3", exists_simple(inf, Z),
          exists_unique(inf, S::land({neg1, neg_inner(pe, true, false), negn}), Z)};
}

inline CaseSplit open_case6(const PE& pe) {
  using namespace tl;
  const std::size_t n = pe.size();
  const TlFormula d1 = pe.deltas.front(), dn = pe.deltas.back();
  const TlFormula f = until(d1, land(d1, until_gap(d1, dn)));
  const S cond = S::land({at(gamma_plus(d1), A), neg::contains(lnot(d1), A, B),
                          at(gamma_minus(dn), B), neg::contains(lnot(dn), A, B),
                          simple::open(PE({d1, dn}, {false, false}), A, B), at(lnot(f), A)});
  // F[i]: slots 1..i on (A, c); H[j]: slots j..n on (c, B), c the common gap.
  std::vector<TlFormula> fs(n + 1, bottom()), hs(n + 2, bottom());
  for (std::size_t i = 1; i < n; ++i) {
    PE left({top()}, {true});
    for (std::size_t j = 1; j <= i; ++j) {
      left.deltas.push_back(pe.deltas[j - 1]);
      left.singleton.push_back(pe.singleton[j - 1]);
    }
    fs[i] = build_F(left, TerminalMode::to_gap(d1))[0];
  }
  for (std::size_t j = 2; j <= n; ++j) {
    PE right({top()}, {true});
    for (std::size_t t = n; t >= j; --t) {
      right.deltas.push_back(mirror(pe.deltas[t - 1]));
      right.singleton.push_back(pe.singleton[t - 1]);
    }
    hs[j] = mirror(build_F(right, TerminalMode::to_gap(mirror(dn)))[0]);
  }
  std::vector<S> parts;
  for (std::size_t i = 1; i < n; ++i) {
    TlFormula rhs = lnot(hs[i + 1]);
    if (!pe.singleton[i - 1]) rhs = land(rhs, lnot(hs[i]));
    parts.push_back(S::lor(at(lnot(fs[i]), A), at(rhs, B)));
  }
  return {"6", cond, S::land(parts)};
}

inline std::vector<CaseSplit> open_cases(const PE& pe) {
  using namespace tl;
  const std::size_t n = pe.size();
  const TlFormula d1 = pe.deltas.front(), dn = pe.deltas.back();
  std::vector<CaseSplit> out;
  out.push_back({"1", one(d1, A, B), first_uniform(pe, A, B)});
  out.push_back({"1'", one(dn, A, B), last_uniform(pe, A, B)});
  out.push_back({"2", S::lor(at(k_plus(lnot(d1)), A), at(k_minus(lnot(dn)), B)), S::top()});
  out.push_back(open_case3(pe));
  CaseSplit c3m = open_case3(mirror(pe));
  out.push_back({"3'", mirror_swap(c3m.cond), mirror_swap(c3m.form)});

  const S gaps = S::land({at(gamma_plus(d1), A), neg::contains(lnot(d1), A, B),
                          at(gamma_minus(dn), B), neg::contains(lnot(dn), A, B)});
  const S in = S::land({gaps, one(d1, A, Z), one(dn, Z, B)});
  // Under in, d1 holds along (A,Z) and dn along (Z,B).
  const S neg1 = S::lor(at(lnot(d1), Z), S::land(neg_tail(pe, 2), last_uniform(pe, Z, B)));
  const S negn = S::lor(at(lnot(dn), Z), S::land(neg_head(pe, n - 1), first_uniform(pe, A, Z)));
  out.push_back({"4", exists_simple(in, Z),
                 exists_simple(S::land({in, neg1, neg_inner(pe, true, true), negn}), Z)});

  const S btw = S::land({between(A, Z, B), at(gamma_plus(d1), A), neg::contains(lnot(d1), A, Z),
                         at(gamma_minus(dn), B), neg::contains(lnot(dn), Z, B)});
  const S c5 = exists_simple(btw, Z);
  out.push_back({"5", c5, n == 2 ? c5 : exists_simple(S::land(btw, neg_inner(pe)), Z)});
  out.push_back(open_case6(pe));
  return out;
}

inline S open_raw(const PE& pe) {
  auto& m = memo().open;
  if (auto it = m.find(pe); it != m.end()) return it->second;
  const std::size_t n = pe.size();
  S r;
  bool dead = false;
  for (auto d : pe.deltas) dead = dead || prop::unsat(d);
  // adjacent singletons are a point and its successor
  for (std::size_t i = 0; i + 1 < n && !dead; ++i)
    if (pe.singleton[i] && pe.singleton[i + 1])
      dead = prop::unsat(tl::land(pe.deltas[i], tl::has_successor())) ||
             prop::unsat(tl::land(pe.deltas[i + 1], tl::since(tl::bottom(), tl::top())));
  if (dead) {
    r = S::top();
  } else if (pe.singleton[0]) {
    // The first slot is the successor of A.
    const S none = S::lor({at(tl::lnot(tl::has_successor()), A), neg::not_less(A, B),
                           simple::successor(A, B)});
    const S rest = S::land(simple::var_less(Z, B),
                           S::lor(at(tl::lnot(pe.deltas[0]), Z), neg_slice(pe, 2, n, Z, B)));
    r = S::lor(none, exists_unique(simple::successor(A, Z), rest, Z));
  } else if (pe.singleton[n - 1]) {
    r = mirror_swap(open_raw(mirror(pe)));
  } else if (n == 1) {
    r = S::lor(neg::empty_open(A, B), neg::contains(tl::lnot(pe.deltas[0]), A, B));
  } else if (prop::simplify(pe.deltas[0]).is_true()) {
    // Case 1 holds on every non-empty interval.
    r = S::lor(neg::empty_open(A, B), first_uniform(pe, A, B));
  } else if (prop::simplify(pe.deltas[n - 1]).is_true()) {
    r = S::lor(neg::empty_open(A, B), last_uniform(pe, A, B));
  } else {
    std::vector<S> alts;
    for (const auto& c : open_cases(pe)) alts.push_back(S::land(c.cond, c.form));
    r = S::lor(neg::empty_open(A, B), S::land(simple::nonempty(A, B), S::lor(alts)));
  }
  m.emplace(pe, r);
  return r;
}

inline CaseSplit chain_case3(const std::vector<TlFormula>& p) {
  using namespace tl;
  const std::size_t n = p.size();
  const S inf = S::land({between(A, Z, B), S::lor(simple::successor(A, Z), one(lnot(p[0]), A, Z)),
                         S::lor(at(p[0], Z), at(k_plus(p[0]), Z))});
  return {"3", exists_simple(inf, Z), exists_unique(inf, neg_chain(p, 2, n, Z, B), Z)};
}

inline std::vector<CaseSplit> chain_cases(const std::vector<TlFormula>& p) {
  using namespace tl;
  const std::size_t n = p.size();
  const TlFormula p1 = p.front(), pn = p.back();
  std::vector<CaseSplit> out;
  out.push_back({"1", S::lor(one(lnot(p1), A, B), one(lnot(pn), A, B)), S::top()});
  out.push_back({"2", at(k_plus(p1), A), neg_chain(p, 2, n, A, B)});
  out.push_back({"2'", at(k_minus(pn), B), neg_chain(p, 1, n - 1, A, B)});
  out.push_back(chain_case3(p));
  std::vector<TlFormula> rev;
  for (auto it = p.rbegin(); it != p.rend(); ++it) rev.push_back(mirror(*it));
  CaseSplit c3m = chain_case3(rev);
  out.push_back({"3'", mirror_swap(c3m.cond), mirror_swap(c3m.form)});
  out.push_back({"4",
                 S::land({at(gamma_plus(lnot(p1)), A), neg::contains(p1, A, B),
                          at(gamma_minus(lnot(pn)), B), neg::contains(pn, A, B),
                          simple::open(PE({lnot(p1), lnot(pn)}, {false, false}), A, B)}),
                 S::top()});
  const S btw = S::land({between(A, Z, B), at(gamma_plus(lnot(p1)), A), neg::contains(p1, A, Z),
                         at(gamma_minus(lnot(pn)), B), neg::contains(pn, Z, B)});
  std::vector<S> parts{btw};
  for (std::size_t k = 1; k < n; ++k)
    parts.push_back(S::lor(neg_chain(p, 1, k, A, Z), neg_chain(p, k + 1, n, Z, B)));
  for (std::size_t k = 2; k < n; ++k)
    parts.push_back(S::lor({neg_chain(p, 1, k - 1, A, Z), at(lnot(p[k - 1]), Z),
                            neg_chain(p, k + 1, n, Z, B)}));
  out.push_back({"5", exists_simple(btw, Z), exists_simple(S::land(parts), Z)});
  return out;
}

inline S chain_raw(const std::vector<TlFormula>& p) {
  auto& m = memo().chain;
  if (auto it = m.find(p); it != m.end()) return it->second;
  S r;
  if (p.size() == 1) {
    r = neg::not_contains(p[0], A, B);
  } else {
    std::vector<S> alts;
    for (const auto& c : chain_cases(p)) alts.push_back(S::land(c.cond, c.form));
    r = S::lor(neg::empty_open(A, B), S::land(simple::nonempty(A, B), S::lor(alts)));
  }
  m.emplace(p, r);
  return r;
}

inline S prefix_raw(const PE& pe, Side side) {
  auto& m = memo().prefix;
  const auto key = std::make_pair(pe, static_cast<int>(side));
  if (auto it = m.find(key); it != m.end()) return it->second;
  S r;
  if (side == Side::Right) {
    r = mirror_swap(prefix_raw(mirror(pe), Side::Left));
  } else {
    // Part on (A, z] is Part<True, d1..dn>{1, ...} on [A, z].
    PE full({tl::top()}, {true});
    full.deltas.insert(full.deltas.end(), pe.deltas.begin(), pe.deltas.end());
    full.singleton.insert(full.singleton.end(), pe.singleton.begin(), pe.singleton.end());
    const auto fs = build_F(full, TerminalMode::bounded());
    r = S::lor(at(tl::lnot(fs[0]), A),
               neg::no_chain(std::vector<TlFormula>(fs.begin() + 1, fs.end()), A, B));
  }
  m.emplace(key, r);
  return r;
}

inline void check_open_cases(const PE& pe) {
  if (pe.size() < 2 || pe.singleton.front() || pe.singleton.back())
    throw std::invalid_argument("case split needs at least two slots and non-singleton ends");
}

}  // namespace detail::negation

// not Part(pe) on the open interval (z0,z1); true when the interval is empty.
inline SimpleFormula neg_part_open(const PartitionExpression& pe, const std::string& z0,
                                  const std::string& z1) {
  return detail::negation::to(detail::negation::open_raw(pe), z0, z1);
}

// The case split used for pe with at least two slots whose end slots are
// not singletons. Each case is meant for non-empty (z0,z1).
inline std::vector<CaseSplit> neg_part_open_cases(const PartitionExpression& pe,
                                                  const std::string& z0, const std::string& z1) {
  detail::negation::check_open_cases(pe);
  auto cs = detail::negation::open_cases(pe);
  for (auto& c : cs) {
    c.cond = detail::negation::to(c.cond, z0, z1);
    c.form = detail::negation::to(c.form, z0, z1);
  }
  return cs;
}

// not exists x1 < .. < xn in (z0,z1) with preds[i](x_i).
inline SimpleFormula neg_exists_chain(const std::vector<PointPredicate>& preds,
                                      const std::string& z0, const std::string& z1) {
  if (preds.empty()) throw std::invalid_argument("neg_exists_chain needs at least one predicate");
  return detail::negation::to(detail::negation::chain_raw(preds), z0, z1);
}

inline std::vector<CaseSplit> neg_exists_chain_cases(const std::vector<PointPredicate>& preds,
                                                     const std::string& z0, const std::string& z1) {
  if (preds.size() < 2) throw std::invalid_argument("case split needs at least two predicates");
  auto cs = detail::negation::chain_cases(preds);
  for (auto& c : cs) {
    c.cond = detail::negation::to(c.cond, z0, z1);
    c.form = detail::negation::to(c.form, z0, z1);
  }
  return cs;
}

// Left: not exists z in (z0,z1) with pe on (z0,z]. Right: not exists z in
// (z0,z1) with pe on [z,z1).
inline SimpleFormula neg_exists_prefix(const PartitionExpression& pe, const std::string& z0,
                                       const std::string& z1, Side side) {
  return detail::negation::to(detail::negation::prefix_raw(pe, side), z0, z1);
}

namespace neg {

inline S not_exactly(std::size_t k, const std::string& a, const std::string& b) {
  if (k == 0) return not_successor(a, b);
  return neg_part_open(PartitionExpression(std::vector<PointPredicate>(k, tl::top()),
                                           std::vector<bool>(k, true)),
                       a, b);
}

inline S not_at_most(std::size_t k, const std::string& a, const std::string& b) {
  std::vector<S> parts;
  for (std::size_t j = 0; j <= k; ++j) parts.push_back(not_exactly(j, a, b));
  return S::land(parts);
}

}  // namespace neg

// ---------------------------------------------------------------------------
// Negation of simple formulas.

inline SimpleFormula negate_basic(const Basic& b) {
  using S = SimpleFormula;
  switch (b.kind) {
    case BasicKind::VarEq:
      if (b.a == b.b) return S::bottom();
      return S::lor(simple::var_less(b.a, b.b), simple::var_less(b.b, b.a));
    case BasicKind::VarLess: return neg::not_less(b.a, b.b);
    default: break;
  }
  const auto vs = b.vars();
  if (vs.empty()) return simple::sentence(tl::lnot(basic_to_tl(b)));
  if (vs.size() == 1) return simple::at(tl::lnot(basic_to_tl(b)), vs[0]);
  // pe on [y,z] with y, z distinct variables
  const PartitionExpression& pe = b.pe;
  const std::size_t k = pe.size();
  const TlFormula single = k == 1 ? pe.deltas[0] : tl::bottom();
  std::vector<S> stretch{simple::at(tl::lnot(pe.deltas.front()), b.a),
                         simple::at(tl::lnot(pe.deltas.back()), b.b)};
  const Constraint c = detail::closed_stretch(pe);
  std::vector<S> all;
  if (c.allow_empty) all.push_back(neg::not_successor(b.a, b.b));
  for (const auto& alt : c.alts) all.push_back(neg_part_open(alt, b.a, b.b));
  stretch.push_back(S::land(all));
  return S::lor({simple::var_less(b.b, b.a),
                 S::land(simple::var_eq(b.a, b.b), simple::at(tl::lnot(single), b.a)),
                 S::land(simple::var_less(b.a, b.b), S::lor(stretch))});
}

namespace detail::negation {

// pe on [a,b] of the form <T!, S?, d1!, S?, .., dk!, S?, T!>, where each S?
// is an S stretch or nothing.
struct ChainShape {
  std::vector<TlFormula> ds;
  unsigned mask = 0;           // stretches present
  TlFormula stretch = tl::top();
};

inline std::optional<ChainShape> chain_shape(const Basic& b) {
  const PE& pe = b.pe;
  const std::size_t n = pe.size();
  if (b.kind != BasicKind::OnClosed || b.a == b.b || n < 3 || !pe.singleton.front() ||
      !pe.singleton.back() || !pe.deltas.front().is_true() || !pe.deltas.back().is_true())
    return std::nullopt;
  ChainShape c;
  bool stretch = false;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (pe.singleton[i]) {
      c.ds.push_back(pe.deltas[i]);
      stretch = false;
    } else {
      if (stretch || c.ds.size() > 8 || (c.mask && pe.deltas[i] != c.stretch)) return std::nullopt;
      c.mask |= 1u << c.ds.size();
      c.stretch = pe.deltas[i];
      stretch = true;
    }
  }
  if (c.ds.empty()) return std::nullopt;
  return c;
}

// Negation of the union of all shapes of one chain with stretch label s, or
// nothing when no direct form is known.
inline std::optional<S> neg_chain_shapes(const std::vector<TlFormula>& ds, TlFormula s,
                                         const std::string& a, const std::string& b) {
  if (s.is_true()) return neg::no_chain(ds, a, b);
  if (ds.size() != 1) return std::nullopt;
  // some d point with s everywhere else: either no non-s point and some d
  // point, or a single non-s point which is a d point
  const TlFormula d = ds[0], ns = tl::lnot(s);
  return S::lor({neg::not_less(a, b),
                 S::land(neg::contains(ns, a, b),
                         S::lor(neg::chain({ns, ns}, a, b),
                                neg::contains(tl::land(ns, tl::lnot(d)), a, b))),
                 S::land(neg::not_contains(d, a, b), neg::not_contains(ns, a, b))});
}

}  // namespace detail::negation

inline SimpleFormula negate_simple(const SimpleFormula& f) {
  switch (f.kind()) {
    case SimpleKind::True: return SimpleFormula::bottom();
    case SimpleKind::False: return SimpleFormula::top();
    case SimpleKind::Leaf: return negate_basic(f.basic());
    case SimpleKind::And: {
      std::vector<SimpleFormula> cs;
      for (const auto& c : f.children()) cs.push_back(negate_simple(c));
      return SimpleFormula::lor(cs);
    }
    case SimpleKind::Or: {
      // All 2^(k+1) shapes of one chain together say that d1..dk occur in
      // order strictly between a and b, with s on the rest of (a,b).
      using Key = std::tuple<std::string, std::string, std::vector<TlFormula>>;
      std::map<Key, std::vector<std::size_t>> groups;
      const auto& ch = f.children();
      std::vector<std::optional<detail::negation::ChainShape>> shapes(ch.size());
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (ch[i].kind() != SimpleKind::Leaf) continue;
        shapes[i] = detail::negation::chain_shape(ch[i].basic());
        if (shapes[i]) groups[{ch[i].basic().a, ch[i].basic().b, shapes[i]->ds}].push_back(i);
      }
      std::vector<bool> done(ch.size(), false);
      std::vector<SimpleFormula> cs;
      for (const auto& [key, idx] : groups) {
        const auto& [a, b, ds] = key;
        std::map<TlFormula, std::set<unsigned>> masks;
        for (auto i : idx)
          if (shapes[i]->mask) masks[shapes[i]->stretch].insert(shapes[i]->mask);
        std::vector<std::size_t> bare;
        for (auto i : idx)
          if (!shapes[i]->mask) bare.push_back(i);
        if (bare.empty()) continue;
        for (const auto& [st, ms] : masks) {
          if (ms.size() + 1 != (std::size_t{1} << (ds.size() + 1))) continue;
          auto g = detail::negation::neg_chain_shapes(ds, st, a, b);
          if (!g) continue;
          cs.push_back(*g);
          for (auto i : idx)
            if (!shapes[i]->mask || shapes[i]->stretch == st) done[i] = true;
        }
      }
      // b is the successor of a, or (a,b) is a non-empty S stretch: the
      // pair says that a < b and S holds along (a,b).
      auto closed = [&](std::size_t i, std::size_t size) {
        if (ch[i].kind() != SimpleKind::Leaf) return false;
        const Basic& b = ch[i].basic();
        if (b.kind != BasicKind::OnClosed || b.a == b.b || b.pe.size() != size) return false;
        const std::vector<bool> want = size == 2 ? std::vector<bool>{true, true}
                                                 : std::vector<bool>{true, false, true};
        return b.pe.singleton == want && b.pe.deltas.front().is_true() &&
               b.pe.deltas.back().is_true();
      };
      std::set<std::pair<std::string, std::string>> succ, used;
      for (std::size_t i = 0; i < ch.size(); ++i)
        if (closed(i, 2)) succ.emplace(ch[i].basic().a, ch[i].basic().b);
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (done[i] || !closed(i, 3)) continue;
        const Basic& b = ch[i].basic();
        if (!succ.count({b.a, b.b})) continue;
        done[i] = true;
        used.emplace(b.a, b.b);
        cs.push_back(SimpleFormula::lor(neg::not_less(b.a, b.b),
                                        neg::contains(tl::lnot(b.pe.deltas[1]), b.a, b.b)));
      }
      for (std::size_t i = 0; i < ch.size(); ++i)
        if (closed(i, 2) && used.count({ch[i].basic().a, ch[i].basic().b})) done[i] = true;
      for (std::size_t i = 0; i < ch.size(); ++i)
        if (!done[i]) cs.push_back(negate_simple(ch[i]));
      return SimpleFormula::land(cs);
    }
  }
  return f;
}

}  // namespace stavi
