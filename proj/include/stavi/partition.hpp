#pragma once

// Basic, simple and normal partition formulas and their algebra:
// conjunction of partition expressions, normalization, and elimination of
// an existential quantifier.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stavi/expansion.hpp"
#include "stavi/fseq.hpp"
#include "stavi/model.hpp"
#include "stavi/pe.hpp"
#include "stavi/prop.hpp"
#include "stavi/semantics.hpp"
#include "stavi/tl.hpp"

namespace stavi {

// ---------------------------------------------------------------------------
// Basic formulas.

enum class BasicKind { VarEq, VarLess, OnClosed, OnRightRay, OnLeftRay, OnLine };

// VarEq(a,b): a = b.  VarLess(a,b): a < b.  OnClosed: pe on [a,b].
// OnRightRay: pe on [a,oo).  OnLeftRay: pe on (-oo,a].  OnLine: pe on the
// whole order.
struct Basic {
  BasicKind kind = BasicKind::VarEq;
  std::string a, b;
  PartitionExpression pe;

  std::vector<std::string> vars() const {
    switch (kind) {
      case BasicKind::VarEq:
      case BasicKind::VarLess:
      case BasicKind::OnClosed:
        if (a == b) return {a};
        return a < b ? std::vector<std::string>{a, b} : std::vector<std::string>{b, a};
      case BasicKind::OnRightRay:
      case BasicKind::OnLeftRay:
        return {a};
      case BasicKind::OnLine:
        return {};
    }
    return {};
  }

  bool operator==(const Basic&) const = default;
};

// ---------------------------------------------------------------------------
// Simple formulas: positive combinations of basics.

enum class SimpleKind { True, False, Leaf, And, Or };

class SimpleFormula {
  struct Node {
    SimpleKind kind;
    Basic basic;
    std::vector<SimpleFormula> children;
    std::vector<std::string> vars;
  };

 public:
  SimpleFormula() : SimpleFormula(top()) {}

  static SimpleFormula top() {
    static const SimpleFormula t(Node{SimpleKind::True, {}, {}, {}});
    return t;
  }
  static SimpleFormula bottom() {
    static const SimpleFormula f(Node{SimpleKind::False, {}, {}, {}});
    return f;
  }
  static SimpleFormula leaf(Basic b) {
    auto vs = b.vars();
    return SimpleFormula(Node{SimpleKind::Leaf, std::move(b), {}, std::move(vs)});
  }
  static SimpleFormula land(const std::vector<SimpleFormula>& fs) { return combine(SimpleKind::And, fs); }
  static SimpleFormula lor(const std::vector<SimpleFormula>& fs) { return combine(SimpleKind::Or, fs); }
  static SimpleFormula land(SimpleFormula x, SimpleFormula y) { return land({x, y}); }
  static SimpleFormula lor(SimpleFormula x, SimpleFormula y) { return lor({x, y}); }

  SimpleKind kind() const { return node_->kind; }
  bool is_true() const { return kind() == SimpleKind::True; }
  bool is_false() const { return kind() == SimpleKind::False; }
  const Basic& basic() const { return node_->basic; }
  const std::vector<SimpleFormula>& children() const { return node_->children; }
  const std::vector<std::string>& vars() const { return node_->vars; }
  const void* identity() const { return node_.get(); }

  bool operator==(const SimpleFormula& o) const {
    if (node_ == o.node_) return true;
    if (kind() != o.kind()) return false;
    if (kind() == SimpleKind::Leaf) return basic() == o.basic();
    return children() == o.children();
  }

 private:
  explicit SimpleFormula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  static SimpleFormula combine(SimpleKind k, const std::vector<SimpleFormula>& fs) {
    const SimpleKind unit = k == SimpleKind::And ? SimpleKind::True : SimpleKind::False;
    const SimpleKind zero = k == SimpleKind::And ? SimpleKind::False : SimpleKind::True;
    std::vector<SimpleFormula> flat;
    std::set<const void*> seen;
    std::function<void(const SimpleFormula&)> add = [&](const SimpleFormula& f) {
      if (f.kind() == k) {
        for (const auto& c : f.children()) add(c);
        return;
      }
      if (f.kind() == unit) return;
      if (seen.insert(f.identity()).second) flat.push_back(f);
    };
    for (const auto& f : fs) {
      if (f.kind() == zero) return zero == SimpleKind::True ? top() : bottom();
      add(f);
    }
    if (flat.empty()) return unit == SimpleKind::True ? top() : bottom();
    if (flat.size() == 1) return flat[0];
    std::vector<std::string> vs;
    for (const auto& f : flat) vs.insert(vs.end(), f.vars().begin(), f.vars().end());
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return SimpleFormula(Node{k, {}, std::move(flat), std::move(vs)});
  }

  std::shared_ptr<const Node> node_;
};

// Constructors for basics and the open / half-open sugar, which pads the
// expression with singleton True slots for the endpoints.
namespace simple {

using S = SimpleFormula;

inline S var_eq(const std::string& a, const std::string& b) {
  if (a == b) return S::top();
  return S::leaf({BasicKind::VarEq, std::min(a, b), std::max(a, b), {}});
}
inline S var_less(const std::string& a, const std::string& b) {
  if (a == b) return S::bottom();
  return S::leaf({BasicKind::VarLess, a, b, {}});
}
inline S closed(const PartitionExpression& pe, const std::string& a, const std::string& b) {
  if (a == b && pe.size() > 1) return S::bottom();
  for (const auto& d : pe.deltas)
    if (d.is_false()) return S::bottom();
  return S::leaf({BasicKind::OnClosed, a, b, pe});
}
inline S right_ray(const PartitionExpression& pe, const std::string& a) {
  return S::leaf({BasicKind::OnRightRay, a, {}, pe});
}
inline S left_ray(const PartitionExpression& pe, const std::string& a) {
  return S::leaf({BasicKind::OnLeftRay, a, {}, pe});
}
inline S line(const PartitionExpression& pe) { return S::leaf({BasicKind::OnLine, {}, {}, pe}); }

inline PartitionExpression pad(const PartitionExpression& pe, bool left, bool right) {
  PartitionExpression out;
  if (left) {
    out.deltas.push_back(tl::top());
    out.singleton.push_back(true);
  }
  out.deltas.insert(out.deltas.end(), pe.deltas.begin(), pe.deltas.end());
  out.singleton.insert(out.singleton.end(), pe.singleton.begin(), pe.singleton.end());
  if (right) {
    out.deltas.push_back(tl::top());
    out.singleton.push_back(true);
  }
  return out;
}

// pe on (a,b), (a,b], [a,b).
inline S open(const PartitionExpression& pe, const std::string& a, const std::string& b) {
  return closed(pad(pe, true, true), a, b);
}
inline S left_open(const PartitionExpression& pe, const std::string& a, const std::string& b) {
  return closed(pad(pe, true, false), a, b);
}
inline S right_open(const PartitionExpression& pe, const std::string& a, const std::string& b) {
  return closed(pad(pe, false, true), a, b);
}

// d holds at a.
inline S at(PointPredicate d, const std::string& a) {
  if (d.is_true()) return S::top();
  if (d.is_false()) return S::bottom();
  return closed(PartitionExpression::one(d, true), a, a);
}

// b is the immediate successor of a.
inline S successor(const std::string& a, const std::string& b) {
  return closed(PartitionExpression({tl::top(), tl::top()}, {true, true}), a, b);
}

// (a,b) is a non-empty interval.
inline S nonempty(const std::string& a, const std::string& b) {
  return open(PartitionExpression::one(tl::top()), a, b);
}

// A formula with the same value at every point, read as a sentence.
inline S sentence(TlFormula uniform) {
  if (uniform.is_true()) return S::top();
  if (uniform.is_false()) return S::bottom();
  return line(PartitionExpression::one(uniform));
}

}  // namespace simple

inline Basic mirror(const Basic& b) {
  switch (b.kind) {
    case BasicKind::VarEq: return b;
    case BasicKind::VarLess: return {BasicKind::VarLess, b.b, b.a, {}};
    case BasicKind::OnClosed: return {BasicKind::OnClosed, b.b, b.a, mirror(b.pe)};
    case BasicKind::OnRightRay: return {BasicKind::OnLeftRay, b.a, {}, mirror(b.pe)};
    case BasicKind::OnLeftRay: return {BasicKind::OnRightRay, b.a, {}, mirror(b.pe)};
    case BasicKind::OnLine: return {BasicKind::OnLine, {}, {}, mirror(b.pe)};
  }
  return b;
}

inline SimpleFormula mirror(const SimpleFormula& f) {
  switch (f.kind()) {
    case SimpleKind::True:
    case SimpleKind::False: return f;
    case SimpleKind::Leaf: return SimpleFormula::leaf(mirror(f.basic()));
    case SimpleKind::And:
    case SimpleKind::Or: {
      std::vector<SimpleFormula> cs;
      for (const auto& c : f.children()) cs.push_back(mirror(c));
      return f.kind() == SimpleKind::And ? SimpleFormula::land(cs) : SimpleFormula::lor(cs);
    }
  }
  return f;
}

// Renames free variables; names missing from the map are kept.
inline SimpleFormula rename(const SimpleFormula& f, const std::map<std::string, std::string>& m) {
  auto r = [&](const std::string& v) {
    auto it = m.find(v);
    return it == m.end() ? v : it->second;
  };
  switch (f.kind()) {
    case SimpleKind::True:
    case SimpleKind::False: return f;
    case SimpleKind::Leaf: {
      Basic b = f.basic();
      if (!b.a.empty()) b.a = r(b.a);
      if (!b.b.empty()) b.b = r(b.b);
      if (b.kind == BasicKind::VarEq) return simple::var_eq(b.a, b.b);
      if (b.kind == BasicKind::VarLess) return simple::var_less(b.a, b.b);
      return SimpleFormula::leaf(std::move(b));
    }
    case SimpleKind::And:
    case SimpleKind::Or: {
      std::vector<SimpleFormula> cs;
      for (const auto& c : f.children()) cs.push_back(rename(c, m));
      return f.kind() == SimpleKind::And ? SimpleFormula::land(cs) : SimpleFormula::lor(cs);
    }
  }
  return f;
}

inline std::string print_basic(const Basic& b) {
  switch (b.kind) {
    case BasicKind::VarEq: return "(" + b.a + " = " + b.b + ")";
    case BasicKind::VarLess: return "(" + b.a + " < " + b.b + ")";
    case BasicKind::OnClosed: return print_pe(b.pe) + "[" + b.a + "," + b.b + "]";
    case BasicKind::OnRightRay: return print_pe(b.pe) + "[" + b.a + ",inf)";
    case BasicKind::OnLeftRay: return print_pe(b.pe) + "(-inf," + b.a + "]";
    case BasicKind::OnLine: return print_pe(b.pe) + "(-inf,inf)";
  }
  return {};
}

inline std::string print_simple(const SimpleFormula& f) {
  switch (f.kind()) {
    case SimpleKind::True: return "True";
    case SimpleKind::False: return "False";
    case SimpleKind::Leaf: return print_basic(f.basic());
    case SimpleKind::And:
    case SimpleKind::Or: {
      std::string out = "(";
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += f.kind() == SimpleKind::And ? " & " : " | ";
        out += print_simple(f.children()[i]);
      }
      return out + ")";
    }
  }
  return {};
}

// Built only from And/Or over well-formed basics.
inline bool is_structurally_simple(const SimpleFormula& f) {
  switch (f.kind()) {
    case SimpleKind::True:
    case SimpleKind::False: return true;
    case SimpleKind::Leaf: {
      const Basic& b = f.basic();
      if (b.kind == BasicKind::VarEq || b.kind == BasicKind::VarLess)
        return !b.a.empty() && !b.b.empty();
      return !b.pe.deltas.empty() && b.pe.deltas.size() == b.pe.singleton.size();
    }
    case SimpleKind::And:
    case SimpleKind::Or:
      for (const auto& c : f.children())
        if (!is_structurally_simple(c)) return false;
      return true;
  }
  return false;
}

inline std::size_t simple_size(const SimpleFormula& f) {
  std::size_t n = 1;
  for (const auto& c : f.children()) n += simple_size(c);
  return n;
}

// ---------------------------------------------------------------------------
// Evaluation.

inline bool eval_basic(TlEvaluator& ev, const Basic& b, const Assignment& asg) {
  const GappedChain& m = ev.model();
  auto pos = [&](const std::string& v) -> const Position& {
    auto it = asg.find(v);
    if (it == asg.end()) throw UnassignedVariable("unassigned free variable '" + v + "'");
    return it->second;
  };
  switch (b.kind) {
    case BasicKind::VarEq: return compare(m, pos(b.a), pos(b.b)) == 0;
    case BasicKind::VarLess: return compare(m, pos(b.a), pos(b.b)) < 0;
    case BasicKind::OnClosed:
      return eval_pe(ev, IntervalSpec::closed(pos(b.a), pos(b.b)), b.pe);
    case BasicKind::OnRightRay:
      return eval_pe(ev, {pos(b.a), PlusInfinity{}, true, false}, b.pe);
    case BasicKind::OnLeftRay:
      return eval_pe(ev, {MinusInfinity{}, pos(b.a), false, true}, b.pe);
    case BasicKind::OnLine: return eval_pe(ev, IntervalSpec::line(), b.pe);
  }
  return false;
}

inline bool eval_simple(TlEvaluator& ev, const SimpleFormula& f, const Assignment& asg) {
  switch (f.kind()) {
    case SimpleKind::True: return true;
    case SimpleKind::False: return false;
    case SimpleKind::Leaf: return eval_basic(ev, f.basic(), asg);
    case SimpleKind::And:
      for (const auto& c : f.children())
        if (!eval_simple(ev, c, asg)) return false;
      return true;
    case SimpleKind::Or:
      for (const auto& c : f.children())
        if (eval_simple(ev, c, asg)) return true;
      return false;
  }
  return false;
}

inline bool eval_simple(const GappedChain& m, const SimpleFormula& f, const Assignment& asg) {
  TlEvaluator ev(m);
  return eval_simple(ev, f, asg);
}

// ---------------------------------------------------------------------------
// Conjunction of partition expressions.

namespace detail {

inline std::vector<PartitionExpression>& dedup(std::vector<PartitionExpression>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline bool is_true_slot(const PartitionExpression& p) {
  return p.size() == 1 && p.deltas[0].is_true() && !p.singleton[0];
}

// p implies q when q's slots are obtained by grouping consecutive slots of
// p, each slot of p implying the predicate of its group, and a singleton
// slot of q being a single singleton slot of p.
inline bool coarsens(const PartitionExpression& p, const PartitionExpression& q) {
  const std::size_t n = p.size(), m = q.size();
  if (m > n) return false;
  // ok[i][j]: the first i slots of p form the first j groups.
  std::vector<std::vector<char>> ok(n + 1, std::vector<char>(m + 1, 0));
  ok[0][0] = 1;
  for (std::size_t j = 1; j <= m; ++j) {
    const bool qs = q.singleton[j - 1];
    for (std::size_t i = 1; i <= n; ++i) {
      // group j ends at slot i and starts at slot s
      for (std::size_t s = i; s >= 1; --s) {
        if (!prop::implies(p.deltas[s - 1], q.deltas[j - 1])) break;
        if (qs && (s != i || !p.singleton[i - 1])) break;
        if (ok[s - 1][j - 1]) {
          ok[i][j] = 1;
          break;
        }
      }
    }
  }
  return ok[n][m];
}

// A stretch <d> is one point, or a point with d before or after it, or
// both: when the four variants of a fragment <d, d!, d> are all present they
// are replaced by the stretch.
inline bool merge_stretches(std::vector<PartitionExpression>& v) {
  std::set<PartitionExpression> have(v.begin(), v.end());
  auto cut = [](const PartitionExpression& p, std::size_t from, std::size_t to) {
    PartitionExpression r;
    for (std::size_t k = 0; k < p.size(); ++k)
      if (k < from || k > to) {
        r.deltas.push_back(p.deltas[k]);
        r.singleton.push_back(p.singleton[k]);
      }
    return r;
  };
  for (const auto& p : v)
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      if (p.singleton[i - 1] || !p.singleton[i] || p.singleton[i + 1]) continue;
      const TlFormula d = p.deltas[i];
      if (p.deltas[i - 1] != d || p.deltas[i + 1] != d) continue;
      const PartitionExpression lone = cut(p, i - 1, i - 1), before = cut(p, i + 1, i + 1);
      const PartitionExpression only = cut(lone, i, i);
      if (!have.count(lone) || !have.count(before) || !have.count(only)) continue;
      PartitionExpression merged = only;
      merged.singleton[i - 1] = false;
      std::vector<PartitionExpression> out;
      for (const auto& q : v)
        if (q != p && q != lone && q != before && q != only) out.push_back(q);
      out.push_back(std::move(merged));
      v.swap(out);
      return true;
    }
  return false;
}

// Simplifies the slots, drops contradictory alternatives and those implied
// by another one.
inline void prune(std::vector<PartitionExpression>& v) {
  std::vector<PartitionExpression> kept;
  for (auto& p : v) {
    bool dead = false;
    for (auto& d : p.deltas) {
      d = prop::simplify(d);
      if (d.is_false()) dead = true;
    }
    if (!dead) kept.push_back(std::move(p));
  }
  dedup(kept);
  while (kept.size() >= 4 && merge_stretches(kept)) dedup(kept);
  if (kept.size() > 1 && kept.size() <= 400) {
    std::vector<char> drop(kept.size(), 0);
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = 0; j < kept.size() && !drop[i]; ++j)
        if (i != j && !drop[j] && coarsens(kept[i], kept[j])) drop[i] = 1;
    std::vector<PartitionExpression> out;
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (!drop[i]) out.push_back(std::move(kept[i]));
    kept.swap(out);
  }
  v.swap(kept);
}

}  // namespace detail

// Common refinements: monotone paths through slot pairs (i,j) from the first
// to the last slots. A singleton slot of either side is met by exactly one
// refined slot, which is then a singleton itself.
inline std::vector<PartitionExpression> pe_conjoin(const PartitionExpression& p,
                                                   const PartitionExpression& q) {
  if (detail::is_true_slot(p)) return {q};
  if (detail::is_true_slot(q)) return {p};
  std::vector<PartitionExpression> out;
  const std::size_t n = p.size(), m = q.size();
  PartitionExpression cur;
  // visits[i] counts refined slots lying in slot i of p.
  std::vector<int> vp(n, 0), vq(m, 0);
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) {
    TlFormula d = prop::land(p.deltas[i], q.deltas[j]);
    if (d.is_false()) return;
    const bool single = p.singleton[i] || q.singleton[j];
    if ((p.singleton[i] && vp[i] > 0) || (q.singleton[j] && vq[j] > 0)) return;
    cur.deltas.push_back(d);
    cur.singleton.push_back(single);
    ++vp[i];
    ++vq[j];
    if (i + 1 == n && j + 1 == m) {
      out.push_back(cur);
    } else {
      // a singleton slot cannot continue into the next refined slot
      const bool stay_i = !p.singleton[i], stay_j = !q.singleton[j];
      if (i + 1 < n && stay_j) go(i + 1, j);
      if (j + 1 < m && stay_i) go(i, j + 1);
      if (i + 1 < n && j + 1 < m) go(i + 1, j + 1);
    }
    --vp[i];
    --vq[j];
    cur.deltas.pop_back();
    cur.singleton.pop_back();
  };
  go(0, 0);
  return detail::dedup(out);
}

// ---------------------------------------------------------------------------
// Normal formulas.

// Constraint on an open interval between two consecutive points: it is
// empty (if allowed) or satisfies one of the alternatives.
struct Constraint {
  bool allow_empty = false;
  std::vector<PartitionExpression> alts;

  static Constraint any() { return {true, {PartitionExpression::one(tl::top())}}; }
  static Constraint empty() { return {true, {}}; }

  bool unsat() const { return !allow_empty && alts.empty(); }
  bool is_any() const { return allow_empty && alts.size() == 1 && detail::is_true_slot(alts[0]); }

  void normalize() {
    detail::prune(alts);
    for (const auto& a : alts)
      if (detail::is_true_slot(a)) {
        alts = {a};
        break;
      }
  }

  bool operator==(const Constraint&) const = default;
};

inline Constraint conjoin(const Constraint& x, const Constraint& y) {
  if (x.is_any()) return y;
  if (y.is_any()) return x;
  Constraint out;
  out.allow_empty = x.allow_empty && y.allow_empty;
  for (const auto& p : x.alts)
    for (const auto& q : y.alts) {
      auto r = pe_conjoin(p, q);
      out.alts.insert(out.alts.end(), r.begin(), r.end());
    }
  out.normalize();
  return out;
}

inline Constraint disjoin(const Constraint& x, const Constraint& y) {
  Constraint out{x.allow_empty || y.allow_empty, x.alts};
  out.alts.insert(out.alts.end(), y.alts.begin(), y.alts.end());
  out.normalize();
  return out;
}

// Points z_1 < ... < z_n, each a class of equal variables with a label;
// constraints on the open intervals between consecutive points; and a
// sentence part, a TL formula with the same value at every point.
struct NormalFormula {
  std::vector<std::vector<std::string>> points;
  std::vector<TlFormula> labels;
  std::vector<Constraint> gaps;
  TlFormula sentence = tl::top();

  bool operator==(const NormalFormula&) const = default;

  std::vector<std::string> vars() const {
    std::vector<std::string> out;
    for (const auto& p : points) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  int point_of(const std::string& v) const {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (std::binary_search(points[i].begin(), points[i].end(), v)) return static_cast<int>(i);
    return -1;
  }

  bool unsat() const {
    if (sentence.is_false()) return true;
    for (auto l : labels)
      if (l.is_false()) return true;
    for (const auto& g : gaps)
      if (g.unsat()) return true;
    return false;
  }
};

using NormalSet = std::vector<NormalFormula>;

inline bool eval_normal(TlEvaluator& ev, const NormalFormula& nf, const Assignment& asg) {
  const GappedChain& m = ev.model();
  if (!nf.sentence.is_true()) {
    const auto& bits = ev.bits(nf.sentence);
    bool any = false;
    for (char b : bits) any = any || b;
    if (!any) return false;
  }
  std::vector<Position> ps;
  for (std::size_t i = 0; i < nf.points.size(); ++i) {
    const auto& cls = nf.points[i];
    auto it = asg.find(cls[0]);
    if (it == asg.end()) throw UnassignedVariable("unassigned free variable '" + cls[0] + "'");
    for (const auto& v : cls) {
      auto jt = asg.find(v);
      if (jt == asg.end()) throw UnassignedVariable("unassigned free variable '" + v + "'");
      if (compare(m, jt->second, it->second) != 0) return false;
    }
    if (!ps.empty() && compare(m, ps.back(), it->second) >= 0) return false;
    ps.push_back(it->second);
    if (!ev.holds(nf.labels[i], it->second.region)) return false;
  }
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    const Constraint& c = nf.gaps[i];
    IntervalSpec iv = IntervalSpec::open(ps[i], ps[i + 1]);
    bool ok = c.allow_empty && detail::interval_pieces(m, iv).empty();
    for (std::size_t j = 0; !ok && j < c.alts.size(); ++j) ok = eval_pe(ev, iv, c.alts[j]);
    if (!ok) return false;
  }
  return true;
}

inline bool eval_normal_set(TlEvaluator& ev, const NormalSet& s, const Assignment& asg) {
  for (const auto& nf : s)
    if (eval_normal(ev, nf, asg)) return true;
  return false;
}

inline std::string print_normal(const NormalFormula& nf) {
  std::string out;
  auto sep = [&] {
    if (!out.empty()) out += " & ";
  };
  if (!nf.sentence.is_true()) out += "E(" + print_tl(nf.sentence) + ")";
  for (std::size_t i = 0; i < nf.points.size(); ++i) {
    sep();
    std::string name;
    for (std::size_t j = 0; j < nf.points[i].size(); ++j) name += (j ? "=" : "") + nf.points[i][j];
    out += name + ":" + print_tl(nf.labels[i]);
    if (i + 1 < nf.points.size()) {
      const auto& g = nf.gaps[i];
      out += " <";
      if (!g.is_any()) {
        out += "[";
        bool first = true;
        if (g.allow_empty) {
          out += "empty";
          first = false;
        }
        for (const auto& a : g.alts) {
          out += (first ? "" : " | ") + print_pe(a);
          first = false;
        }
        out += "]";
      }
    }
  }
  return out.empty() ? "True" : out;
}

// Embedding of a normal formula as a simple formula.
inline SimpleFormula normal_to_simple(const NormalFormula& nf) {
  using namespace simple;
  std::vector<SimpleFormula> cs{sentence(nf.sentence)};
  for (std::size_t i = 0; i < nf.points.size(); ++i) {
    const auto& cls = nf.points[i];
    for (std::size_t j = 1; j < cls.size(); ++j) cs.push_back(var_eq(cls[0], cls[j]));
    cs.push_back(at(nf.labels[i], cls[0]));
    if (i + 1 == nf.points.size()) continue;
    const std::string& a = cls[0];
    const std::string& b = nf.points[i + 1][0];
    const Constraint& g = nf.gaps[i];
    if (g.is_any()) {
      cs.push_back(var_less(a, b));
      continue;
    }
    std::vector<SimpleFormula> alts;
    if (g.allow_empty) alts.push_back(successor(a, b));
    for (const auto& p : g.alts) alts.push_back(open(p, a, b));
    cs.push_back(SimpleFormula::lor(alts));
  }
  return SimpleFormula::land(cs);
}

inline SimpleFormula normal_set_to_simple(const NormalSet& s) {
  std::vector<SimpleFormula> ds;
  for (const auto& nf : s) ds.push_back(normal_to_simple(nf));
  return SimpleFormula::lor(ds);
}

namespace detail {

inline PartitionExpression slice(const PartitionExpression& pe, std::size_t lo, std::size_t hi) {
  // slots lo..hi, 1-based inclusive
  PartitionExpression out;
  out.deltas.assign(pe.deltas.begin() + (lo - 1), pe.deltas.begin() + hi);
  out.singleton.assign(pe.singleton.begin() + (lo - 1), pe.singleton.begin() + hi);
  return out;
}

// Constraint on the open stretch between a point in slot s (0 = the left
// end of the whole interval) and a point in slot t (k+1 = the right end).
// Each endpoint slot may or may not extend into the stretch.
inline Constraint stretch_constraint(const PartitionExpression& pe, std::size_t s, std::size_t t) {
  const std::size_t k = pe.size();
  Constraint c;
  for (int cl = 0; cl < 2; ++cl)
    for (int cr = 0; cr < 2; ++cr) {
      if (cl && (s == 0 || pe.singleton[s - 1])) continue;
      if (cr && (t == k + 1 || pe.singleton[t - 1])) continue;
      if (s == t && cl != cr) continue;
      const std::size_t lo = cl ? s : s + 1;
      const std::size_t hi = cr ? t : t - 1;
      if (lo > hi)
        c.allow_empty = true;
      else
        c.alts.push_back(slice(pe, lo, hi));
    }
  c.normalize();
  return c;
}

// Splitting pe, holding on an open interval, at m interior points. Each
// result gives the labels of the points and the m+1 stretch constraints.
struct Split {
  std::vector<TlFormula> labels;
  std::vector<Constraint> stretches;
};

inline std::vector<Split> split_open(const PartitionExpression& pe, std::size_t m) {
  std::vector<Split> out;
  const std::size_t k = pe.size();
  std::vector<std::size_t> slots;
  std::function<void(std::size_t)> go = [&](std::size_t from) {
    if (slots.size() == m) {
      Split sp;
      std::size_t prev = 0;
      for (std::size_t i = 0; i <= m; ++i) {
        std::size_t next = i < m ? slots[i] : k + 1;
        if (i < m) sp.labels.push_back(pe.deltas[next - 1]);
        Constraint c = stretch_constraint(pe, prev, next);
        if (c.unsat()) return;
        sp.stretches.push_back(std::move(c));
        prev = next;
      }
      out.push_back(std::move(sp));
      return;
    }
    for (std::size_t s = from; s <= k; ++s) {
      // two points in one slot need a non-singleton slot
      if (!slots.empty() && slots.back() == s && pe.singleton[s - 1]) continue;
      slots.push_back(s);
      go(s);
      slots.pop_back();
    }
  };
  go(1);
  return out;
}

// Interval [a,b] with a < b, split into the two endpoints and the stretch.
inline Constraint closed_stretch(const PartitionExpression& pe) {
  if (pe.size() == 1 && pe.singleton[0]) return {};
  return stretch_constraint(pe, 1, pe.size());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Normal forms of simple formulas.

struct NormalFormulaHash {
  std::size_t operator()(const NormalFormula& nf) const {
    std::size_t h = nf.sentence.id();
    for (const auto& p : nf.points)
      for (const auto& v : p) h = h * 31 + std::hash<std::string>()(v);
    for (auto l : nf.labels) h = h * 1000003 + l.id();
    for (const auto& g : nf.gaps) {
      h = h * 7 + g.allow_empty;
      for (const auto& a : g.alts) h = h * 1000033 + std::hash<PartitionExpression>()(a);
    }
    return h;
  }
};

// Merges disjuncts that differ in a single component and removes duplicates.
inline void compact(NormalSet& s) {
  {
    NormalSet kept;
    for (auto& nf : s)
      if (!nf.unsat()) kept.push_back(std::move(nf));
    s.swap(kept);
  }
  bool changed = true;
  while (changed && s.size() > 1) {
    changed = false;
    // Component index c: 0 = sentence, 1..n = labels, n+1.. = gaps.
    std::size_t max_components = 0;
    for (const auto& nf : s) max_components = std::max(max_components, 1 + nf.labels.size() + nf.gaps.size());
    for (std::size_t c = 0; c < max_components; ++c) {
      std::unordered_map<NormalFormula, std::size_t, NormalFormulaHash> index;
      NormalSet next;
      for (auto& nf : s) {
        const std::size_t n = nf.labels.size();
        if (c >= 1 + n + nf.gaps.size()) {
          auto [it, fresh] = index.emplace(nf, next.size());
          if (fresh) next.push_back(nf);
          else changed = true;
          continue;
        }
        NormalFormula key = nf;
        if (c == 0) key.sentence = tl::top();
        else if (c <= n) key.labels[c - 1] = tl::top();
        else key.gaps[c - 1 - n] = Constraint::any();
        auto [it, fresh] = index.emplace(key, next.size());
        if (fresh) {
          next.push_back(nf);
          continue;
        }
        NormalFormula& tgt = next[it->second];
        if (tgt == nf) {
          changed = true;
          continue;
        }
        if (c == 0) tgt.sentence = prop::lor(tgt.sentence, nf.sentence);
        else if (c <= n) tgt.labels[c - 1] = prop::lor(tgt.labels[c - 1], nf.labels[c - 1]);
        else tgt.gaps[c - 1 - n] = disjoin(tgt.gaps[c - 1 - n], nf.gaps[c - 1 - n]);
        changed = true;
      }
      s.swap(next);
    }
  }
}

namespace detail {

// Projection of one normal formula onto a finer skeleton: for every merged
// point the label it imposes, and for every merged gap a constraint.
struct Projection {
  std::vector<TlFormula> labels;
  std::vector<Constraint> gaps;
};

// `owner[p]` is the index of the source point merged into point p, or -1.
inline std::vector<Projection> project(const NormalFormula& nf, const std::vector<int>& owner) {
  const std::size_t total = owner.size();
  Projection base;
  base.labels.assign(total, tl::top());
  base.gaps.assign(total ? total - 1 : 0, Constraint::any());
  std::vector<std::size_t> at;  // merged index of each source point
  for (std::size_t p = 0; p < total; ++p)
    if (owner[p] >= 0) {
      at.push_back(p);
      base.labels[p] = nf.labels[owner[p]];
    }
  std::vector<Projection> out{base};
  for (std::size_t i = 0; i + 1 < at.size(); ++i) {
    const std::size_t from = at[i], to = at[i + 1];
    const std::size_t interior = to - from - 1;
    const Constraint& c = nf.gaps[i];
    if (interior == 0) {
      for (auto& pr : out) pr.gaps[from] = c;
      continue;
    }
    if (c.is_any()) continue;
    std::vector<Projection> next;
    for (const auto& alt : c.alts)
      for (const auto& sp : split_open(alt, interior))
        for (const auto& pr : out) {
          Projection q = pr;
          for (std::size_t j = 0; j < interior; ++j)
            q.labels[from + 1 + j] = prop::land(q.labels[from + 1 + j], sp.labels[j]);
          for (std::size_t j = 0; j <= interior; ++j) q.gaps[from + j] = sp.stretches[j];
          next.push_back(std::move(q));
        }
    out.swap(next);
  }
  return out;
}

}  // namespace detail

inline NormalSet merge(const NormalFormula& x, const NormalFormula& y) {
  NormalSet out;
  TlFormula sentence = prop::land(x.sentence, y.sentence);
  if (sentence.is_false()) return out;
  auto xv = x.vars(), yv = y.vars();
  auto shared_with = [](const std::vector<std::string>& cls, const std::vector<std::string>& other) {
    std::vector<std::string> r;
    for (const auto& v : cls)
      if (std::binary_search(other.begin(), other.end(), v)) r.push_back(v);
    return r;
  };
  std::vector<int> ox, oy;
  std::vector<std::vector<std::string>> pts;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) {
    if (i == x.points.size() && j == y.points.size()) {
      auto px = detail::project(x, ox);
      auto py = detail::project(y, oy);
      for (const auto& a : px)
        for (const auto& b : py) {
          NormalFormula nf;
          nf.points = pts;
          nf.sentence = sentence;
          bool dead = false;
          for (std::size_t p = 0; p < pts.size() && !dead; ++p) {
            nf.labels.push_back(prop::land(a.labels[p], b.labels[p]));
            dead = nf.labels.back().is_false();
          }
          for (std::size_t g = 0; g + 1 < pts.size() && !dead; ++g) {
            nf.gaps.push_back(conjoin(a.gaps[g], b.gaps[g]));
            dead = nf.gaps.back().unsat();
          }
          if (!dead) out.push_back(std::move(nf));
        }
      return;
    }
    auto push = [&](int a, int b, std::vector<std::string> cls) {
      ox.push_back(a);
      oy.push_back(b);
      pts.push_back(std::move(cls));
    };
    auto pop = [&] {
      ox.pop_back();
      oy.pop_back();
      pts.pop_back();
    };
    if (i < x.points.size() && shared_with(x.points[i], yv).empty()) {
      push(static_cast<int>(i), -1, x.points[i]);
      go(i + 1, j);
      pop();
    }
    if (j < y.points.size() && shared_with(y.points[j], xv).empty()) {
      push(-1, static_cast<int>(j), y.points[j]);
      go(i, j + 1);
      pop();
    }
    if (i < x.points.size() && j < y.points.size()) {
      auto sx = shared_with(x.points[i], yv), sy = shared_with(y.points[j], xv);
      // shared variables must sit in the merged pair on both sides
      bool ok = true;
      for (const auto& v : sx)
        if (!std::binary_search(y.points[j].begin(), y.points[j].end(), v)) ok = false;
      for (const auto& v : sy)
        if (!std::binary_search(x.points[i].begin(), x.points[i].end(), v)) ok = false;
      if (ok) {
        std::vector<std::string> cls = x.points[i];
        cls.insert(cls.end(), y.points[j].begin(), y.points[j].end());
        std::sort(cls.begin(), cls.end());
        cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
        push(static_cast<int>(i), static_cast<int>(j), std::move(cls));
        go(i + 1, j + 1);
        pop();
      }
    }
  };
  go(0, 0);
  return out;
}

inline NormalSet conjoin(const NormalSet& x, const NormalSet& y) {
  NormalSet out;
  for (const auto& a : x)
    for (const auto& b : y) {
      auto m = merge(a, b);
      out.insert(out.end(), std::make_move_iterator(m.begin()), std::make_move_iterator(m.end()));
    }
  compact(out);
  return out;
}

inline NormalFormula single_point(const std::vector<std::string>& vars, TlFormula label) {
  NormalFormula nf;
  nf.points = {vars};
  std::sort(nf.points[0].begin(), nf.points[0].end());
  nf.labels = {label};
  return nf;
}

inline NormalFormula two_points(const std::string& a, const std::string& b, TlFormula la,
                                TlFormula lb, Constraint gap) {
  NormalFormula nf;
  nf.points = {{a}, {b}};
  nf.labels = {la, lb};
  nf.gaps = {std::move(gap)};
  return nf;
}

// TL reading of a basic with at most one variable.
inline TlFormula basic_to_tl(const Basic& b) {
  switch (b.kind) {
    case BasicKind::VarEq: return tl::top();
    case BasicKind::VarLess: return tl::bottom();
    case BasicKind::OnClosed:
      if (b.a != b.b) throw std::invalid_argument("basic has two free variables");
      return b.pe.size() == 1 ? b.pe.deltas[0] : tl::bottom();
    case BasicKind::OnRightRay: return right_ray_tl(b.pe);
    case BasicKind::OnLeftRay: return left_ray_tl(b.pe);
    case BasicKind::OnLine: return line_tl(b.pe);
  }
  return tl::bottom();
}

inline NormalSet basic_normals(const Basic& b) {
  const auto vs = b.vars();
  if (vs.size() < 2) {
    TlFormula t = basic_to_tl(b);
    if (t.is_false()) return {};
    if (vs.empty()) {
      NormalFormula nf;
      nf.sentence = t;
      return {nf};
    }
    return {single_point(vs, t)};
  }
  switch (b.kind) {
    case BasicKind::VarEq: return {single_point(vs, tl::top())};
    case BasicKind::VarLess: return {two_points(b.a, b.b, tl::top(), tl::top(), Constraint::any())};
    case BasicKind::OnClosed: {
      NormalSet out;
      if (b.pe.size() == 1) out.push_back(single_point(vs, b.pe.deltas[0]));
      Constraint c = detail::closed_stretch(b.pe);
      if (!c.unsat())
        out.push_back(two_points(b.a, b.b, b.pe.deltas.front(), b.pe.deltas.back(), std::move(c)));
      compact(out);
      return out;
    }
    default: break;
  }
  return {};
}

namespace detail {

// Every total preorder of vars, as a normal formula with trivial labels and
// gaps.
inline NormalSet skeletons(const std::vector<std::string>& vars) {
  NormalSet out;
  std::vector<std::size_t> rank(vars.size(), 0);
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t used) {
    if (i == vars.size()) {
      NormalFormula nf;
      nf.points.resize(used);
      for (std::size_t k = 0; k < vars.size(); ++k) nf.points[rank[k]].push_back(vars[k]);
      for (auto& p : nf.points) std::sort(p.begin(), p.end());
      nf.labels.assign(used, tl::top());
      nf.gaps.assign(used ? used - 1 : 0, Constraint::any());
      out.push_back(std::move(nf));
      return;
    }
    // insert vars[i] into an existing class or as a new class at any place
    for (std::size_t r = 0; r < used; ++r) {
      rank[i] = r;
      go(i + 1, used);
    }
    for (std::size_t r = 0; r <= used; ++r) {
      for (std::size_t k = 0; k < i; ++k)
        if (rank[k] >= r) ++rank[k];
      rank[i] = r;
      go(i + 1, used + 1);
      for (std::size_t k = 0; k < i; ++k)
        if (rank[k] > r) --rank[k];
    }
  };
  go(0, 0);
  return out;
}

inline NormalSet simple_to_normal_raw(const SimpleFormula& f);

// Normal form of f restricted to the order type fixed by the skeleton sk,
// which mentions every variable of f.
inline NormalSet normal_in(const SimpleFormula& f, const NormalFormula& sk,
                           std::map<const void*, NormalSet>& memo) {
  if (auto it = memo.find(f.identity()); it != memo.end()) return it->second;
  NormalSet out;
  switch (f.kind()) {
    case SimpleKind::True: out = {sk}; break;
    case SimpleKind::False: break;
    case SimpleKind::Leaf: {
      const Basic& b = f.basic();
      const int pa = b.a.empty() ? -1 : sk.point_of(b.a), pb = b.b.empty() ? -1 : sk.point_of(b.b);
      if (b.kind == BasicKind::VarEq) {
        if (pa == pb) out = {sk};
      } else if (b.kind == BasicKind::VarLess) {
        if (pa < pb) out = {sk};
      } else if (b.kind == BasicKind::OnClosed && pa > pb) {
      } else {
        out = conjoin(NormalSet{sk}, basic_normals(b));
      }
      break;
    }
    case SimpleKind::Or:
      for (const auto& c : f.children()) {
        auto s = normal_in(c, sk, memo);
        out.insert(out.end(), s.begin(), s.end());
      }
      compact(out);
      break;
    case SimpleKind::And: {
      std::vector<NormalSet> parts;
      bool dead = false;
      for (const auto& c : f.children()) {
        parts.push_back(normal_in(c, sk, memo));
        if (parts.back().empty()) {
          dead = true;
          break;
        }
      }
      if (dead) break;
      std::stable_sort(parts.begin(), parts.end(),
                       [](const NormalSet& a, const NormalSet& b) { return a.size() < b.size(); });
      out = parts[0];
      for (std::size_t i = 1; i < parts.size() && !out.empty(); ++i) out = conjoin(out, parts[i]);
      break;
    }
  }
  memo.emplace(f.identity(), out);
  return out;
}

}  // namespace detail

// Disjunction of normal formulas equivalent to f. With two or more free
// variables the order type of the variables is fixed first, which turns
// order literals into constants before any conjunction is expanded.
inline NormalSet simple_to_normal(const SimpleFormula& f) {
  if (f.vars().size() < 2 || f.kind() == SimpleKind::Leaf) return detail::simple_to_normal_raw(f);
  NormalSet out;
  for (const auto& sk : detail::skeletons(f.vars())) {
    std::map<const void*, NormalSet> memo;
    auto s = detail::normal_in(f, sk, memo);
    out.insert(out.end(), s.begin(), s.end());
  }
  compact(out);
  return out;
}

inline NormalSet detail::simple_to_normal_raw(const SimpleFormula& f) {
  switch (f.kind()) {
    case SimpleKind::True: return {NormalFormula{}};
    case SimpleKind::False: return {};
    case SimpleKind::Leaf: return basic_normals(f.basic());
    case SimpleKind::Or: {
      NormalSet out;
      for (const auto& c : f.children()) {
        auto s = simple_to_normal(c);
        out.insert(out.end(), s.begin(), s.end());
      }
      compact(out);
      return out;
    }
    case SimpleKind::And: {
      std::vector<NormalSet> parts;
      for (const auto& c : f.children()) {
        parts.push_back(simple_to_normal(c));
        if (parts.back().empty()) return {};
      }
      std::stable_sort(parts.begin(), parts.end(),
                       [](const NormalSet& a, const NormalSet& b) { return a.size() < b.size(); });
      NormalSet acc = parts[0];
      for (std::size_t i = 1; i < parts.size() && !acc.empty(); ++i) acc = conjoin(acc, parts[i]);
      return acc;
    }
  }
  return {};
}

class VariableNotFree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Existential elimination of z from one normal formula. The result is a
// single normal formula (a one-element disjunction).
inline NormalSet exists_elim(const NormalFormula& nf, const std::string& z) {
  const int j = nf.point_of(z);
  if (j < 0) throw VariableNotFree("variable '" + z + "' is not free");
  NormalFormula out = nf;
  auto& cls = out.points[j];
  if (cls.size() > 1) {
    cls.erase(std::find(cls.begin(), cls.end(), z));
    return {out};
  }
  const std::size_t n = nf.points.size();
  const TlFormula lab = nf.labels[j];
  if (n == 1) {
    NormalFormula s;
    s.sentence = tl::land(nf.sentence, tl::somewhere(lab));
    if (s.sentence.is_false()) return {};
    return {s};
  }
  const PartitionExpression me = PartitionExpression::one(lab, true);
  const PartitionExpression end = PartitionExpression::one(tl::top(), true);
  auto concat = [](std::vector<PartitionExpression> parts) {
    PartitionExpression r;
    for (const auto& p : parts) {
      r.deltas.insert(r.deltas.end(), p.deltas.begin(), p.deltas.end());
      r.singleton.insert(r.singleton.end(), p.singleton.begin(), p.singleton.end());
    }
    return r;
  };
  if (j == 0 || static_cast<std::size_t>(j) == n - 1) {
    // z is an end point: the remaining constraint involves only its
    // neighbour and becomes part of the neighbour's label.
    const bool first = j == 0;
    const Constraint& g = first ? nf.gaps[0] : nf.gaps[n - 2];
    std::vector<TlFormula> options;
    auto add = [&](std::vector<PartitionExpression> mid) {
      if (first) {
        mid.insert(mid.begin(), me);
        mid.push_back(end);
        options.push_back(bounded_left_tl(concat(mid)));
      } else {
        mid.insert(mid.begin(), end);
        mid.push_back(me);
        options.push_back(bounded_right_tl(concat(mid)));
      }
    };
    if (g.allow_empty) add({});
    for (const auto& a : g.alts) add({a});
    const std::size_t nb = first ? 1 : n - 2;
    out.labels[nb] = prop::land(out.labels[nb], tl::lor(options));
    out.points.erase(out.points.begin() + j);
    out.labels.erase(out.labels.begin() + j);
    out.gaps.erase(out.gaps.begin() + (first ? 0 : n - 2));
    if (out.unsat()) return {};
    return {out};
  }
  const Constraint& gl = nf.gaps[j - 1];
  const Constraint& gr = nf.gaps[j];
  Constraint fused;
  std::vector<std::vector<PartitionExpression>> left, right;
  if (gl.allow_empty) left.push_back({});
  for (const auto& a : gl.alts) left.push_back({a});
  if (gr.allow_empty) right.push_back({});
  for (const auto& a : gr.alts) right.push_back({a});
  for (const auto& l : left)
    for (const auto& r : right) {
      std::vector<PartitionExpression> parts = l;
      parts.push_back(me);
      parts.insert(parts.end(), r.begin(), r.end());
      fused.alts.push_back(concat(parts));
    }
  fused.normalize();
  out.points.erase(out.points.begin() + j);
  out.labels.erase(out.labels.begin() + j);
  out.gaps.erase(out.gaps.begin() + j);
  out.gaps[j - 1] = std::move(fused);
  if (out.unsat()) return {};
  return {out};
}

inline NormalSet exists_elim(const NormalSet& s, const std::string& z) {
  NormalSet out;
  for (const auto& nf : s) {
    if (nf.point_of(z) < 0) {
      out.push_back(nf);
      continue;
    }
    auto r = exists_elim(nf, z);
    out.insert(out.end(), r.begin(), r.end());
  }
  compact(out);
  return out;
}

inline SimpleFormula exists_simple(const SimpleFormula& f, const std::string& z) {
  if (!std::binary_search(f.vars().begin(), f.vars().end(), z)) return f;
  return normal_set_to_simple(exists_elim(simple_to_normal(f), z));
}

}  // namespace stavi
