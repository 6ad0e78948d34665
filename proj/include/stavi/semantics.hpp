#pragma once

// Evaluators over gapped chains. TL truth is computed per region (truth is
// uniform inside a dense region); FO truth is decided by enumerating
// representative positions up to order type.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stavi/fo.hpp"
#include "stavi/model.hpp"
#include "stavi/pe.hpp"
#include "stavi/tl.hpp"

namespace stavi {

using Assignment = std::map<std::string, Position>;

// Truth per region; gaps carry no value.
class TruthMap {
 public:
  TruthMap() = default;
  explicit TruthMap(std::vector<std::optional<bool>> v) : values_(std::move(v)) {}

  std::size_t size() const { return values_.size(); }
  bool defined(std::size_t r) const { return values_.at(r).has_value(); }
  bool at(std::size_t r) const {
    const auto& v = values_.at(r);
    if (!v) throw std::out_of_range("truth value requested for a gap region");
    return *v;
  }
  const std::vector<std::optional<bool>>& values() const { return values_; }

  // "1 - 0" style rendering, `-` for gaps.
  std::string str() const {
    std::string out;
    for (const auto& v : values_) {
      if (!out.empty()) out += ' ';
      out += v ? (*v ? '1' : '0') : '-';
    }
    return out;
  }

  bool operator==(const TruthMap&) const = default;

 private:
  std::vector<std::optional<bool>> values_;
};

namespace detail {

using Bits = std::vector<char>;

inline Bits until_bits(const GappedChain& m, const Bits& a, const Bits& b) {
  const std::size_t n = m.size();
  Bits out(n, 0);
  // scan[r]: some witness exists at or after region r with a holding on the
  // stretch from the start of r up to it.
  Bits scan(n + 1, 0);
  for (std::size_t r = n; r-- > 0;) {
    const Region& reg = m[r];
    if (reg.is_gap())
      scan[r] = scan[r + 1];
    else if (reg.is_point())
      scan[r] = b[r] ? 1 : (a[r] ? scan[r + 1] : 0);
    else
      scan[r] = a[r] ? (b[r] ? 1 : scan[r + 1]) : 0;
  }
  for (std::size_t r = 0; r < n; ++r) {
    const Region& reg = m[r];
    if (reg.is_point()) out[r] = scan[r + 1];
    if (reg.is_dense()) out[r] = a[r] && (b[r] || scan[r + 1]);
  }
  return out;
}

// Direct gap semantics: a gap g to the right with p on every region strictly
// between, p failing on the dense region right after g, q holding there.
inline Bits until_s_bits(const GappedChain& m, const Bits& p, const Bits& q) {
  const std::size_t n = m.size();
  Bits out(n, 0);
  // reach[r]: a suitable gap exists at index >= r with p on regions r..g-1.
  Bits reach(n + 1, 0);
  for (std::size_t r = n; r-- > 0;) {
    const Region& reg = m[r];
    if (reg.is_gap())
      reach[r] = (!p[r + 1] && q[r + 1]) || reach[r + 1];
    else
      reach[r] = p[r] && reach[r + 1];
  }
  for (std::size_t r = 0; r < n; ++r) {
    const Region& reg = m[r];
    if (reg.is_point()) out[r] = reach[r + 1];
    if (reg.is_dense()) out[r] = p[r] && reach[r + 1];
  }
  return out;
}

inline Bits reversed(const Bits& v) { return Bits(v.rbegin(), v.rend()); }

}  // namespace detail

// Per-model TL evaluator with a truth cache shared by all formulas
// evaluated on the same model.
class TlEvaluator {
 public:
  explicit TlEvaluator(const GappedChain& m)
      : model_(m), reversed_(reverse(m)) {
    if (auto err = validate(m)) throw std::invalid_argument(*err);
  }

  const GappedChain& model() const { return model_; }

  const detail::Bits& bits(TlFormula f) {
    if (auto it = cache_.find(f.id()); it != cache_.end()) return it->second;
    std::vector<std::pair<TlFormula, bool>> stack{{f, false}};
    while (!stack.empty()) {
      auto [g, expanded] = stack.back();
      stack.pop_back();
      if (cache_.count(g.id())) continue;
      if (!expanded && (g.kind() == TlKind::Not || tl::is_binary(g.kind()))) {
        stack.push_back({g, true});
        stack.push_back({g.lhs(), false});
        if (tl::is_binary(g.kind())) stack.push_back({g.rhs(), false});
        continue;
      }
      cache_.emplace(g.id(), compute(g));
    }
    return cache_.at(f.id());
  }

  bool holds(TlFormula f, std::size_t region) {
    if (model_[region].is_gap())
      throw std::out_of_range("truth value requested for a gap region");
    return bits(f)[region] != 0;
  }

  TruthMap truth(TlFormula f) {
    const auto& b = bits(f);
    std::vector<std::optional<bool>> v(model_.size());
    for (std::size_t r = 0; r < model_.size(); ++r)
      if (!model_[r].is_gap()) v[r] = b[r] != 0;
    return TruthMap(std::move(v));
  }

 private:
  detail::Bits compute(TlFormula g) {
    const std::size_t n = model_.size();
    detail::Bits out(n, 0);
    switch (g.kind()) {
      case TlKind::False:
        return out;
      case TlKind::True:
        for (std::size_t r = 0; r < n; ++r) out[r] = !model_[r].is_gap();
        return out;
      case TlKind::Atom:
        for (std::size_t r = 0; r < n; ++r) out[r] = model_[r].holds(g.atom_name());
        return out;
      case TlKind::Not: {
        const auto& a = cache_.at(g.lhs().id());
        for (std::size_t r = 0; r < n; ++r) out[r] = !model_[r].is_gap() && !a[r];
        return out;
      }
      case TlKind::And:
      case TlKind::Or: {
        const auto& a = cache_.at(g.lhs().id());
        const auto& b = cache_.at(g.rhs().id());
        for (std::size_t r = 0; r < n; ++r)
          out[r] = g.kind() == TlKind::And ? (a[r] && b[r]) : (a[r] || b[r]);
        return out;
      }
      case TlKind::Until:
        return detail::until_bits(model_, cache_.at(g.lhs().id()),
                                  cache_.at(g.rhs().id()));
      case TlKind::UntilS:
        return detail::until_s_bits(model_, cache_.at(g.lhs().id()),
                                    cache_.at(g.rhs().id()));
      case TlKind::Since:
        return detail::reversed(detail::until_bits(
            reversed_, detail::reversed(cache_.at(g.lhs().id())),
            detail::reversed(cache_.at(g.rhs().id()))));
      case TlKind::SinceS:
        return detail::reversed(detail::until_s_bits(
            reversed_, detail::reversed(cache_.at(g.lhs().id())),
            detail::reversed(cache_.at(g.rhs().id()))));
    }
    return out;
  }

  GappedChain model_;
  GappedChain reversed_;
  std::unordered_map<std::uint32_t, detail::Bits> cache_;
};

inline TruthMap eval_tl(const GappedChain& m, TlFormula f) {
  TlEvaluator ev(m);
  return ev.truth(f);
}

inline bool eval_point_predicate(const GappedChain& m, const Position& pos,
                                 PointPredicate d) {
  check_position(m, pos);
  TlEvaluator ev(m);
  return ev.holds(d, pos.region);
}

// Direct reading of "the point is followed by a p-gap": a gap to the right
// with p on every region strictly between and p failing right after it.
inline TruthMap gamma_plus_direct(const GappedChain& m, TlFormula p) {
  TlEvaluator ev(m);
  const auto& pb = ev.bits(p);
  const std::size_t n = m.size();
  std::vector<std::optional<bool>> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (m[r].is_gap()) continue;
    bool found = false;
    bool ok = !m[r].is_dense() || pb[r];
    for (std::size_t g = r + 1; ok && g < n && !found; ++g) {
      if (m[g].is_gap() && !pb[g + 1]) found = true;
      if (!m[g].is_gap() && !pb[g]) ok = false;
    }
    out[r] = found;
  }
  return TruthMap(std::move(out));
}

inline TruthMap gamma_minus_direct(const GappedChain& m, TlFormula p) {
  auto t = gamma_plus_direct(reverse(m), tl::mirror(p)).values();
  std::reverse(t.begin(), t.end());
  return TruthMap(std::move(t));
}

// Positions realizing every order type of a new point relative to the
// positions already in use: each point region, and in each dense region the
// used coordinates plus one coordinate in every interval they leave.
inline std::vector<Position> witness_positions(const GappedChain& m,
                                               const std::vector<Position>& used) {
  std::vector<Position> out;
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].is_point()) out.push_back(Position::at_point(r));
    if (!m[r].is_dense()) continue;
    std::vector<Rational> cs{0, 1};
    for (const auto& p : used)
      if (p.region == r && p.coord) cs.push_back(*p.coord);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
      if (i > 0) out.push_back(Position::in_dense(r, cs[i]));
      out.push_back(Position::in_dense(r, (cs[i] + cs[i + 1]) / 2));
    }
  }
  return out;
}

namespace detail {

// Pieces of an interval: single points and open dense stretches, in order.
struct Piece {
  std::size_t region;
  bool open;
};

inline std::vector<Piece> interval_pieces(const GappedChain& m,
                                          const IntervalSpec& iv) {
  check_interval(m, iv);
  const CutKey lo = boundary_key(m, iv.lo);
  const CutKey hi = boundary_key(m, iv.hi);
  std::vector<Piece> out;
  if (hi < lo) return out;
  if (lo == hi) {
    if (iv.lo_closed && iv.hi_closed)
      out.push_back({static_cast<std::size_t>(lo.region), false});
    return out;
  }
  const long first = std::max(lo.region, 0L);
  const long last = std::min(hi.region, static_cast<long>(m.size()) - 1);
  for (long r = first; r <= last; ++r) {
    const Region& reg = m[r];
    const auto ur = static_cast<std::size_t>(r);
    if (reg.is_gap()) continue;
    if (reg.is_point()) {
      if (contains(m, iv, Position::at_point(ur))) out.push_back({ur, false});
      continue;
    }
    Rational a = 0, b = 1;
    bool a_closed = false, b_closed = false;
    if (lo.region == r) {
      a = lo.offset;
      a_closed = iv.lo_closed;
    }
    if (hi.region == r) {
      b = hi.offset;
      b_closed = iv.hi_closed;
    }
    if (a_closed) out.push_back({ur, false});
    if (a < b) out.push_back({ur, true});
    if (b_closed) out.push_back({ur, false});
  }
  return out;
}

}  // namespace detail

// Partition of an interval into consecutive non-empty slots. State j is the
// slot covering the end of the pieces consumed so far (0 = nothing yet).
inline bool eval_pe(TlEvaluator& ev, const IntervalSpec& iv,
                    const PartitionExpression& pe) {
  const GappedChain& m = ev.model();
  const auto pieces = detail::interval_pieces(m, iv);
  if (pieces.empty()) return false;
  const std::size_t k = pe.size();
  std::vector<const detail::Bits*> d(k);
  for (std::size_t j = 0; j < k; ++j) d[j] = &ev.bits(pe.deltas[j]);
  auto holds = [&](std::size_t slot, std::size_t region) {
    return (*d[slot - 1])[region] != 0;
  };
  auto single = [&](std::size_t slot) { return pe.in_o(slot - 1); };

  std::vector<char> cur(k + 1, 0), next(k + 1, 0);
  cur[0] = 1;
  for (const auto& pc : pieces) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t j = 0; j <= k; ++j) {
      if (!cur[j]) continue;
      const bool can_continue = j >= 1 && !single(j) && holds(j, pc.region);
      if (!pc.open) {
        if (can_continue) next[j] = 1;
        if (j + 1 <= k && holds(j + 1, pc.region)) next[j + 1] = 1;
        continue;
      }
      // Open stretch covered by slots s..e; s continues j or starts fresh.
      for (int fresh = 0; fresh < 2; ++fresh) {
        std::size_t s = fresh ? j + 1 : j;
        if (!fresh && !can_continue) continue;
        if (fresh && (s > k || single(s) || !holds(s, pc.region))) continue;
        bool prev_single = false;
        for (std::size_t e = s; e <= k; ++e) {
          if (e > s) {
            if (!holds(e, pc.region)) break;
            if (single(e) && prev_single) break;
          }
          prev_single = single(e);
          if (!single(e)) next[e] = 1;
        }
      }
    }
    std::swap(cur, next);
  }
  return cur[k] != 0;
}

inline bool eval_pe(const GappedChain& m, const IntervalSpec& iv,
                    const PartitionExpression& pe) {
  TlEvaluator ev(m);
  return eval_pe(ev, iv, pe);
}

// ---------------------------------------------------------------------------
// First-order evaluation.

namespace detail {

// FO formula compiled to indexed nodes with integer variables.
struct FoProgram {
  struct Node {
    FoKind kind;
    int var = -1, var2 = -1;
    std::string atom;
    int a = -1, b = -1;
    std::vector<int> free;  // sorted variable indices
  };
  std::vector<Node> nodes;
  std::map<std::string, int> vars;
  int root = -1;

  int var_index(const std::string& v) {
    auto [it, inserted] = vars.emplace(v, static_cast<int>(vars.size()));
    return it->second;
  }

  int compile(const FoFormula& f) {
    Node n;
    n.kind = f.kind();
    switch (f.kind()) {
      case FoKind::Less:
      case FoKind::Equal:
        n.var = var_index(f.var());
        n.var2 = var_index(f.var2());
        n.free = {n.var, n.var2};
        break;
      case FoKind::Pred:
        n.var = var_index(f.var());
        n.atom = f.atom();
        n.free = {n.var};
        break;
      case FoKind::Not:
        n.a = compile(f.sub(0));
        n.free = nodes[n.a].free;
        break;
      case FoKind::And:
      case FoKind::Or:
        n.a = compile(f.sub(0));
        n.b = compile(f.sub(1));
        n.free = nodes[n.a].free;
        n.free.insert(n.free.end(), nodes[n.b].free.begin(), nodes[n.b].free.end());
        break;
      case FoKind::Exists:
      case FoKind::Forall: {
        n.var = var_index(f.var());
        n.a = compile(f.sub(0));
        for (int v : nodes[n.a].free)
          if (v != n.var) n.free.push_back(v);
        break;
      }
    }
    std::sort(n.free.begin(), n.free.end());
    n.free.erase(std::unique(n.free.begin(), n.free.end()), n.free.end());
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }
};

struct IPos {
  std::uint32_t region;
  std::int64_t coord;  // 0 for point regions
};

constexpr std::int64_t kCoordTop = std::int64_t{1} << 62;

class FoEvaluator {
 public:
  FoEvaluator(const GappedChain& m, const FoProgram& prog)
      : m_(m), prog_(prog), env_(prog.vars.size(), IPos{0, 0}) {}

  void set(int var, IPos p) { env_[var] = p; }

  bool eval(int node) {
    const auto& n = prog_.nodes[node];
    switch (n.kind) {
      case FoKind::Less:
      case FoKind::Equal: {
        const IPos& x = env_[n.var];
        const IPos& y = env_[n.var2];
        if (n.kind == FoKind::Equal) return x.region == y.region && x.coord == y.coord;
        return x.region != y.region ? x.region < y.region : x.coord < y.coord;
      }
      case FoKind::Pred:
        return m_[env_[n.var].region].holds(n.atom);
      case FoKind::Not:
        return !eval(n.a);
      case FoKind::And:
        return eval(n.a) && eval(n.b);
      case FoKind::Or:
        return eval(n.a) || eval(n.b);
      case FoKind::Exists:
      case FoKind::Forall:
        return quantifier(node);
    }
    return false;
  }

 private:
  // Memoized by the order type of the free variables.
  bool quantifier(int node) {
    const auto& n = prog_.nodes[node];
    std::vector<std::int64_t> key;
    key.reserve(1 + 2 * n.free.size());
    key.push_back(node);
    for (std::size_t i = 0; i < n.free.size(); ++i) {
      const IPos& p = env_[n.free[i]];
      std::int64_t rank = 0;
      for (std::size_t j = 0; j < n.free.size(); ++j) {
        const IPos& q = env_[n.free[j]];
        if (q.region == p.region && q.coord < p.coord) ++rank;
      }
      key.push_back(p.region);
      key.push_back(rank);
    }
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const bool exists = n.kind == FoKind::Exists;
    const IPos saved = env_[n.var];
    bool result = !exists;
    for (std::uint32_t r = 0; r < m_.size() && result != exists; ++r) {
      const Region& reg = m_[r];
      if (reg.is_gap()) continue;
      if (reg.is_point()) {
        env_[n.var] = {r, 0};
        if (eval(n.a) == exists) result = exists;
        continue;
      }
      std::vector<std::int64_t> cs{0, kCoordTop};
      for (int v : n.free)
        if (env_[v].region == r) cs.push_back(env_[v].coord);
      std::sort(cs.begin(), cs.end());
      cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
      for (std::size_t i = 0; i + 1 < cs.size() && result != exists; ++i) {
        if (i > 0) {
          env_[n.var] = {r, cs[i]};
          if (eval(n.a) == exists) {
            result = exists;
            break;
          }
        }
        env_[n.var] = {r, cs[i] + (cs[i + 1] - cs[i]) / 2};
        if (eval(n.a) == exists) result = exists;
      }
    }
    env_[n.var] = saved;
    memo_.emplace(std::move(key), result);
    return result;
  }

  struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& k) const {
      std::size_t h = 1469598103934665603ULL;
      for (auto x : k) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
      return h;
    }
  };

  const GappedChain& m_;
  const FoProgram& prog_;
  std::vector<IPos> env_;
  std::unordered_map<std::vector<std::int64_t>, bool, KeyHash> memo_;
};

}  // namespace detail

class UnassignedVariable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluates an FO formula at an assignment. Coordinates inside each dense
// region are replaced by order-isomorphic integers; quantifiers range over
// the points plus one fresh coordinate per gap between existing coordinates.
inline bool eval_fo(const GappedChain& m, const FoFormula& f, const Assignment& a) {
  if (auto err = validate(m)) throw std::invalid_argument(*err);
  detail::FoProgram prog;
  prog.root = prog.compile(f);
  for (const auto& v : free_vars(f))
    if (!a.count(v)) throw UnassignedVariable("unassigned free variable '" + v + "'");
  detail::FoEvaluator ev(m, prog);
  std::map<std::size_t, std::vector<Rational>> coords;
  for (const auto& [v, p] : a) {
    check_position(m, p);
    if (p.coord) coords[p.region].push_back(*p.coord);
  }
  for (auto& [r, cs] : coords) {
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  }
  for (const auto& [v, p] : a) {
    auto it = prog.vars.find(v);
    if (it == prog.vars.end()) continue;
    std::int64_t c = 0;
    if (p.coord) {
      const auto& cs = coords[p.region];
      auto rank = std::lower_bound(cs.begin(), cs.end(), *p.coord) - cs.begin();
      c = (static_cast<std::int64_t>(rank) + 1) << 40;
    }
    ev.set(it->second, {static_cast<std::uint32_t>(p.region), c});
  }
  return ev.eval(prog.root);
}

// Truth of a one-free-variable formula at every region, using one
// representative position per region.
inline TruthMap eval_fo_regions(const GappedChain& m, const FoFormula& f) {
  if (auto err = validate(m)) throw std::invalid_argument(*err);
  auto fv = free_vars(f);
  if (fv.size() > 1)
    throw std::invalid_argument("formula has more than one free variable");
  detail::FoProgram prog;
  prog.root = prog.compile(f);
  detail::FoEvaluator ev(m, prog);
  std::vector<std::optional<bool>> out(m.size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].is_gap()) continue;
    if (!fv.empty())
      ev.set(prog.vars.at(*fv.begin()),
             {static_cast<std::uint32_t>(r),
              m[r].is_dense() ? std::int64_t{1} << 40 : 0});
    out[r] = ev.eval(prog.root);
  }
  return TruthMap(std::move(out));
}

}  // namespace stavi
