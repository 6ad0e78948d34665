#pragma once

// Temporal formulas over Until, Since, Until^s and Since^s.
//
// Formulas are hash-consed into a process-wide arena, so a TlFormula is a
// 32-bit handle, equality is identity and shared subterms are stored once.
// The arena is not synchronized; build formulas from one thread.

#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace stavi {

enum class TlKind : std::uint8_t {
  False,
  True,
  Atom,
  Not,
  And,
  Or,
  Until,
  Since,
  UntilS,
  SinceS
};

namespace detail {

struct TlNode {
  TlKind kind;
  std::uint32_t a;
  std::uint32_t b;
  bool operator==(const TlNode&) const = default;
};

struct TlNodeHash {
  std::size_t operator()(const TlNode& n) const {
    std::uint64_t h = static_cast<std::uint64_t>(n.kind);
    h = h * 0x9E3779B97F4A7C15ULL + n.a;
    h = h * 0x9E3779B97F4A7C15ULL + n.b;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

class TlArena {
 public:
  static TlArena& get() {
    static TlArena arena;
    return arena;
  }

  std::uint32_t intern(const TlNode& n) {
    auto it = index_.find(n);
    if (it != index_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(n);
    index_.emplace(n, id);
    return id;
  }

  std::uint32_t atom_id(std::string_view name) {
    auto it = atom_ids_.find(std::string(name));
    if (it != atom_ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(atoms_.size());
    atoms_.emplace_back(name);
    atom_ids_.emplace(std::string(name), id);
    return id;
  }

  const TlNode& node(std::uint32_t id) const { return nodes_[id]; }
  const std::string& atom_name(std::uint32_t a) const { return atoms_[a]; }
  std::size_t size() const { return nodes_.size(); }

  std::unordered_map<std::uint32_t, std::uint32_t>& mirror_cache() {
    return mirror_cache_;
  }

 private:
  TlArena() {
    intern({TlKind::False, 0, 0});
    intern({TlKind::True, 0, 0});
  }

  std::vector<TlNode> nodes_;
  std::unordered_map<TlNode, std::uint32_t, TlNodeHash> index_;
  std::vector<std::string> atoms_;
  std::unordered_map<std::string, std::uint32_t> atom_ids_;
  std::unordered_map<std::uint32_t, std::uint32_t> mirror_cache_;
};

}  // namespace detail

class TlFormula {
 public:
  TlFormula() = default;  // False

  static TlFormula from_id(std::uint32_t id) { return TlFormula(id); }

  std::uint32_t id() const { return id_; }
  TlKind kind() const { return node().kind; }
  bool is_true() const { return kind() == TlKind::True; }
  bool is_false() const { return kind() == TlKind::False; }

  // Operand of Not; left operand of binary nodes.
  TlFormula lhs() const { return TlFormula(node().a); }
  TlFormula rhs() const { return TlFormula(node().b); }
  const std::string& atom_name() const {
    return detail::TlArena::get().atom_name(node().a);
  }

  bool operator==(const TlFormula&) const = default;
  auto operator<=>(const TlFormula&) const = default;

 private:
  explicit TlFormula(std::uint32_t id) : id_(id) {}
  const detail::TlNode& node() const {
    return detail::TlArena::get().node(id_);
  }
  std::uint32_t id_ = 0;
};

}  // namespace stavi

template <>
struct std::hash<stavi::TlFormula> {
  std::size_t operator()(const stavi::TlFormula& f) const { return f.id(); }
};

namespace stavi::tl {

namespace detail_ {
inline TlFormula make(TlKind k, std::uint32_t a = 0, std::uint32_t b = 0) {
  return TlFormula::from_id(
      stavi::detail::TlArena::get().intern({k, a, b}));
}
}  // namespace detail_

inline TlFormula top() { return TlFormula::from_id(1); }
inline TlFormula bottom() { return TlFormula::from_id(0); }

inline TlFormula atom(std::string_view name) {
  return detail_::make(TlKind::Atom,
                       stavi::detail::TlArena::get().atom_id(name));
}

inline TlFormula lnot(TlFormula f) {
  switch (f.kind()) {
    case TlKind::True: return bottom();
    case TlKind::False: return top();
    case TlKind::Not: return f.lhs();
    default: return detail_::make(TlKind::Not, f.id());
  }
}

inline bool complementary(TlFormula a, TlFormula b) {
  return (a.kind() == TlKind::Not && a.lhs() == b) ||
         (b.kind() == TlKind::Not && b.lhs() == a);
}

inline TlFormula land(TlFormula a, TlFormula b) {
  if (a.is_false() || b.is_false()) return bottom();
  if (a.is_true()) return b;
  if (b.is_true() || a == b) return a;
  if (complementary(a, b)) return bottom();
  if (b.id() < a.id()) std::swap(a, b);
  return detail_::make(TlKind::And, a.id(), b.id());
}

inline TlFormula lor(TlFormula a, TlFormula b) {
  if (a.is_true() || b.is_true()) return top();
  if (a.is_false()) return b;
  if (b.is_false() || a == b) return a;
  if (complementary(a, b)) return top();
  if (b.id() < a.id()) std::swap(a, b);
  return detail_::make(TlKind::Or, a.id(), b.id());
}

inline TlFormula implies(TlFormula a, TlFormula b) { return lor(lnot(a), b); }

inline TlFormula land(const std::vector<TlFormula>& fs) {
  TlFormula acc = top();
  for (auto f : fs) acc = land(acc, f);
  return acc;
}

inline TlFormula lor(const std::vector<TlFormula>& fs) {
  TlFormula acc = bottom();
  for (auto f : fs) acc = lor(acc, f);
  return acc;
}

// Strict Until: some later point satisfies q and p holds strictly between.
inline TlFormula until(TlFormula p, TlFormula q) {
  if (q.is_false()) return bottom();
  return detail_::make(TlKind::Until, p.id(), q.id());
}

inline TlFormula since(TlFormula p, TlFormula q) {
  if (q.is_false()) return bottom();
  return detail_::make(TlKind::Since, p.id(), q.id());
}

inline TlFormula until_s(TlFormula p, TlFormula q) {
  if (q.is_false()) return bottom();
  return detail_::make(TlKind::UntilS, p.id(), q.id());
}

inline TlFormula since_s(TlFormula p, TlFormula q) {
  if (q.is_false()) return bottom();
  return detail_::make(TlKind::SinceS, p.id(), q.id());
}

// Swaps the future and past modalities throughout.
inline TlFormula mirror(TlFormula f) {
  auto& cache = stavi::detail::TlArena::get().mirror_cache();
  if (auto it = cache.find(f.id()); it != cache.end())
    return TlFormula::from_id(it->second);
  TlFormula r;
  switch (f.kind()) {
    case TlKind::False:
    case TlKind::True:
    case TlKind::Atom: r = f; break;
    case TlKind::Not: r = lnot(mirror(f.lhs())); break;
    case TlKind::And: r = land(mirror(f.lhs()), mirror(f.rhs())); break;
    case TlKind::Or: r = lor(mirror(f.lhs()), mirror(f.rhs())); break;
    case TlKind::Until: r = since(mirror(f.lhs()), mirror(f.rhs())); break;
    case TlKind::Since: r = until(mirror(f.lhs()), mirror(f.rhs())); break;
    case TlKind::UntilS: r = since_s(mirror(f.lhs()), mirror(f.rhs())); break;
    case TlKind::SinceS: r = until_s(mirror(f.lhs()), mirror(f.rhs())); break;
  }
  cache.emplace(f.id(), r.id());
  return r;
}

inline bool is_binary(TlKind k) {
  return k == TlKind::And || k == TlKind::Or || k == TlKind::Until ||
         k == TlKind::Since || k == TlKind::UntilS || k == TlKind::SinceS;
}

// Number of distinct subformulas (the size of the shared DAG).
inline std::size_t dag_size(TlFormula f) {
  std::unordered_set<std::uint32_t> seen;
  std::vector<TlFormula> stack{f};
  while (!stack.empty()) {
    TlFormula g = stack.back();
    stack.pop_back();
    if (!seen.insert(g.id()).second) continue;
    if (g.kind() == TlKind::Not) stack.push_back(g.lhs());
    if (is_binary(g.kind())) {
      stack.push_back(g.lhs());
      stack.push_back(g.rhs());
    }
  }
  return seen.size();
}

// Size of the formula written out as a tree; saturates at UINT64_MAX.
inline std::uint64_t tree_size(TlFormula f) {
  std::unordered_map<std::uint32_t, std::uint64_t> memo;
  std::function<std::uint64_t(TlFormula)> go = [&](TlFormula g) {
    if (auto it = memo.find(g.id()); it != memo.end()) return it->second;
    std::uint64_t s = 1;
    auto add = [&s](std::uint64_t x) {
      s = (s > UINT64_MAX - x) ? UINT64_MAX : s + x;
    };
    if (g.kind() == TlKind::Not) add(go(g.lhs()));
    if (is_binary(g.kind())) {
      add(go(g.lhs()));
      add(go(g.rhs()));
    }
    memo.emplace(g.id(), s);
    return s;
  };
  return go(f);
}

inline std::vector<std::string> atoms_of(TlFormula f) {
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::string> out;
  std::vector<TlFormula> stack{f};
  while (!stack.empty()) {
    TlFormula g = stack.back();
    stack.pop_back();
    if (!seen.insert(g.id()).second) continue;
    if (g.kind() == TlKind::Atom) out.push_back(g.atom_name());
    if (g.kind() == TlKind::Not) stack.push_back(g.lhs());
    if (is_binary(g.kind())) {
      stack.push_back(g.lhs());
      stack.push_back(g.rhs());
    }
  }
  return out;
}

inline const char* keyword(TlKind k) {
  switch (k) {
    case TlKind::Not: return "!";
    case TlKind::And: return "&";
    case TlKind::Or: return "|";
    case TlKind::Until: return "U";
    case TlKind::Since: return "S";
    case TlKind::UntilS: return "Us";
    case TlKind::SinceS: return "Ss";
    default: return "";
  }
}

inline void print(std::ostream& os, TlFormula f) {
  switch (f.kind()) {
    case TlKind::True: os << "TRUE"; return;
    case TlKind::False: os << "FALSE"; return;
    case TlKind::Atom: os << f.atom_name(); return;
    case TlKind::Not:
      os << "(! ";
      print(os, f.lhs());
      os << ')';
      return;
    default:
      os << '(' << keyword(f.kind()) << ' ';
      print(os, f.lhs());
      os << ' ';
      print(os, f.rhs());
      os << ')';
  }
}

}  // namespace stavi::tl

namespace stavi {

inline std::string print_tl(TlFormula f) {
  std::ostringstream os;
  tl::print(os, f);
  return os.str();
}

}  // namespace stavi
