#pragma once

// FO to TL: first-order formulas become simple formulas by structural
// induction, and simple formulas with at most one free variable become TL
// formulas.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "stavi/fo.hpp"
#include "stavi/negation.hpp"
#include "stavi/partition.hpp"

namespace stavi {

class FreeVariableError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline TlFormula simple_to_tl(const SimpleFormula& f) {
  if (f.vars().size() > 1) throw FreeVariableError("simple formula has more than one free variable");
  switch (f.kind()) {
    case SimpleKind::True: return tl::top();
    case SimpleKind::False: return tl::bottom();
    case SimpleKind::Leaf: return basic_to_tl(f.basic());
    case SimpleKind::And:
    case SimpleKind::Or: {
      std::vector<TlFormula> cs;
      for (const auto& c : f.children()) cs.push_back(simple_to_tl(c));
      return f.kind() == SimpleKind::And ? tl::land(cs) : tl::lor(cs);
    }
  }
  return tl::bottom();
}

namespace detail {

// A formula with at most one free variable is replaced by a single TL
// label, which keeps later normal forms small.
inline SimpleFormula collapse(const SimpleFormula& f) {
  const auto& vs = f.vars();
  if (vs.size() > 1 || f.kind() == SimpleKind::Leaf) return f;
  const TlFormula t = prop::simplify(simple_to_tl(f));
  if (t.is_false()) return SimpleFormula::bottom();
  if (vs.empty()) return t.is_true() ? SimpleFormula::top() : simple::sentence(t);
  return simple::at(t, vs[0]);
}

// exists z f with the quantifier pushed through disjunctions and past
// conjuncts that do not mention z.
inline SimpleFormula exists_mini(const SimpleFormula& f, const std::string& z) {
  if (!std::binary_search(f.vars().begin(), f.vars().end(), z)) return f;
  if (f.kind() == SimpleKind::Or) {
    std::vector<SimpleFormula> cs;
    for (const auto& c : f.children()) cs.push_back(collapse(exists_mini(c, z)));
    return SimpleFormula::lor(cs);
  }
  if (f.kind() == SimpleKind::And) {
    std::vector<SimpleFormula> rest, with;
    for (const auto& c : f.children())
      (std::binary_search(c.vars().begin(), c.vars().end(), z) ? with : rest).push_back(c);
    if (with.size() == 1 && with[0].kind() == SimpleKind::Or) {
      rest.push_back(exists_mini(with[0], z));
      return SimpleFormula::land(rest);
    }
    // Distribute the conjuncts mentioning z when that yields few
    // disjuncts, so that each one is eliminated on its own.
    std::size_t terms = 1;
    for (const auto& c : with) terms *= c.kind() == SimpleKind::Or ? c.children().size() : 1;
    if (terms > 1 && terms <= 64) {
      std::vector<SimpleFormula> dnf{SimpleFormula::top()};
      for (const auto& c : with) {
        std::vector<SimpleFormula> next;
        const auto opts = c.kind() == SimpleKind::Or ? c.children() : std::vector<SimpleFormula>{c};
        for (const auto& d : dnf)
          for (const auto& o : opts) next.push_back(SimpleFormula::land(d, o));
        dnf.swap(next);
      }
      rest.push_back(exists_mini(SimpleFormula::lor(dnf), z));
      return SimpleFormula::land(rest);
    }
    if (!rest.empty()) {
      rest.push_back(collapse(exists_simple(SimpleFormula::land(with), z)));
      return SimpleFormula::land(rest);
    }
  }
  return exists_simple(f, z);
}

struct FoToSimple {
  std::map<std::string, std::string> names;
  std::size_t fresh = 0;

  std::string name(const std::string& v) const {
    auto it = names.find(v);
    return it == names.end() ? v : it->second;
  }

  // exists v sub when exists_form, otherwise forall v sub; negated when neg.
  // A universal becomes not exists not, and negations meet in the
  // formula before any simple formula is negated.
  SimpleFormula bind(const FoFormula& f, bool exists_form, bool neg) {
    const std::string v = f.var();
    const std::string inner = "%v" + std::to_string(++fresh);
    auto saved = names.find(v) == names.end() ? std::optional<std::string>() : names[v];
    names[v] = inner;
    SimpleFormula body = run(f.sub(), !exists_form);
    if (saved) names[v] = *saved;
    else names.erase(v);
    SimpleFormula r = collapse(exists_mini(body, inner));
    return exists_form == neg ? collapse(negate_simple(r)) : r;
  }

  SimpleFormula leaf(SimpleFormula f, bool neg) { return neg ? collapse(negate_simple(f)) : f; }

  // f, or its negation when neg
  SimpleFormula run(const FoFormula& f, bool neg = false) {
    switch (f.kind()) {
      case FoKind::Less: return leaf(simple::var_less(name(f.var()), name(f.var2())), neg);
      case FoKind::Equal: return leaf(simple::var_eq(name(f.var()), name(f.var2())), neg);
      case FoKind::Pred: {
        const TlFormula p = tl::atom(f.atom());
        return simple::at(neg ? tl::lnot(p) : p, name(f.var()));
      }
      case FoKind::Not: return run(f.sub(), !neg);
      case FoKind::And:
      case FoKind::Or: {
        const SimpleFormula l = run(f.sub(0), neg), r = run(f.sub(1), neg);
        return collapse((f.kind() == FoKind::And) != neg ? SimpleFormula::land(l, r)
                                                         : SimpleFormula::lor(l, r));
      }
      case FoKind::Exists: return bind(f, true, neg);
      case FoKind::Forall: return bind(f, false, neg);
    }
    return SimpleFormula::bottom();
  }
};

}  // namespace detail

// Equivalent simple formula; free variables keep their names.
inline SimpleFormula fo_to_simple(const FoFormula& f) {
  detail::FoToSimple t;
  return t.run(f);
}

inline TlFormula translate(const FoFormula& f) {
  const auto fv = free_vars(f);
  if (fv.size() != 1)
    throw FreeVariableError("translate needs exactly one free variable, got " +
                            std::to_string(fv.size()));
  return simple_to_tl(fo_to_simple(f));
}

}  // namespace stavi
