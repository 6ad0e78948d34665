#pragma once

// Independent checks: a brute-force FO evaluator for finite chains, FO truth
// tables of the modalities, seeded generators and the default model corpus.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stavi/expansion.hpp"
#include "stavi/fo.hpp"
#include "stavi/model.hpp"
#include "stavi/partition.hpp"
#include "stavi/semantics.hpp"
#include "stavi/tl.hpp"

namespace stavi {

// ---------------------------------------------------------------------------
// Brute force over finite chains. Deliberately written without any of the
// machinery in semantics.hpp: points are plain indices.

class NotFiniteChain : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool brute_rec(const GappedChain& m, const FoFormula& f,
                      std::map<std::string, std::size_t>& env) {
  switch (f.kind()) {
    case FoKind::Less:
      return env.at(f.var()) < env.at(f.var2());
    case FoKind::Equal:
      return env.at(f.var()) == env.at(f.var2());
    case FoKind::Pred:
      return m[env.at(f.var())].label.count(f.atom()) > 0;
    case FoKind::Not:
      return !brute_rec(m, f.sub(0), env);
    case FoKind::And:
      return brute_rec(m, f.sub(0), env) && brute_rec(m, f.sub(1), env);
    case FoKind::Or:
      return brute_rec(m, f.sub(0), env) || brute_rec(m, f.sub(1), env);
    case FoKind::Exists:
    case FoKind::Forall: {
      const bool want = f.kind() == FoKind::Exists;
      auto old = env.find(f.var());
      std::optional<std::size_t> saved;
      if (old != env.end()) saved = old->second;
      bool result = !want;
      for (std::size_t i = 0; i < m.size(); ++i) {
        env[f.var()] = i;
        if (brute_rec(m, f.sub(0), env) == want) {
          result = want;
          break;
        }
      }
      if (saved)
        env[f.var()] = *saved;
      else
        env.erase(f.var());
      return result;
    }
  }
  return false;
}

}  // namespace detail

inline bool brute_fo(const GappedChain& m, const FoFormula& f,
                     const std::map<std::string, std::size_t>& a) {
  if (m.size() == 0 || !m.is_finite_chain())
    throw NotFiniteChain("brute_fo needs a non-empty finite chain");
  for (const auto& v : free_vars(f))
    if (!a.count(v)) throw std::invalid_argument("unassigned free variable '" + v + "'");
  auto env = a;
  return detail::brute_rec(m, f, env);
}

// ---------------------------------------------------------------------------
// FO truth tables. Operands are functions from a variable name to a formula
// with that variable free.

using FoOperand = std::function<FoFormula(const std::string&)>;

inline FoOperand fo_atom(const std::string& name) {
  return [name](const std::string& v) { return FoFormula::pred(name, v); };
}

// Reverses the order: every x<y becomes y<x.
inline FoFormula fo_mirror(const FoFormula& f) {
  switch (f.kind()) {
    case FoKind::Less: return FoFormula::less(f.var2(), f.var());
    case FoKind::Equal:
    case FoKind::Pred: return f;
    case FoKind::Not: return FoFormula::lnot(fo_mirror(f.sub(0)));
    case FoKind::And: return FoFormula::land(fo_mirror(f.sub(0)), fo_mirror(f.sub(1)));
    case FoKind::Or: return FoFormula::lor(fo_mirror(f.sub(0)), fo_mirror(f.sub(1)));
    case FoKind::Exists: return FoFormula::exists(f.var(), fo_mirror(f.sub(0)));
    case FoKind::Forall: return FoFormula::forall(f.var(), fo_mirror(f.sub(0)));
  }
  return f;
}

namespace fo_tt {

using F = FoFormula;

// The operand read on the reversed order, so that mirroring a formula
// built from it leaves the operand itself unchanged.
inline FoOperand mirror_op(const FoOperand& p) {
  return [p](const std::string& v) { return fo_mirror(p(v)); };
}

inline std::string fresh() {
  static std::uint64_t counter = 0;
  return "v" + std::to_string(++counter);
}

inline F between(const std::string& a, const std::string& z, const std::string& b) {
  return F::land(F::less(a, z), F::less(z, b));
}

// x < y and p on (x,y).
inline F along(const std::string& x, const std::string& y, const FoOperand& p) {
  auto z = fresh();
  return F::forall(z, F::implies(between(x, z, y), p(z)));
}

inline F until(const std::string& x, const FoOperand& p, const FoOperand& q) {
  auto y = fresh();
  return F::exists(y, F::land(F::less(x, y), F::land(q(y), along(x, y, p))));
}

inline F since(const std::string& x, const FoOperand& p, const FoOperand& q) {
  auto y = fresh();
  return F::exists(y, F::land(F::less(y, x), F::land(q(y), along(y, x, p))));
}

// The cut C = {y : y <= x or p on (x,y]} is a proper gap with p failing
// after it: C is not everything, has no maximum, and its complement has no
// minimum.
inline F gamma_plus(const std::string& x, const FoOperand& p) {
  auto in_c = [&](const std::string& y) {
    auto z = fresh();
    return F::lor(F::lnot(F::less(x, y)),
                  F::forall(z, F::implies(F::land(F::less(x, z), F::lnot(F::less(y, z))),
                                          p(z))));
  };
  auto y1 = fresh(), m1 = fresh(), y2 = fresh(), m2 = fresh(), y3 = fresh();
  F not_all = F::exists(y1, F::lnot(in_c(y1)));
  F no_max = F::lnot(F::exists(
      m1, F::land(in_c(m1), F::forall(y2, F::implies(F::less(m1, y2), F::lnot(in_c(y2)))))));
  F no_min = F::lnot(F::exists(
      m2, F::land(F::lnot(in_c(m2)), F::forall(y3, F::implies(F::less(y3, m2), in_c(y3))))));
  return F::land(not_all, F::land(no_max, no_min));
}

inline F gamma_minus(const std::string& x, const FoOperand& p) {
  return fo_mirror(gamma_plus(x, mirror_op(p)));
}

// gamma+(p) and some later non-p point x1 such that q holds after every
// non-p point y in (x, x1) up to x1.
inline F until_s(const std::string& x, const FoOperand& p, const FoOperand& q) {
  auto x1 = fresh(), y = fresh(), z = fresh();
  F inner = F::forall(
      y, F::implies(F::land(between(x, y, x1), F::lnot(p(y))),
                    F::forall(z, F::implies(between(y, z, x1), q(z)))));
  return F::land(gamma_plus(x, p),
                 F::exists(x1, F::land(F::less(x, x1), F::land(F::lnot(p(x1)), inner))));
}

inline F since_s(const std::string& x, const FoOperand& p, const FoOperand& q) {
  return fo_mirror(until_s(x, mirror_op(p), mirror_op(q)));
}

inline F box(const std::string& x, const FoOperand& p) {
  auto y = fresh();
  return F::forall(y, F::implies(F::less(x, y), p(y)));
}

inline F box_past(const std::string& x, const FoOperand& p) {
  return fo_mirror(box(x, mirror_op(p)));
}

// p holds arbitrarily close after x.
inline F k_plus(const std::string& x, const FoOperand& p) {
  auto y = fresh(), z = fresh();
  return F::forall(y, F::implies(F::less(x, y), F::exists(z, F::land(between(x, z, y), p(z)))));
}

inline F k_minus(const std::string& x, const FoOperand& p) {
  return fo_mirror(k_plus(x, mirror_op(p)));
}

}  // namespace fo_tt

// ---------------------------------------------------------------------------
// Generators.

struct FuzzConfig {
  std::size_t max_quantifier_depth = 3;
  std::size_t max_atoms = 2;
  std::size_t max_regions = 7;
  std::size_t max_points = 4;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;

  void check() const {
    if (!max_quantifier_depth || !max_atoms || !max_regions || !max_points || !trials)
      throw std::invalid_argument("fuzz configuration counts must be positive");
  }
};

// splitmix64; fully specified so sequences are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return n ? static_cast<std::size_t>(next() % n) : 0; }
  bool chance(unsigned percent) { return below(100) < percent; }

 private:
  std::uint64_t state_;
};

inline std::vector<std::string> atom_names(std::size_t n) {
  static const char* names[] = {"P", "Q", "R", "S", "T", "U", "V", "W"};
  if (n > 8) throw std::invalid_argument("at most 8 atoms supported");
  return std::vector<std::string>(names, names + n);
}

namespace detail {

inline FoFormula gen_fo_rec(const FuzzConfig& cfg, Rng& rng, std::size_t depth,
                            std::vector<std::string>& scope, std::size_t budget) {
  const auto atoms = atom_names(cfg.max_atoms);
  auto pick_var = [&] { return scope[rng.below(scope.size())]; };
  auto leaf = [&]() -> FoFormula {
    switch (rng.below(4)) {
      case 0: return FoFormula::less(pick_var(), pick_var());
      case 1: return FoFormula::equal(pick_var(), pick_var());
      default: return FoFormula::pred(atoms[rng.below(atoms.size())], pick_var());
    }
  };
  if (budget <= 1) return leaf();
  const std::size_t choice = rng.below(depth < cfg.max_quantifier_depth ? 8 : 5);
  switch (choice) {
    case 0: return leaf();
    case 1: return FoFormula::lnot(gen_fo_rec(cfg, rng, depth, scope, budget - 1));
    case 2:
    case 3: {
      auto a = gen_fo_rec(cfg, rng, depth, scope, budget / 2);
      auto b = gen_fo_rec(cfg, rng, depth, scope, budget / 2);
      return choice == 2 ? FoFormula::land(a, b) : FoFormula::lor(a, b);
    }
    case 4: return leaf();
    default: {
      std::string v = "x" + std::to_string(depth + 1);
      scope.push_back(v);
      auto body = gen_fo_rec(cfg, rng, depth + 1, scope, budget - 1);
      scope.pop_back();
      return choice == 7 ? FoFormula::forall(v, body) : FoFormula::exists(v, body);
    }
  }
}

inline TlFormula gen_tl_rec(const FuzzConfig& cfg, Rng& rng, std::size_t depth) {
  const auto atoms = atom_names(cfg.max_atoms);
  if (depth == 0 || rng.chance(25)) {
    std::size_t c = rng.below(atoms.size() + 1);
    return c == atoms.size() ? tl::top() : tl::atom(atoms[c]);
  }
  switch (rng.below(8)) {
    case 0: return tl::lnot(gen_tl_rec(cfg, rng, depth - 1));
    case 1: return tl::land(gen_tl_rec(cfg, rng, depth - 1), gen_tl_rec(cfg, rng, depth - 1));
    case 2: return tl::lor(gen_tl_rec(cfg, rng, depth - 1), gen_tl_rec(cfg, rng, depth - 1));
    case 3: return tl::until(gen_tl_rec(cfg, rng, depth - 1), gen_tl_rec(cfg, rng, depth - 1));
    case 4: return tl::since(gen_tl_rec(cfg, rng, depth - 1), gen_tl_rec(cfg, rng, depth - 1));
    case 5: return tl::until_s(gen_tl_rec(cfg, rng, depth - 1), gen_tl_rec(cfg, rng, depth - 1));
    case 6: return tl::since_s(gen_tl_rec(cfg, rng, depth - 1), gen_tl_rec(cfg, rng, depth - 1));
    default: return tl::lnot(gen_tl_rec(cfg, rng, depth - 1));
  }
}

}  // namespace detail

// FO formula whose only free variable is `x`, within the quantifier-depth
// and atom bounds.
inline FoFormula gen_fo(const FuzzConfig& cfg, Rng& rng, std::size_t budget = 12) {
  for (;;) {
    std::vector<std::string> scope{"x"};
    auto f = detail::gen_fo_rec(cfg, rng, 0, scope, budget);
    auto fv = free_vars(f);
    if (fv.size() == 1 && *fv.begin() == "x") return f;
  }
}

inline TlFormula gen_tl(const FuzzConfig& cfg, Rng& rng, std::size_t depth = 3) {
  return detail::gen_tl_rec(cfg, rng, depth);
}

inline std::set<std::string> gen_label(const FuzzConfig& cfg, Rng& rng) {
  std::set<std::string> l;
  for (const auto& a : atom_names(cfg.max_atoms))
    if (rng.chance(50)) l.insert(a);
  return l;
}

// A valid model. Dense neighbours are always separated by a gap; with
// `gapped` at least one dense-gap-dense triple is present.
inline GappedChain gen_model(const FuzzConfig& cfg, Rng& rng, bool gapped) {
  if (gapped && cfg.max_regions < 3)
    throw std::invalid_argument("gapped models need at least 3 regions");
  for (;;) {
    std::vector<Region> rs;
    if (!gapped) {
      std::size_t n = 1 + rng.below(cfg.max_points);
      for (std::size_t i = 0; i < n; ++i) rs.push_back(Region::point(gen_label(cfg, rng)));
      return GappedChain(std::move(rs));
    }
    std::size_t items = 2 + rng.below(cfg.max_regions - 1);
    for (std::size_t i = 0; i < items; ++i) {
      bool dense = rng.chance(60);
      if (dense && !rs.empty() && rs.back().is_dense()) rs.push_back(Region::gap());
      rs.push_back(dense ? Region::dense(gen_label(cfg, rng)) : Region::point(gen_label(cfg, rng)));
    }
    GappedChain m(std::move(rs));
    if (m.size() <= cfg.max_regions && !m.gaps().empty() && !validate(m)) return m;
  }
}

// Point predicate over the configured atoms: a literal, a conjunction of
// literals, True, or occasionally a temporal formula.
inline PointPredicate gen_point_predicate(const FuzzConfig& cfg, Rng& rng) {
  const auto atoms = atom_names(cfg.max_atoms);
  auto literal = [&] {
    TlFormula a = tl::atom(atoms[rng.below(atoms.size())]);
    return rng.chance(40) ? tl::lnot(a) : a;
  };
  switch (rng.below(8)) {
    case 0: return tl::top();
    case 1: return tl::land(literal(), literal());
    case 2: return gen_tl(cfg, rng, 2);
    default: return literal();
  }
}

inline PartitionExpression gen_pe(const FuzzConfig& cfg, Rng& rng, std::size_t max_slots = 3) {
  std::size_t k = 1 + rng.below(max_slots);
  std::vector<PointPredicate> d;
  std::vector<bool> o;
  for (std::size_t i = 0; i < k; ++i) {
    d.push_back(gen_point_predicate(cfg, rng));
    o.push_back(rng.chance(30));
  }
  return PartitionExpression(d, o);
}

inline Basic gen_basic(const FuzzConfig& cfg, Rng& rng, const std::vector<std::string>& vars) {
  auto v = [&] { return vars[rng.below(vars.size())]; };
  switch (rng.below(10)) {
    case 0: return {BasicKind::VarEq, v(), v(), {}};
    case 1: return {BasicKind::VarLess, v(), v(), {}};
    case 2: return {BasicKind::OnRightRay, v(), {}, gen_pe(cfg, rng)};
    case 3: return {BasicKind::OnLeftRay, v(), {}, gen_pe(cfg, rng)};
    case 4: return {BasicKind::OnLine, {}, {}, gen_pe(cfg, rng, 2)};
    default: return {BasicKind::OnClosed, v(), v(), gen_pe(cfg, rng)};
  }
}

// Positive combination of random basics over `vars`.
inline SimpleFormula gen_simple(const FuzzConfig& cfg, Rng& rng,
                                const std::vector<std::string>& vars, std::size_t depth = 2) {
  if (depth == 0 || rng.chance(35)) return SimpleFormula::leaf(gen_basic(cfg, rng, vars));
  std::size_t n = 2 + rng.below(2);
  std::vector<SimpleFormula> cs;
  for (std::size_t i = 0; i < n; ++i) cs.push_back(gen_simple(cfg, rng, vars, depth - 1));
  return rng.chance(50) ? SimpleFormula::land(cs) : SimpleFormula::lor(cs);
}

// Assignments of `vars` realizing every order type on the model.
inline std::vector<Assignment> all_assignments(const GappedChain& m,
                                               const std::vector<std::string>& vars) {
  std::vector<Assignment> out;
  Assignment cur;
  std::vector<Position> used;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == vars.size()) {
      out.push_back(cur);
      return;
    }
    for (const auto& p : witness_positions(m, used)) {
      cur[vars[i]] = p;
      used.push_back(p);
      go(i + 1);
      used.pop_back();
    }
    cur.erase(vars[i]);
  };
  go(0);
  return out;
}

// Every finite chain with 1..max_points points over the first max_atoms
// atoms, followed by `gapped` seeded gapped models.
inline std::vector<GappedChain> default_corpus(std::size_t max_points = 4,
                                               std::size_t max_atoms = 2,
                                               std::size_t gapped = 200,
                                               std::uint64_t seed = 2024,
                                               std::size_t max_regions = 7) {
  std::vector<GappedChain> out;
  const auto atoms = atom_names(max_atoms);
  const std::size_t labels = std::size_t{1} << max_atoms;
  for (std::size_t n = 1; n <= max_points; ++n) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= labels;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<Region> rs;
      std::size_t c = code;
      for (std::size_t i = 0; i < n; ++i) {
        std::set<std::string> l;
        for (std::size_t a = 0; a < max_atoms; ++a)
          if ((c % labels) >> a & 1) l.insert(atoms[a]);
        c /= labels;
        rs.push_back(Region::point(std::move(l)));
      }
      out.emplace_back(std::move(rs));
    }
  }
  FuzzConfig cfg;
  cfg.max_atoms = max_atoms;
  cfg.max_regions = max_regions;
  Rng rng(seed);
  for (std::size_t i = 0; i < gapped; ++i) out.push_back(gen_model(cfg, rng, true));
  return out;
}

// ---------------------------------------------------------------------------
// Equivalence of a one-variable FO formula and a TL formula.

struct Verdict {
  bool pass = true;
  std::size_t model = 0;
  std::size_t region = 0;
  bool fo_value = false;
  bool tl_value = false;

  std::string describe(const std::vector<GappedChain>& corpus) const {
    if (pass) return "pass";
    return "model " + std::to_string(model) + " [" + print_model(corpus[model]) +
           "] region " + std::to_string(region) + ": fo=" + (fo_value ? "1" : "0") +
           " tl=" + (tl_value ? "1" : "0");
  }
};

inline Verdict check_equiv(const FoFormula& f, TlFormula g,
                           const std::vector<GappedChain>& corpus) {
  if (free_vars(f).size() > 1)
    throw std::invalid_argument("check_equiv needs at most one free variable");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto fo = eval_fo_regions(corpus[i], f);
    TlEvaluator ev(corpus[i]);
    const auto& bits = ev.bits(g);
    for (std::size_t r = 0; r < corpus[i].size(); ++r) {
      if (corpus[i][r].is_gap()) continue;
      bool a = fo.at(r), b = bits[r] != 0;
      if (a != b) return {false, i, r, a, b};
    }
  }
  return {};
}

}  // namespace stavi
