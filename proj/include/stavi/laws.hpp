#pragma once

// Property checks run by the fuzz front end and the acceptance suite. Each
// law draws its inputs from a seeded Rng and compares an implementation
// against an independent reading, recording the first counterexample.

#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stavi/negation.hpp"
#include "stavi/oracle.hpp"
#include "stavi/translate.hpp"

namespace stavi {

struct LawReport {
  std::string law;
  std::size_t trials = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string counterexample;
  std::vector<std::pair<std::string, std::size_t>> stats;

  bool pass() const { return failures == 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) counterexample = what;
  }
  void count(const std::string& key) {
    for (auto& [k, x] : stats)
      if (k == key) {
        ++x;
        return;
      }
    stats.emplace_back(key, 1);
  }
  void stat_max(const std::string& key, std::size_t v) {
    for (auto& [k, x] : stats)
      if (k == key) {
        x = std::max(x, v);
        return;
      }
    stats.emplace_back(key, v);
  }

  // One "key value" pair per line.
  std::string str() const {
    std::string out = "law " + law + "\ntrials " + std::to_string(trials) + "\nchecks " +
                      std::to_string(checks) + "\n";
    for (const auto& [k, v] : stats) out += k + " " + std::to_string(v) + "\n";
    out += "failures " + std::to_string(failures) + "\n";
    if (failures) out += "counterexample " + counterexample + "\n";
    return out;
  }
};

// FO reading of a TL formula with free variable x.
inline FoFormula tl_reading(TlFormula f, const std::string& x) {
  auto op = [](TlFormula g) -> FoOperand {
    return [g](const std::string& v) { return tl_reading(g, v); };
  };
  switch (f.kind()) {
    case TlKind::False: return FoFormula::lnot(FoFormula::equal(x, x));
    case TlKind::True: return FoFormula::equal(x, x);
    case TlKind::Atom: return FoFormula::pred(f.atom_name(), x);
    case TlKind::Not: return FoFormula::lnot(tl_reading(f.lhs(), x));
    case TlKind::And: return FoFormula::land(tl_reading(f.lhs(), x), tl_reading(f.rhs(), x));
    case TlKind::Or: return FoFormula::lor(tl_reading(f.lhs(), x), tl_reading(f.rhs(), x));
    case TlKind::Until: return fo_tt::until(x, op(f.lhs()), op(f.rhs()));
    case TlKind::Since: return fo_tt::since(x, op(f.lhs()), op(f.rhs()));
    case TlKind::UntilS: return fo_tt::until_s(x, op(f.lhs()), op(f.rhs()));
    case TlKind::SinceS: return fo_tt::since_s(x, op(f.lhs()), op(f.rhs()));
  }
  return FoFormula::equal(x, x);
}

// Distinct subformulas of f with the given kinds.
inline std::vector<TlFormula> subformulas(TlFormula f, const std::set<TlKind>& kinds) {
  std::vector<TlFormula> out;
  std::set<std::uint32_t> seen;
  std::function<void(TlFormula)> go = [&](TlFormula g) {
    if (!seen.insert(g.id()).second) return;
    if (kinds.count(g.kind())) out.push_back(g);
    if (g.kind() == TlKind::Not) go(g.lhs());
    if (tl::is_binary(g.kind())) {
      go(g.lhs());
      go(g.rhs());
    }
  };
  go(f);
  return out;
}

// ---------------------------------------------------------------------------
// Direct readings of the derived modalities, region by region.

namespace direct {

// p at every later position.
inline TruthMap box(TlEvaluator& ev, TlFormula p) {
  const auto& m = ev.model();
  const auto& pb = ev.bits(p);
  std::vector<std::optional<bool>> out(m.size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].is_gap()) continue;
    bool ok = !m[r].is_dense() || pb[r];
    for (std::size_t s = r + 1; s < m.size(); ++s)
      if (!m[s].is_gap() && !pb[s]) ok = false;
    out[r] = ok;
  }
  return TruthMap(std::move(out));
}

// p holds arbitrarily close after the position: inside a dense region this
// is p on the region; a point looks at its right neighbour, and the last
// point satisfies it vacuously.
inline TruthMap k_plus(TlEvaluator& ev, TlFormula p) {
  const auto& m = ev.model();
  const auto& pb = ev.bits(p);
  std::vector<std::optional<bool>> out(m.size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].is_gap()) continue;
    if (m[r].is_dense()) out[r] = pb[r] != 0;
    else if (r + 1 == m.size()) out[r] = true;
    else out[r] = m[r + 1].is_dense() && pb[r + 1];
  }
  return TruthMap(std::move(out));
}

// Some gap g after the position has p1 & p2 everywhere between and p1
// failing right after g.
inline TruthMap until_gap(TlEvaluator& ev, TlFormula p1, TlFormula p2) {
  const auto& m = ev.model();
  const auto& b1 = ev.bits(p1);
  const auto& b12 = ev.bits(tl::land(p1, p2));
  std::vector<std::optional<bool>> out(m.size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].is_gap()) continue;
    bool found = false;
    bool ok = !m[r].is_dense() || b12[r];
    for (std::size_t g = r + 1; ok && g < m.size() && !found; ++g) {
      if (m[g].is_gap()) found = !b1[g + 1];
      else ok = b12[g] != 0;
    }
    out[r] = found;
  }
  return TruthMap(std::move(out));
}

// Some t' > t with [t, t'] split into a p-piece followed by a q-piece.
inline TruthMap until_star(TlEvaluator& ev, TlFormula p, TlFormula q) {
  const auto& m = ev.model();
  const PartitionExpression pe({p, q}, {false, false});
  std::vector<std::optional<bool>> out(m.size());
  for (const auto& pos : enumerate_sample_positions(m, 1)) {
    bool any = false;
    for (const auto& t : witness_positions(m, {pos}))
      if (compare(m, pos, t) < 0) any = any || eval_pe(ev, IntervalSpec::closed(pos, t), pe);
    out[pos.region] = any;
  }
  return TruthMap(std::move(out));
}

}  // namespace direct

inline TruthMap mirrored(const GappedChain& m,
                         const std::function<TruthMap(TlEvaluator&)>& f) {
  TlEvaluator ev(reverse(m));
  auto v = f(ev).values();
  std::reverse(v.begin(), v.end());
  return TruthMap(std::move(v));
}

// ---------------------------------------------------------------------------
// Laws.

namespace detail {

inline std::string at_model(const GappedChain& m) { return " on [" + print_model(m) + "]"; }

inline std::string first_difference(const TruthMap& a, const TruthMap& b) {
  return "(" + a.str() + " vs " + b.str() + ")";
}

inline std::vector<std::string> without(const std::vector<std::string>& vs, const std::string& z) {
  std::vector<std::string> out;
  for (const auto& v : vs)
    if (v != z) out.push_back(v);
  return out;
}

inline bool exists_witness(TlEvaluator& ev, const SimpleFormula& f, Assignment asg,
                           const std::string& z) {
  std::vector<Position> used;
  for (const auto& [v, p] : asg) used.push_back(p);
  for (const auto& p : witness_positions(ev.model(), used)) {
    asg[z] = p;
    if (eval_simple(ev, f, asg)) return true;
  }
  return false;
}

}  // namespace detail

// eval_fo(f) == eval_tl(translate(f)) at every region of every model.
inline LawReport law_translate(const FuzzConfig& cfg, const std::vector<GappedChain>& corpus) {
  LawReport rep{"translate"};
  Rng rng(cfg.seed);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const auto f = gen_fo(cfg, rng);
    ++rep.trials;
    const auto g = translate(f);
    rep.stat_max("max_output_nodes", tl::dag_size(g));
    const auto v = check_equiv(f, g, corpus);
    rep.checks += corpus.size();
    if (!v.pass) rep.fail(print_fo(f) + " => " + print_tl(g) + ": " + v.describe(corpus));
  }
  return rep;
}

// negate_simple is structurally simple and complements its input at every
// assignment. Each formula is checked on `models` seeded corpus models, or
// on all of them when `models` is 0.
inline LawReport law_negate(const FuzzConfig& cfg, const std::vector<GappedChain>& corpus,
                            std::size_t models = 4) {
  LawReport rep{"negate"};
  Rng rng(cfg.seed);
  const std::vector<std::string> vars{"a", "b"};
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const auto f = gen_simple(cfg, rng, vars);
    ++rep.trials;
    const auto g = negate_simple(f);
    if (!is_structurally_simple(g)) {
      rep.fail("not simple: " + print_simple(g));
      continue;
    }
    const std::size_t n = models ? models : corpus.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& m = corpus[models ? rng.below(corpus.size()) : i];
      TlEvaluator ev(m);
      for (const auto& asg : all_assignments(m, vars)) {
        ++rep.checks;
        if (eval_simple(ev, f, asg) == eval_simple(ev, g, asg)) {
          rep.fail(print_simple(f) + detail::at_model(m));
          i = n;
          break;
        }
      }
    }
  }
  return rep;
}

inline LawReport law_simple_to_normal(const FuzzConfig& cfg,
                                      const std::vector<GappedChain>& corpus) {
  LawReport rep{"simple_to_normal"};
  Rng rng(cfg.seed);
  const std::vector<std::string> vars{"a", "b", "c"};
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const auto f = gen_simple(cfg, rng, vars);
    ++rep.trials;
    const auto nfs = simple_to_normal(f);
    const auto& m = corpus[rng.below(corpus.size())];
    TlEvaluator ev(m);
    for (const auto& asg : all_assignments(m, vars)) {
      ++rep.checks;
      if (eval_simple(ev, f, asg) != eval_normal_set(ev, nfs, asg)) {
        rep.fail(print_simple(f) + detail::at_model(m));
        break;
      }
    }
  }
  return rep;
}

// Every interval bounded by infinities, gaps or sample positions.
inline std::vector<IntervalSpec> law_intervals(const GappedChain& m) {
  std::vector<Boundary> bs{MinusInfinity{}, PlusInfinity{}};
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].is_gap()) bs.push_back(AtGap{r});
    if (m[r].is_point()) bs.push_back(Position::at_point(r));
    if (m[r].is_dense()) {
      bs.push_back(Position::in_dense(r, Rational(1, 3)));
      bs.push_back(Position::in_dense(r, Rational(2, 3)));
    }
  }
  std::vector<IntervalSpec> out;
  for (const auto& a : bs)
    for (const auto& b : bs)
      for (int c = 0; c < 4; ++c) {
        const bool lc = c & 1, hc = c & 2;
        if ((lc && !std::holds_alternative<Position>(a)) ||
            (hc && !std::holds_alternative<Position>(b)))
          continue;
        out.push_back({a, b, lc, hc});
      }
  return out;
}

// The alternatives of pe_conjoin(p, q) jointly hold exactly where both
// p and q do.
inline LawReport law_pe_conjoin(const FuzzConfig& cfg, const std::vector<GappedChain>& corpus) {
  LawReport rep{"pe_conjoin"};
  Rng rng(cfg.seed);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const auto p = gen_pe(cfg, rng), q = gen_pe(cfg, rng);
    ++rep.trials;
    const auto rs = pe_conjoin(p, q);
    const auto& m = corpus[rng.below(corpus.size())];
    TlEvaluator ev(m);
    for (const auto& iv : law_intervals(m)) {
      ++rep.checks;
      const bool want = eval_pe(ev, iv, p) && eval_pe(ev, iv, q);
      bool got = false;
      for (const auto& r : rs) got = got || eval_pe(ev, iv, r);
      if (want != got) {
        rep.fail(print_pe(p) + " & " + print_pe(q) + detail::at_model(m));
        break;
      }
    }
  }
  return rep;
}

// exists_elim on the normal form and exists_simple on the formula both
// agree with a search for a witness.
inline std::pair<LawReport, LawReport> law_exists(const FuzzConfig& cfg,
                                                  const std::vector<GappedChain>& corpus) {
  LawReport elim{"exists_elim"}, simp{"exists_simple"};
  Rng rng(cfg.seed);
  const std::vector<std::string> vars{"a", "b", "c"};
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const auto f = gen_simple(cfg, rng, vars);
    const std::string z = vars[rng.below(vars.size())];
    ++elim.trials;
    ++simp.trials;
    const auto e = exists_elim(simple_to_normal(f), z);
    const auto es = exists_simple(f, z);
    if (!is_structurally_simple(es)) simp.fail("not simple: " + print_simple(es));
    const auto& m = corpus[rng.below(corpus.size())];
    TlEvaluator ev(m);
    bool elim_ok = true, simp_ok = true;
    for (const auto& asg : all_assignments(m, detail::without(vars, z))) {
      const bool want = detail::exists_witness(ev, f, asg, z);
      ++elim.checks;
      ++simp.checks;
      if (elim_ok && want != eval_normal_set(ev, e, asg)) {
        elim.fail("E " + z + " " + print_simple(f) + detail::at_model(m));
        elim_ok = false;
      }
      if (simp_ok && want != eval_simple(ev, es, asg)) {
        simp.fail("E " + z + " " + print_simple(f) + detail::at_model(m));
        simp_ok = false;
      }
    }
  }
  return {elim, simp};
}

// Operands for the modality checks: literals, True, a conjunction, and a
// temporal formula.
inline std::vector<TlFormula> expansion_operands() {
  const auto P = tl::atom("P"), Q = tl::atom("Q");
  return {P, Q, tl::lnot(P), tl::top(), tl::land(P, tl::lnot(Q)), tl::until(P, Q)};
}

// Every derived or gap modality against its direct reading and its FO
// truth table, and Until/Since against their FO truth tables.
inline void check_modalities(LawReport& rep, const GappedChain& m, TlFormula p, TlFormula q) {
  TlEvaluator ev(m);
  const FoOperand fp = [p](const std::string& v) { return tl_reading(p, v); };
  const FoOperand fq = [q](const std::string& v) { return tl_reading(q, v); };
  auto compare3 = [&](const std::string& name, TlFormula expansion,
                      const std::optional<TruthMap>& dir, const FoFormula& fo) {
    ++rep.checks;
    const TruthMap e = ev.truth(expansion);
    const TruthMap r = eval_fo_regions(m, fo);
    std::string what;
    if (dir && e != *dir) what = "expansion vs direct " + detail::first_difference(e, *dir);
    else if (e != r) what = "expansion vs FO " + detail::first_difference(e, r);
    if (!what.empty())
      rep.fail(name + "(" + print_tl(p) + ", " + print_tl(q) + ") " + what + detail::at_model(m));
  };
  auto us = [&](TlEvaluator& e) { return e.truth(tl::until_s(p, q)); };
  compare3("U", tl::until(p, q), std::nullopt, fo_tt::until("x", fp, fq));
  compare3("S", tl::since(p, q), std::nullopt, fo_tt::since("x", fp, fq));
  compare3("Us", tl::until_s(p, q), us(ev), fo_tt::until_s("x", fp, fq));
  compare3("Ss", tl::since_s(p, q),
           mirrored(m, [&](TlEvaluator& e) { return e.truth(tl::until_s(tl::mirror(p),
                                                                        tl::mirror(q))); }),
           fo_tt::since_s("x", fp, fq));
  compare3("GAMMA+", tl::gamma_plus(p), gamma_plus_direct(m, p), fo_tt::gamma_plus("x", fp));
  compare3("GAMMA-", tl::gamma_minus(p), gamma_minus_direct(m, p), fo_tt::gamma_minus("x", fp));
  compare3("KPLUS", tl::k_plus(p), direct::k_plus(ev, p), fo_tt::k_plus("x", fp));
  compare3("KMINUS", tl::k_minus(p),
           mirrored(m, [&](TlEvaluator& e) { return direct::k_plus(e, tl::mirror(p)); }),
           fo_tt::k_minus("x", fp));
  compare3("BOX", tl::box(p), direct::box(ev, p), fo_tt::box("x", fp));
  compare3("BOXP", tl::box_past(p),
           mirrored(m, [&](TlEvaluator& e) { return direct::box(e, tl::mirror(p)); }),
           fo_tt::box_past("x", fp));
  auto two = [&](const std::string& name, TlFormula expansion, const TruthMap& dir) {
    ++rep.checks;
    const TruthMap e = ev.truth(expansion);
    if (e != dir)
      rep.fail(name + "(" + print_tl(p) + ", " + print_tl(q) + ") expansion vs direct " +
               detail::first_difference(e, dir) + detail::at_model(m));
  };
  two("USTAR", tl::until_star(p, q), direct::until_star(ev, p, q));
  two("UGAP", tl::until_gap(p, q), direct::until_gap(ev, p, q));
  two("SGAP", tl::since_gap(p, q), mirrored(m, [&](TlEvaluator& e) {
        return direct::until_gap(e, tl::mirror(p), tl::mirror(q));
      }));
}

// The fixed operand grid over every corpus model, then cfg.trials random
// operand pairs each on one corpus model.
inline LawReport law_expansions(const FuzzConfig& cfg, const std::vector<GappedChain>& corpus,
                                bool grid = true) {
  LawReport rep{"expansions"};
  if (grid) {
    const auto ops = expansion_operands();
    for (const auto& m : corpus)
      for (const auto& p : ops)
        for (const auto& q : ops) {
          ++rep.trials;
          check_modalities(rep, m, p, q);
        }
  }
  Rng rng(cfg.seed);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const auto p = gen_point_predicate(cfg, rng), q = gen_point_predicate(cfg, rng);
    ++rep.trials;
    check_modalities(rep, corpus[rng.below(corpus.size())], p, q);
  }
  return rep;
}

// eval_fo against brute_fo on random finite chains at every point.
inline LawReport law_differential(const FuzzConfig& cfg) {
  LawReport rep{"differential"};
  Rng rng(cfg.seed);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const auto m = gen_model(cfg, rng, false);
    const auto f = gen_fo(cfg, rng);
    ++rep.trials;
    for (std::size_t i = 0; i < m.size(); ++i) {
      ++rep.checks;
      const bool a = eval_fo(m, f, {{"x", Position::at_point(i)}});
      const bool b = brute_fo(m, f, {{"x", i}});
      if (a != b) {
        rep.fail(print_fo(f) + detail::at_model(m) + " x=" + std::to_string(i));
        break;
      }
    }
  }
  return rep;
}

// build_F in the three terminal modes against eval_pe on the intervals
// each mode describes.
inline LawReport law_build_f(const FuzzConfig& cfg, const std::vector<GappedChain>& corpus) {
  LawReport rep{"build_f"};
  Rng rng(cfg.seed);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const auto pe = gen_pe(cfg, rng);
    const auto gp = gen_point_predicate(cfg, rng);
    ++rep.trials;
    const auto fb = build_F(pe, TerminalMode::bounded())[0];
    const auto fr = build_F(pe, TerminalMode::ray())[0];
    const auto fg = build_F(pe, TerminalMode::to_gap(gp))[0];
    for (const auto& m : corpus) {
      TlEvaluator ev(m);
      const auto gpd = gamma_plus_direct(m, gp);
      const auto& gpb = ev.bits(gp);
      for (const auto& pos : enumerate_sample_positions(m, 1)) {
        rep.checks += 3;
        bool bounded = false;
        for (const auto& q : witness_positions(m, {pos}))
          if (compare(m, pos, q) <= 0)
            bounded = bounded || eval_pe(ev, IntervalSpec::closed(pos, q), pe);
        const bool ray = eval_pe(ev, {pos, PlusInfinity{}, true, false}, pe);
        // the gap succeeding pos is the first one after which gp fails
        bool to_gap = false;
        if (gpd.at(pos.region))
          for (std::size_t g = pos.region + 1; g < m.size(); ++g)
            if (m[g].is_gap() && !gpb[g + 1]) {
              to_gap = eval_pe(ev, {pos, AtGap{g}, true, false}, pe);
              break;
            }
        if (to_gap) rep.count("to_gap_holds");
        std::string mode;
        if (ev.holds(fb, pos.region) != bounded) mode = "bounded";
        else if (ev.holds(fr, pos.region) != ray) mode = "ray";
        else if (ev.holds(fg, pos.region) != to_gap) mode = "to-gap " + print_tl(gp);
        if (!mode.empty()) {
          rep.fail(mode + " " + print_pe(pe) + detail::at_model(m) + " @" +
                   std::to_string(pos.region));
          goto next;
        }
      }
    }
  next:;
  }
  return rep;
}

// On chains of points every Until^s/Since^s subformula is false. Checked
// on random TL formulas and on translations of random FO formulas and of
// the gap readings, which must still agree with their sources.
inline LawReport law_finite(const FuzzConfig& cfg, const std::vector<GappedChain>& corpus) {
  LawReport rep{"finite"};
  std::vector<GappedChain> finite;
  for (const auto& m : corpus)
    if (m.is_finite_chain()) finite.push_back(m);
  Rng rng(cfg.seed);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    ++rep.trials;
    const auto f = gen_fo(cfg, rng);
    const FoOperand p = [a = gen_point_predicate(cfg, rng)](const std::string& v) {
      return tl_reading(a, v);
    };
    const FoOperand q = [b = gen_point_predicate(cfg, rng)](const std::string& v) {
      return tl_reading(b, v);
    };
    const FoFormula readings[] = {fo_tt::until_s("x", p, q), fo_tt::since_s("x", p, q),
                                  fo_tt::gamma_plus("x", p), fo_tt::gamma_minus("x", q)};
    const FoFormula gf = readings[t % 4];
    const auto g = translate(f);
    const auto gg = translate(gf);
    const auto tl_random = gen_tl(cfg, rng, 4);
    bool ok = true;
    for (TlFormula h : {g, gg, tl_random}) {
      const auto gaps = subformulas(h, {TlKind::UntilS, TlKind::SinceS});
      rep.stat_max("max_gap_subformulas", gaps.size());
      for (const auto& m : finite) {
        TlEvaluator ev(m);
        for (const auto& s : gaps) {
          ++rep.checks;
          const auto& b = ev.bits(s);
          if (ok && std::find(b.begin(), b.end(), 1) != b.end()) {
            rep.fail(print_tl(s) + " holds" + detail::at_model(m));
            ok = false;
          }
        }
      }
    }
    for (const auto& [src, out] : {std::pair{f, g}, std::pair{gf, gg}}) {
      rep.checks += finite.size();
      const auto v = check_equiv(src, out, finite);
      if (ok && !v.pass) {
        rep.fail(print_fo(src) + ": " + v.describe(finite));
        ok = false;
      }
    }
  }
  return rep;
}

}  // namespace stavi
