#include <gtest/gtest.h>

#include "stavi/expansion.hpp"
#include "stavi/oracle.hpp"
#include "stavi/semantics.hpp"
#include "stavi/tl_parse.hpp"

using namespace stavi;

namespace {

const std::vector<GappedChain>& corpus() {
  static const auto c = default_corpus(3, 2, 60, 11, 7);
  return c;
}

TlFormula P() { return tl::atom("P"); }
TlFormula Q() { return tl::atom("Q"); }

// Independent partition check: every dense stretch inside the interval is
// refined into alternating open pieces and sample points, and slots are
// assigned to pieces by exhaustive search.
struct Elem {
  std::size_t region;
  bool point;
};

std::vector<Elem> refine(const GappedChain& m, const IntervalSpec& iv, std::size_t k) {
  std::vector<Elem> out;
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].is_gap()) continue;
    if (m[r].is_point()) {
      if (contains(m, iv, Position::at_point(r))) out.push_back({r, true});
      continue;
    }
    std::vector<Rational> cs{0, 1};
    for (std::size_t i = 1; i <= k; ++i)
      cs.push_back(Rational(static_cast<long>(i)) / static_cast<long>(k + 1));
    for (const Boundary* b : {&iv.lo, &iv.hi})
      if (auto p = std::get_if<Position>(b); p && p->region == r) cs.push_back(*p->coord);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
      // the open stretch between two cut values is inside iff its midpoint is
      if (i > 0 && contains(m, iv, Position::in_dense(r, cs[i]))) out.push_back({r, true});
      if (contains(m, iv, Position::in_dense(r, (cs[i] + cs[i + 1]) / 2)))
        out.push_back({r, false});
    }
  }
  return out;
}

bool brute_pe(TlEvaluator& ev, const std::vector<Elem>& es, const PartitionExpression& pe) {
  const std::size_t k = pe.size();
  std::function<bool(std::size_t, std::size_t, std::size_t)> go =
      [&](std::size_t i, std::size_t slot, std::size_t used) -> bool {
    // `used` counts elements already in `slot`.
    if (i == es.size()) return slot == k && used > 0 && (!pe.in_o(slot - 1) || used == 1);
    const Elem& e = es[i];
    auto fits = [&](std::size_t s) { return ev.holds(pe.delta(s - 1), e.region); };
    auto single_ok = [&](std::size_t s, std::size_t n) {
      return !pe.in_o(s - 1) || (n == 1 && e.point);
    };
    if (used > 0 && fits(slot) && !pe.in_o(slot - 1) && go(i + 1, slot, used + 1)) return true;
    bool closed_ok = used > 0 && (!pe.in_o(slot - 1) || used == 1);
    if (closed_ok && slot < k && fits(slot + 1) && single_ok(slot + 1, 1) &&
        go(i + 1, slot + 1, 1))
      return true;
    return false;
  };
  if (es.empty()) return false;
  const Elem& e0 = es[0];
  if (!ev.holds(pe.delta(0), e0.region)) return false;
  if (pe.in_o(0) && !e0.point) return false;
  return go(1, 1, 1);
}

std::vector<Boundary> boundaries(const GappedChain& m) {
  std::vector<Boundary> out{MinusInfinity{}, PlusInfinity{}};
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].is_gap()) out.push_back(AtGap{r});
    if (m[r].is_point()) out.push_back(Position::at_point(r));
    if (m[r].is_dense()) {
      out.push_back(DenseEdge{r, Side::Left});
      out.push_back(DenseEdge{r, Side::Right});
      out.push_back(Position::in_dense(r, Rational(1, 4)));
      out.push_back(Position::in_dense(r, Rational(3, 4)));
    }
  }
  return out;
}

PartitionExpression random_pe(Rng& rng, std::size_t max_k) {
  const TlFormula lits[] = {tl::top(), P(), Q(), tl::lnot(P()), tl::lnot(Q()),
                            tl::land(P(), Q())};
  std::size_t k = 1 + rng.below(max_k);
  std::vector<TlFormula> d;
  std::vector<bool> o;
  for (std::size_t i = 0; i < k; ++i) {
    d.push_back(lits[rng.below(6)]);
    o.push_back(rng.chance(35));
  }
  return PartitionExpression(d, o);
}

}  // namespace

TEST(EvalFo, Examples) {
  EXPECT_TRUE(eval_fo(parse_model("dense{P}"), parse_fo("(E x (P x))"), {}));
  EXPECT_TRUE(eval_fo(parse_model("pt{} pt{P}"), parse_fo("(E y (& (< x y) (P y)))"),
                      {{"x", Position::at_point(0)}}));
  EXPECT_TRUE(eval_fo(parse_model("dense{P} gap dense{}"),
                      parse_fo("(E x (E y (& (< x y) (& (P x) (! (P y))))))"), {}));
  EXPECT_THROW(eval_fo(parse_model("pt{}"), parse_fo("(P x)"), {}), UnassignedVariable);
}

TEST(EvalFo, DenseHasNoEndpoints) {
  auto m = parse_model("dense{}");
  // no least element, and between any two points there is a third
  EXPECT_FALSE(eval_fo(m, parse_fo("(E x (A y (! (< y x))))"), {}));
  EXPECT_TRUE(eval_fo(m, parse_fo("(A x (A y (| (! (< x y)) (E z (& (< x z) (< z y))))))"), {}));
  EXPECT_TRUE(eval_fo(m, parse_fo("(E z (& (< x z) (< z y)))"),
                      {{"x", Position::in_dense(0, Rational(1, 3))},
                       {"y", Position::in_dense(0, Rational(1, 2))}}));
}

TEST(EvalFo, AgreesWithBruteForceOnChains) {
  FuzzConfig cfg;
  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    auto f = gen_fo(cfg, rng);
    auto m = gen_model(cfg, rng, false);
    for (std::size_t r = 0; r < m.size(); ++r)
      ASSERT_EQ(eval_fo(m, f, {{"x", Position::at_point(r)}}), brute_fo(m, f, {{"x", r}}))
          << print_fo(f) << " on " << print_model(m);
  }
}

TEST(EvalFo, HomogeneousInsideDense) {
  FuzzConfig cfg;
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    auto f = gen_fo(cfg, rng);
    auto m = gen_model(cfg, rng, true);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (!m[r].is_dense()) continue;
      ASSERT_EQ(eval_fo(m, f, {{"x", Position::in_dense(r, Rational(1, 7))}}),
                eval_fo(m, f, {{"x", Position::in_dense(r, Rational(5, 6))}}));
    }
  }
}

TEST(EvalTl, Examples) {
  EXPECT_EQ(eval_tl(parse_model("dense{P} gap dense{Q}"), tl::until_s(P(), Q())).str(), "1 - 0");
  EXPECT_EQ(eval_tl(parse_model("pt{P} pt{Q}"), tl::until(P(), Q())).str(), "1 0");
  EXPECT_EQ(eval_tl(parse_model("pt{P} pt{Q} pt{P}"), tl::until_s(P(), Q())).str(), "0 0 0");
  EXPECT_EQ(eval_tl(parse_model("dense{P} gap dense{Q}"), tl::since_s(Q(), P())).str(), "0 - 1");
}

TEST(EvalTl, UntilIsStrict) {
  for (const char* m : {"pt{}", "pt{P}", "pt{Q}", "pt{P,Q}"})
    EXPECT_FALSE(eval_tl(parse_model(m), tl::until(P(), Q())).at(0));
}

TEST(EvalTl, UntilSinceMatchTruthTables) {
  const std::vector<std::pair<TlFormula, FoOperand>> ops = {
      {P(), fo_atom("P")},
      {Q(), fo_atom("Q")},
      {tl::lnot(P()), [](const std::string& v) { return FoFormula::lnot(FoFormula::pred("P", v)); }},
      {tl::top(), [](const std::string& v) { return FoFormula::equal(v, v); }}};
  for (const auto& [a, fa] : ops)
    for (const auto& [b, fb] : ops) {
      auto v1 = check_equiv(fo_tt::until("x", fa, fb), tl::until(a, b), corpus());
      EXPECT_TRUE(v1.pass) << v1.describe(corpus());
      auto v2 = check_equiv(fo_tt::since("x", fa, fb), tl::since(a, b), corpus());
      EXPECT_TRUE(v2.pass) << v2.describe(corpus());
      auto v3 = check_equiv(fo_tt::until_s("x", fa, fb), tl::until_s(a, b), corpus());
      EXPECT_TRUE(v3.pass) << v3.describe(corpus());
      auto v4 = check_equiv(fo_tt::since_s("x", fa, fb), tl::since_s(a, b), corpus());
      EXPECT_TRUE(v4.pass) << v4.describe(corpus());
    }
}

TEST(EvalTl, MirrorLaw) {
  FuzzConfig cfg;
  Rng rng(8);
  for (int t = 0; t < 300; ++t) {
    auto f = gen_tl(cfg, rng, 4);
    auto m = gen_model(cfg, rng, t % 2 == 0);
    auto a = eval_tl(m, f).values();
    auto b = eval_tl(reverse(m), tl::mirror(f)).values();
    std::reverse(b.begin(), b.end());
    ASSERT_EQ(a, b) << print_tl(f) << " on " << print_model(m);
  }
}

TEST(EvalTl, GammaPlusThreeWays) {
  const std::vector<std::pair<TlFormula, FoOperand>> ops = {
      {P(), fo_atom("P")},
      {tl::lnot(Q()), [](const std::string& v) { return FoFormula::lnot(FoFormula::pred("Q", v)); }}};
  for (const auto& [p, fp] : ops) {
    for (const auto& m : corpus()) {
      EXPECT_EQ(gamma_plus_direct(m, p), eval_tl(m, tl::gamma_plus(p))) << print_model(m);
      EXPECT_EQ(gamma_minus_direct(m, p), eval_tl(m, tl::gamma_minus(p))) << print_model(m);
    }
    auto v = check_equiv(fo_tt::gamma_plus("x", fp), tl::gamma_plus(p), corpus());
    EXPECT_TRUE(v.pass) << v.describe(corpus());
    v = check_equiv(fo_tt::gamma_minus("x", fp), tl::gamma_minus(p), corpus());
    EXPECT_TRUE(v.pass) << v.describe(corpus());
  }
}

TEST(EvalPointPredicate, Examples) {
  auto m = parse_model("pt{P} dense{Q}");
  EXPECT_TRUE(eval_point_predicate(m, Position::at_point(0), P()));
  EXPECT_TRUE(eval_point_predicate(m, Position::in_dense(1, Rational(1, 2)),
                                   tl::land(tl::lnot(P()), Q())));
  auto g = parse_model("dense{P} gap dense{}");
  EXPECT_TRUE(eval_point_predicate(g, Position::in_dense(0, Rational(1, 2)), tl::gamma_plus(P())));
}

TEST(EvalPe, Examples) {
  auto two = parse_model("pt{} pt{}");
  EXPECT_TRUE(eval_pe(two, IntervalSpec::closed(Position::at_point(0), Position::at_point(1)),
                      PartitionExpression({tl::top(), tl::top()}, {true, false})));
  auto d = parse_model("dense{P}");
  EXPECT_TRUE(eval_pe(d, IntervalSpec::line(), PartitionExpression::one(P())));
  EXPECT_FALSE(eval_pe(d, IntervalSpec::line(), PartitionExpression({P(), Q()}, {false, false})));
  // empty intervals satisfy nothing
  EXPECT_FALSE(eval_pe(two, IntervalSpec::open(Position::at_point(0), Position::at_point(1)),
                       PartitionExpression::one(tl::top())));
  EXPECT_FALSE(eval_pe(two, IntervalSpec::closed(Position::at_point(1), Position::at_point(0)),
                       PartitionExpression::one(tl::top())));
  // a single point inside a dense stretch needs dense neighbours
  EXPECT_TRUE(eval_pe(d, IntervalSpec::line(),
                      PartitionExpression({P(), P(), P()}, {false, true, false})));
  EXPECT_FALSE(eval_pe(d, IntervalSpec::line(),
                       PartitionExpression({P(), P(), P()}, {false, true, true})));
  EXPECT_FALSE(eval_pe(d, IntervalSpec::line(), PartitionExpression({P()}, {true})));
}

TEST(EvalPe, SingletonMatchesPointPredicate) {
  for (const auto& m : corpus())
    for (const auto& pos : enumerate_sample_positions(m, 1))
      for (auto d : {P(), tl::lnot(Q()), tl::until(P(), Q())})
        EXPECT_EQ(eval_pe(m, IntervalSpec::closed(pos, pos), PartitionExpression::one(d, true)),
                  eval_point_predicate(m, pos, d));
}

TEST(EvalPe, AgreesWithRefinementSearch) {
  Rng rng(9);
  for (const auto& m : corpus()) {
    TlEvaluator ev(m);
    auto bs = boundaries(m);
    for (int t = 0; t < 30; ++t) {
      auto pe = random_pe(rng, 3);
      IntervalSpec iv{bs[rng.below(bs.size())], bs[rng.below(bs.size())], false, false};
      iv.lo_closed = std::holds_alternative<Position>(iv.lo) && rng.chance(50);
      iv.hi_closed = std::holds_alternative<Position>(iv.hi) && rng.chance(50);
      auto es = refine(m, iv, 2 * pe.size() + 1);
      ASSERT_EQ(eval_pe(ev, iv, pe), brute_pe(ev, es, pe))
          << print_pe(pe) << " on " << print_model(m);
    }
  }
}
