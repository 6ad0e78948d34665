#include <gtest/gtest.h>

#include <functional>
#include <limits>

#include "stavi/negation.hpp"
#include "stavi/oracle.hpp"

using namespace stavi;

namespace {

const std::vector<GappedChain>& corpus() {
  static const auto c = default_corpus(3, 2, 40, 31, 6);
  return c;
}

TlFormula P() { return tl::atom("P"); }
TlFormula Q() { return tl::atom("Q"); }

bool less(const GappedChain& m, const Position& a, const Position& b) {
  return compare(m, a, b) < 0;
}

// exists x1 < .. < xn in (a,b) with preds, searched over homogeneous
// representatives.
bool chain_holds(TlEvaluator& ev, const std::vector<TlFormula>& preds, const Position& a,
                 const Position& b) {
  const GappedChain& m = ev.model();
  std::vector<Position> used{a, b};
  std::function<bool(std::size_t, const Position&)> go = [&](std::size_t i, const Position& lo) {
    if (i == preds.size()) return true;
    for (const auto& p : witness_positions(m, used)) {
      if (!less(m, lo, p) || !less(m, p, b) || !ev.holds(preds[i], p.region)) continue;
      used.push_back(p);
      bool ok = go(i + 1, p);
      used.pop_back();
      if (ok) return true;
    }
    return false;
  };
  return go(0, a);
}

std::size_t points_between(const GappedChain& m, const Position& a, const Position& b) {
  std::size_t n = 0;
  for (const auto& p : witness_positions(m, {a, b})) {
    if (!less(m, a, p) || !less(m, p, b)) continue;
    if (p.coord) return std::numeric_limits<std::size_t>::max();
    ++n;
  }
  return n;
}

PartitionExpression random_open_pe(Rng& rng, std::size_t max_slots) {
  FuzzConfig cfg;
  return gen_pe(cfg, rng, max_slots);
}

}  // namespace

TEST(NegHelpers, CountingAndContainment) {
  for (std::size_t i = 0; i < corpus().size(); i += 3) {
    const auto& m = corpus()[i];
    TlEvaluator ev(m);
    for (const auto& asg : all_assignments(m, {"a", "b"})) {
      const auto& a = asg.at("a");
      const auto& b = asg.at("b");
      const std::size_t n = points_between(m, a, b);
      const bool lt = less(m, a, b);
      for (std::size_t k = 0; k <= 2; ++k) {
        const bool ex = lt && n == k, most = lt && n <= k;
        ASSERT_EQ(ex, eval_simple(ev, neg::exactly(k, "a", "b"), asg));
        ASSERT_EQ(!ex, eval_simple(ev, neg::not_exactly(k, "a", "b"), asg)) << print_model(m);
        ASSERT_EQ(most, eval_simple(ev, neg::at_most(k, "a", "b"), asg));
        ASSERT_EQ(!most, eval_simple(ev, neg::not_at_most(k, "a", "b"), asg));
      }
      const bool has = chain_holds(ev, {P()}, a, b);
      ASSERT_EQ(has, eval_simple(ev, neg::contains(P(), "a", "b"), asg));
      ASSERT_EQ(!has, eval_simple(ev, neg::not_contains(P(), "a", "b"), asg));
      const bool suc = lt && n == 0;
      ASSERT_EQ(!suc, eval_simple(ev, neg::not_successor("a", "b"), asg));
    }
  }
}

TEST(NegExistsChain, Examples) {
  // no Q point precedes a P point
  auto m = parse_model("dense{P} gap dense{Q}");
  auto f = neg_exists_chain({Q(), P()}, "a", "b");
  Assignment asg{{"a", Position::at_point(0)}, {"b", Position::at_point(0)}};
  asg["a"] = Position::in_dense(0, Rational(1, 2));
  asg["b"] = Position::in_dense(2, Rational(1, 2));
  EXPECT_TRUE(eval_simple(m, f, asg));
  EXPECT_FALSE(eval_simple(m, neg_exists_chain({P(), Q()}, "a", "b"), asg));
  // n = 1 on an empty interval
  auto one = neg_exists_chain({P()}, "a", "b");
  EXPECT_TRUE(eval_simple(m, one, {{"a", asg["b"]}, {"b", asg["a"]}}));
}

TEST(NegExistsChain, AgreesWithSearch) {
  FuzzConfig cfg;
  Rng rng(41);
  std::size_t checked = 0;
  for (int t = 0; t < 60; ++t) {
    std::vector<TlFormula> preds;
    const std::size_t n = 1 + rng.below(3);
    for (std::size_t i = 0; i < n; ++i) preds.push_back(gen_point_predicate(cfg, rng));
    auto f = neg_exists_chain(preds, "a", "b");
    ASSERT_TRUE(is_structurally_simple(f));
    for (int r = 0; r < 6; ++r) {
      const auto& m = corpus()[rng.below(corpus().size())];
      TlEvaluator ev(m);
      for (const auto& asg : all_assignments(m, {"a", "b"})) {
        ++checked;
        ASSERT_EQ(!chain_holds(ev, preds, asg.at("a"), asg.at("b")), eval_simple(ev, f, asg))
            << print_model(m);
      }
    }
  }
  EXPECT_GE(checked, 1000u);
}

TEST(NegExistsChain, CasesCoverAndAreSound) {
  FuzzConfig cfg;
  Rng rng(42);
  for (int t = 0; t < 30; ++t) {
    std::vector<TlFormula> preds;
    const std::size_t n = 2 + rng.below(2);
    for (std::size_t i = 0; i < n; ++i) preds.push_back(gen_point_predicate(cfg, rng));
    auto cases = neg_exists_chain_cases(preds, "a", "b");
    for (int r = 0; r < 6; ++r) {
      const auto& m = corpus()[rng.below(corpus().size())];
      TlEvaluator ev(m);
      for (const auto& asg : all_assignments(m, {"a", "b"})) {
        if (points_between(m, asg.at("a"), asg.at("b")) == 0 || !less(m, asg.at("a"), asg.at("b")))
          continue;
        const bool want = !chain_holds(ev, preds, asg.at("a"), asg.at("b"));
        bool any = false;
        for (const auto& c : cases) {
          if (!eval_simple(ev, c.cond, asg)) continue;
          any = true;
          ASSERT_EQ(want, eval_simple(ev, c.form, asg)) << "case " << c.name << " " << print_model(m);
        }
        ASSERT_TRUE(any) << print_model(m);
      }
    }
  }
}

TEST(NegPartOpen, BaseExample) {
  auto m = parse_model("pt{P} pt{} pt{P}");
  auto f = neg_part_open(PartitionExpression::one(P()), "a", "b");
  auto at = [](std::size_t r) { return Position::at_point(r); };
  EXPECT_TRUE(eval_simple(m, f, {{"a", at(0)}, {"b", at(2)}}));
  EXPECT_TRUE(eval_simple(m, f, {{"a", at(0)}, {"b", at(1)}}));
  EXPECT_TRUE(eval_simple(m, f, {{"a", at(1)}, {"b", at(0)}}));
  auto g = neg_part_open(PartitionExpression::one(tl::lnot(Q())), "a", "b");
  EXPECT_FALSE(eval_simple(m, g, {{"a", at(0)}, {"b", at(2)}}));
}

TEST(NegPartOpen, ComplementsEvalPe) {
  Rng rng(43);
  std::size_t checked = 0;
  for (int t = 0; t < 120; ++t) {
    auto pe = random_open_pe(rng, 3);
    auto f = neg_part_open(pe, "a", "b");
    ASSERT_TRUE(is_structurally_simple(f));
    for (int r = 0; r < 5; ++r) {
      const auto& m = corpus()[rng.below(corpus().size())];
      TlEvaluator ev(m);
      for (const auto& asg : all_assignments(m, {"a", "b"})) {
        ++checked;
        const bool holds = eval_pe(ev, IntervalSpec::open(asg.at("a"), asg.at("b")), pe);
        ASSERT_EQ(!holds, eval_simple(ev, f, asg)) << print_pe(pe) << " on " << print_model(m);
      }
    }
  }
  EXPECT_GE(checked, 1000u);
}

TEST(NegPartOpen, CasesCoverAndAreSound) {
  Rng rng(44);
  int tried = 0;
  while (tried < 60) {
    auto pe = random_open_pe(rng, 3);
    if (pe.size() < 2 || pe.singleton.front() || pe.singleton.back()) continue;
    ++tried;
    auto cases = neg_part_open_cases(pe, "a", "b");
    for (int r = 0; r < 5; ++r) {
      const auto& m = corpus()[rng.below(corpus().size())];
      TlEvaluator ev(m);
      for (const auto& asg : all_assignments(m, {"a", "b"})) {
        const auto& a = asg.at("a");
        const auto& b = asg.at("b");
        if (!less(m, a, b) || points_between(m, a, b) == 0) continue;
        const bool want = !eval_pe(ev, IntervalSpec::open(a, b), pe);
        bool any = false;
        for (const auto& c : cases) {
          if (!eval_simple(ev, c.cond, asg)) continue;
          any = true;
          ASSERT_EQ(want, eval_simple(ev, c.form, asg))
              << "case " << c.name << " " << print_pe(pe) << " on " << print_model(m);
        }
        ASSERT_TRUE(any) << print_pe(pe) << " on " << print_model(m);
      }
    }
  }
}

TEST(NegExistsPrefix, AgreesWithSearch) {
  Rng rng(45);
  for (int t = 0; t < 60; ++t) {
    auto pe = random_open_pe(rng, 3);
    const Side side = rng.chance(50) ? Side::Left : Side::Right;
    auto f = neg_exists_prefix(pe, "a", "b", side);
    for (int r = 0; r < 5; ++r) {
      const auto& m = corpus()[rng.below(corpus().size())];
      TlEvaluator ev(m);
      for (const auto& asg : all_assignments(m, {"a", "b"})) {
        const auto& a = asg.at("a");
        const auto& b = asg.at("b");
        bool want = false;
        for (const auto& z : witness_positions(m, {a, b})) {
          if (!less(m, a, z) || !less(m, z, b)) continue;
          IntervalSpec iv = side == Side::Left ? IntervalSpec{a, z, false, true}
                                               : IntervalSpec{z, b, true, false};
          if (eval_pe(ev, iv, pe)) want = true;
        }
        ASSERT_EQ(!want, eval_simple(ev, f, asg)) << print_pe(pe) << " on " << print_model(m);
      }
    }
  }
}

TEST(NegateSimple, Trichotomy) {
  auto f = negate_simple(simple::var_less("a", "b"));
  EXPECT_EQ(print_simple(f), "((b < a) | (a = b))");
}

TEST(NegateSimple, ComplementLaw) {
  FuzzConfig cfg;
  Rng rng(46);
  const std::vector<std::string> vars{"a", "b"};
  std::size_t checked = 0;
  for (int t = 0; t < 150; ++t) {
    auto f = gen_simple(cfg, rng, vars);
    auto g = negate_simple(f);
    ASSERT_TRUE(is_structurally_simple(g));
    const auto& m = corpus()[rng.below(corpus().size())];
    TlEvaluator ev(m);
    for (const auto& asg : all_assignments(m, vars)) {
      ++checked;
      ASSERT_NE(eval_simple(ev, f, asg), eval_simple(ev, g, asg))
          << print_simple(f) << " on " << print_model(m);
    }
  }
  EXPECT_GE(checked, 1000u);
}

TEST(NegateSimple, GroupedChainShapes) {
  FuzzConfig cfg;
  Rng rng(48);
  std::size_t checked = 0;
  for (int t = 0; t < 60; ++t) {
    const std::size_t k = rng.below(3);
    std::vector<TlFormula> ds;
    for (std::size_t i = 0; i < k; ++i) ds.push_back(gen_point_predicate(cfg, rng));
    const TlFormula s = k == 2 || rng.chance(40) ? tl::top() : gen_point_predicate(cfg, rng);
    std::vector<SimpleFormula> alts;
    for (unsigned mask = 0; mask < (1u << (k + 1)); ++mask) {
      PartitionExpression pe({tl::top()}, {true});
      for (std::size_t i = 0; i <= k; ++i) {
        if (mask >> i & 1) pe.deltas.push_back(s), pe.singleton.push_back(false);
        pe.deltas.push_back(i < k ? ds[i] : tl::top());
        pe.singleton.push_back(true);
      }
      // occasionally leave a shape out so that no grouping applies
      if (t % 7 == 3 && k < 2 && mask == 1) continue;
      alts.push_back(simple::closed(pe, "a", "b"));
    }
    alts.push_back(simple::at(gen_point_predicate(cfg, rng), "a"));
    const auto f = SimpleFormula::lor(alts);
    const auto g = negate_simple(f);
    ASSERT_TRUE(is_structurally_simple(g));
    for (int r = 0; r < 4; ++r) {
      const auto& m = corpus()[rng.below(corpus().size())];
      TlEvaluator ev(m);
      for (const auto& asg : all_assignments(m, {"a", "b"})) {
        ++checked;
        ASSERT_NE(eval_simple(ev, f, asg), eval_simple(ev, g, asg))
            << print_simple(f) << " on " << print_model(m);
      }
    }
  }
  EXPECT_GE(checked, 1000u);
}

TEST(NegateSimple, MirrorLaw) {
  FuzzConfig cfg;
  Rng rng(47);
  for (int t = 0; t < 40; ++t) {
    auto f = gen_simple(cfg, rng, {"a", "b"});
    auto g = mirror(negate_simple(f));
    const auto& m = corpus()[rng.below(corpus().size())];
    const auto rm = reverse(m);
    for (const auto& asg : all_assignments(m, {"a", "b"})) {
      Assignment ra;
      for (const auto& [v, p] : asg) ra[v] = mirror_position(m, p);
      ASSERT_NE(eval_simple(m, f, asg), eval_simple(rm, g, ra)) << print_model(m);
    }
  }
}
