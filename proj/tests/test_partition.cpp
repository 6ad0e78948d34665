#include <gtest/gtest.h>

#include "stavi/oracle.hpp"
#include "stavi/partition.hpp"

using namespace stavi;

namespace {

const std::vector<GappedChain>& corpus() {
  static const auto c = default_corpus(3, 2, 40, 17, 6);
  return c;
}

TlFormula P() { return tl::atom("P"); }
TlFormula Q() { return tl::atom("Q"); }
TlFormula R() { return tl::atom("R"); }

std::vector<IntervalSpec> some_intervals(const GappedChain& m) {
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
        bool lc = (c & 1) && std::holds_alternative<Position>(a);
        bool hc = (c & 2) && std::holds_alternative<Position>(b);
        if (((c & 1) && !lc) || ((c & 2) && !hc)) continue;
        out.push_back({a, b, lc, hc});
      }
  return out;
}

// Simple formula over one free variable "x" for evaluating sentences.
bool exists_witness(TlEvaluator& ev, const SimpleFormula& f, Assignment asg, const std::string& z) {
  std::vector<Position> used;
  for (const auto& [v, p] : asg) used.push_back(p);
  for (const auto& p : witness_positions(ev.model(), used)) {
    asg[z] = p;
    if (eval_simple(ev, f, asg)) return true;
  }
  return false;
}

}  // namespace

TEST(PeConjoin, Examples) {
  auto r = pe_conjoin(PartitionExpression::one(P()), PartitionExpression::one(Q()));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], PartitionExpression::one(tl::land(P(), Q())));
  r = pe_conjoin(PartitionExpression::one(P(), true), PartitionExpression::one(Q()));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], PartitionExpression::one(tl::land(P(), Q()), true));
  r = pe_conjoin(PartitionExpression({P(), Q()}, {false, false}), PartitionExpression::one(R()));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], PartitionExpression({tl::land(P(), R()), tl::land(Q(), R())}, {false, false}));
}

TEST(PeConjoin, ExactOnAllIntervals) {
  FuzzConfig cfg;
  Rng rng(21);
  int trials = 0;
  for (const auto& m : corpus()) {
    TlEvaluator ev(m);
    auto ivs = some_intervals(m);
    for (int t = 0; t < 9; ++t, ++trials) {
      auto p = gen_pe(cfg, rng), q = gen_pe(cfg, rng);
      auto rs = pe_conjoin(p, q);
      for (const auto& iv : ivs) {
        bool want = eval_pe(ev, iv, p) && eval_pe(ev, iv, q);
        bool got = false;
        for (const auto& r : rs) got = got || eval_pe(ev, iv, r);
        ASSERT_EQ(want, got) << print_pe(p) << " & " << print_pe(q) << " on " << print_model(m);
      }
    }
  }
  EXPECT_GE(trials, 1000);
}

TEST(Simple, MirrorExample) {
  EXPECT_EQ(mirror(PartitionExpression({P(), Q()}, {true, false})),
            PartitionExpression({Q(), P()}, {false, true}));
}

TEST(Simple, OpenSugarExpands) {
  auto f = simple::open(PartitionExpression::one(P()), "a", "b");
  ASSERT_EQ(f.kind(), SimpleKind::Leaf);
  EXPECT_EQ(f.basic().pe, PartitionExpression({tl::top(), P(), tl::top()}, {true, false, true}));
}

TEST(SimpleToNormal, Examples) {
  auto nf = simple_to_normal(simple::var_less("z0", "z1"));
  ASSERT_EQ(nf.size(), 1u);
  EXPECT_EQ(nf[0].points.size(), 2u);
  EXPECT_TRUE(nf[0].gaps[0].is_any());
  auto both = SimpleFormula::land(simple::line(PartitionExpression::one(P())),
                                  simple::line(PartitionExpression::one(Q())));
  auto target = simple::line(PartitionExpression::one(tl::land(P(), Q())));
  auto s = simple_to_normal(both);
  for (const auto& m : corpus()) {
    TlEvaluator ev(m);
    EXPECT_EQ(eval_normal_set(ev, s, {}), eval_simple(ev, target, {})) << print_model(m);
  }
}

TEST(SimpleToNormal, Equivalent) {
  FuzzConfig cfg;
  Rng rng(22);
  const std::vector<std::string> vars{"a", "b", "c"};
  int trials = 0;
  for (int t = 0; t < 400; ++t) {
    auto f = gen_simple(cfg, rng, vars);
    auto nfs = simple_to_normal(f);
    const auto& m = corpus()[rng.below(corpus().size())];
    TlEvaluator ev(m);
    for (const auto& asg : all_assignments(m, vars)) {
      ++trials;
      ASSERT_EQ(eval_simple(ev, f, asg), eval_normal_set(ev, nfs, asg))
          << print_simple(f) << " on " << print_model(m);
    }
  }
  EXPECT_GE(trials, 1000);
}

TEST(ExistsElim, Equivalent) {
  FuzzConfig cfg;
  Rng rng(23);
  const std::vector<std::string> vars{"a", "b", "c"};
  for (int t = 0; t < 300; ++t) {
    auto f = gen_simple(cfg, rng, vars);
    auto nfs = simple_to_normal(f);
    const std::string z = vars[rng.below(3)];
    auto e = exists_elim(nfs, z);
    auto back = normal_set_to_simple(nfs);
    auto es = exists_simple(f, z);
    EXPECT_TRUE(is_structurally_simple(es));
    const auto& m = corpus()[rng.below(corpus().size())];
    TlEvaluator ev(m);
    std::vector<std::string> rest;
    for (const auto& v : vars)
      if (v != z) rest.push_back(v);
    for (const auto& asg : all_assignments(m, rest)) {
      bool want = exists_witness(ev, f, asg, z);
      ASSERT_EQ(want, eval_normal_set(ev, e, asg)) << print_simple(f) << " E " << z << " on "
                                                   << print_model(m);
      ASSERT_EQ(want, eval_simple(ev, es, asg)) << print_simple(f) << " on " << print_model(m);
    }
  }
}

TEST(ExistsElim, EqualityBoundDropped) {
  auto f = SimpleFormula::land(simple::var_eq("a", "b"), simple::at(P(), "a"));
  auto nfs = simple_to_normal(f);
  ASSERT_EQ(nfs.size(), 1u);
  auto e = exists_elim(nfs[0], "b");
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].points, (std::vector<std::vector<std::string>>{{"a"}}));
  EXPECT_EQ(e[0].labels[0], P());
  EXPECT_THROW(exists_elim(nfs[0], "q"), VariableNotFree);
}

TEST(ExistsElim, LaterPointExample) {
  // E z2 (z1 < z2 and P at z2): some P point after z1
  auto f = SimpleFormula::land(simple::var_less("z1", "z2"), simple::at(P(), "z2"));
  auto e = exists_simple(f, "z2");
  auto expect = simple::right_ray(PartitionExpression({tl::top(), tl::top(), P(), tl::top()},
                                                      {true, false, true, false}), "z1");
  auto alt = simple::right_ray(PartitionExpression({tl::top(), P(), tl::top()},
                                                   {true, true, false}), "z1");
  auto alt2 = simple::right_ray(PartitionExpression({tl::top(), P()}, {true, true}), "z1");
  auto alt3 = simple::right_ray(PartitionExpression({tl::top(), tl::top(), P()},
                                                    {true, false, true}), "z1");
  auto want = SimpleFormula::lor({expect, alt, alt2, alt3});
  for (const auto& m : corpus()) {
    TlEvaluator ev(m);
    for (const auto& asg : all_assignments(m, {"z1"}))
      ASSERT_EQ(eval_simple(ev, e, asg), eval_simple(ev, want, asg)) << print_model(m);
  }
}

TEST(BuildF, Examples) {
  auto f = build_F({P()}, {true}, TerminalMode::bounded());
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0], P());
  f = build_F({P(), Q()}, {false, false}, TerminalMode::bounded());
  EXPECT_EQ(f[0], tl::land(P(), tl::until_star(P(), Q())));
  auto ray = build_F({P()}, {false}, TerminalMode::ray());
  EXPECT_EQ(eval_tl(parse_model("dense{P}"), ray[0]).str(), "1");
}

TEST(BuildF, Contracts) {
  FuzzConfig cfg;
  Rng rng(24);
  for (int t = 0; t < 150; ++t) {
    auto pe = gen_pe(cfg, rng);
    auto gp = gen_point_predicate(cfg, rng);
    auto fb = build_F(pe, TerminalMode::bounded())[0];
    auto fr = build_F(pe, TerminalMode::ray())[0];
    auto fg = build_F(pe, TerminalMode::to_gap(gp))[0];
    for (const auto& m : corpus()) {
      TlEvaluator ev(m);
      auto gpd = gamma_plus_direct(m, gp);
      for (const auto& pos : enumerate_sample_positions(m, 1)) {
        bool bounded = false;
        for (const auto& q : witness_positions(m, {pos}))
          if (compare(m, pos, q) <= 0)
            bounded = bounded || eval_pe(ev, IntervalSpec::closed(pos, q), pe);
        ASSERT_EQ(ev.holds(fb, pos.region), bounded) << print_pe(pe) << " " << print_model(m);
        bool ray = eval_pe(ev, {pos, PlusInfinity{}, true, false}, pe);
        ASSERT_EQ(ev.holds(fr, pos.region), ray) << print_pe(pe) << " " << print_model(m);
        // the gap that succeeds pos is the first gap after which gp fails
        bool to_gap = false;
        const auto& gpb = ev.bits(gp);
        if (gpd.at(pos.region)) {
          for (std::size_t g = pos.region + 1; g < m.size(); ++g)
            if (m[g].is_gap() && !gpb[g + 1]) {
              to_gap = eval_pe(ev, {pos, AtGap{g}, true, false}, pe);
              break;
            }
        }
        ASSERT_EQ(ev.holds(fg, pos.region), to_gap)
            << print_pe(pe) << " gap " << print_tl(gp) << " " << print_model(m) << " @"
            << pos.region;
      }
    }
  }
}
